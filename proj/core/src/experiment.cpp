#include "doclab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "doclab/bounds.hpp"
#include "doclab/doc_histogram.hpp"
#include "doclab/erm.hpp"
#include "doclab/idx.hpp"
#include "doclab/report.hpp"

namespace doclab {

namespace {

const std::vector<std::string> kAllStages = {"doc", "qn", "volumes", "bounds",
                                             "report"};

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string() +
                                    " (has the producing stage run?)");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Operational progress marker. Holds wall-clock data, so it is *not* part of
// the reproducible artifact set.
class StageTracker {
 public:
  StageTracker(const RunPaths& paths, const std::string& name, std::uint64_t seed)
      : paths_(paths) {
    state_["schema_version"] = 1;
    state_["experiment"] = name;
    state_["seed"] = seed;
    state_["completed"] = nlohmann::json::array();
    state_["failed"] = nullptr;
    state_["wall_ms"] = nlohmann::json::object();
    if (std::filesystem::exists(paths_.stage_json())) {
      try {
        state_ = nlohmann::json::parse(read_file(paths_.stage_json()));
        state_["failed"] = nullptr;
      } catch (...) {
        // start a fresh marker if the old one is unreadable
      }
    }
  }

  void mark_done(const std::string& stage, std::int64_t wall_ms) {
    auto& completed = state_["completed"];
    if (std::find(completed.begin(), completed.end(), stage) == completed.end())
      completed.push_back(stage);
    state_["wall_ms"][stage] = wall_ms;
    flush();
  }

  void mark_failed(const std::string& stage, const std::string& error) {
    state_["failed"] = stage;
    state_["error"] = error;
    flush();
  }

 private:
  void flush() { write_file(paths_.stage_json(), state_.dump(2) + "\n"); }

  RunPaths paths_;
  nlohmann::json state_;
};

}  // namespace

Problem build_problem(const ExperimentConfig& cfg, std::uint64_t seed) {
  Problem ctx;
  if (cfg.kind == ExperimentConfig::ProblemKind::kGaussian) {
    auto source = std::make_unique<GaussianSource>(cfg.gaussian, cfg.random_labels);
    const std::string source_id = source->id();
    RngStream test_rng = derive_stream(seed, streams::make(streams::kTestSet));
    ctx.test = gen_gaussian_balanced(cfg.gaussian, cfg.test_samples, test_rng);
    if (cfg.random_labels) {
      RngStream label_rng =
          derive_stream(seed, streams::make(streams::kRandomLabels));
      ctx.test = with_random_labels(ctx.test, label_rng);
      // Any classifier misclassifies a coin-flip label half the time.
      ctx.analytic_e_min = 0.5;
    } else {
      ctx.analytic_e_min = bayes_error_gaussian(cfg.gaussian);
    }
    ctx.test.id = source_id + "/test";
    ctx.source = std::move(source);
  } else {
    const RawDigits train_raw = load_idx(cfg.mnist.train_images, cfg.mnist.train_labels);
    const RawDigits test_raw = load_idx(cfg.mnist.test_images, cfg.mnist.test_labels);
    ctx.pool = std::make_unique<LabeledDataset>(filter_binary(
        train_raw, cfg.mnist.class_a, cfg.mnist.class_b, cfg.mnist.train_per_class));
    std::ostringstream id;
    id << "mnist(" << cfg.mnist.class_a << " vs " << cfg.mnist.class_b << ")";
    ctx.pool->id = id.str() + "/train-pool";
    ctx.test = filter_binary(test_raw, cfg.mnist.class_a, cfg.mnist.class_b,
                             cfg.mnist.test_per_class);
    ctx.test.id = id.str() + "/test";
    ctx.source = std::make_unique<PoolSource>(*ctx.pool);
    // No analytic minimum exists for MNIST; the DOC estimate stands in.
  }
  return ctx;
}

namespace {

class ExperimentRun {
 public:
  ExperimentRun(const ExperimentConfig& cfg, const RunOptions& options)
      : cfg_(cfg),
        seed_(options.seed.value_or(cfg.seed)),
        workers_(options.workers.value_or(cfg.workers)),
        paths_(RunPaths::for_run(options.out_dir, cfg.name, seed_)) {}

  const RunPaths& paths() const { return paths_; }
  std::uint64_t seed() const { return seed_; }

  void run_stage(const std::string& stage) {
    if (stage == "doc") stage_doc();
    else if (stage == "qn") stage_qn();
    else if (stage == "volumes") stage_volumes();
    else if (stage == "bounds") stage_bounds();
    else if (stage == "report") stage_report();
    else throw std::invalid_argument("unknown stage: " + stage);
  }

 private:
  Problem& problem() {
    if (!problem_) problem_ = build_problem(cfg_, seed_);
    return *problem_;
  }

  DocHistogram load_doc() const {
    return DocHistogram::from_json_string(read_file(paths_.doc_json()));
  }

  void stage_doc() {
    Problem& ctx = problem();
    DocHistogram doc = estimate_doc(cfg_.arch, ctx.test, cfg_.doc.samples,
                                    cfg_.doc.bins, seed_, workers_);
    if (ctx.analytic_e_min) doc.set_analytic_e_min(*ctx.analytic_e_min);
    write_file(paths_.doc_json(), doc.to_json_string() + "\n");
    std::ostringstream csv;
    doc.write_csv(csv);
    write_file(paths_.doc_csv(), csv.str());
  }

  void stage_qn() {
    Problem& ctx = problem();
    std::vector<TrialRecord> all;
    all.reserve(static_cast<std::size_t>(cfg_.qn.trials_per_n) *
                cfg_.qn.n_values.size());
    for (int n : cfg_.qn.n_values) {
      std::cerr << "[doclab] qn: n=" << n << " (" << cfg_.qn.trials_per_n
                << " trials)\n";
      std::vector<TrialRecord> records =
          sample_qn(cfg_.arch, *ctx.source, ctx.test, n, cfg_.qn.trials_per_n,
                    cfg_.qn.max_trials_each, seed_, workers_);
      all.insert(all.end(), records.begin(), records.end());
    }
    std::ostringstream trials, timings;
    write_trials_csv(trials, all);
    write_timings_csv(timings, all);
    write_file(paths_.trials_csv(), trials.str());
    write_file(paths_.timings_csv(), timings.str());
  }

  void stage_volumes() {
    if (cfg_.volumes.training_sets <= 0) return;  // stage disabled
    Problem& ctx = problem();
    const DocHistogram doc = load_doc();
    std::vector<VolumePair> pairs = sample_volume_pairs(
        cfg_.arch, *ctx.source, ctx.test, cfg_.volumes.n,
        cfg_.volumes.training_sets, cfg_.volumes.probes, cfg_.volumes.epsilons,
        doc.e_min(), seed_, workers_);
    std::ostringstream csv;
    write_volumes_csv(csv, pairs);
    write_file(paths_.volumes_csv(), csv.str());
  }

  void stage_bounds() {
    const DocHistogram doc = load_doc();
    const std::vector<int>& ns = cfg_.qn.n_values;
    std::vector<BoundCurve> curves;

    auto curve = [&](const std::string& kind, double eps,
                     std::optional<double> a, std::optional<double> gamma,
                     auto&& eval) {
      BoundCurve c;
      c.kind = kind;
      c.epsilon = eps;
      c.a = a;
      c.gamma = gamma;
      for (int n : ns) {
        c.n_values.push_back(n);
        c.values.push_back(eval(n));
      }
      curves.push_back(std::move(c));
    };

    for (double eps : cfg_.bounds.epsilons) {
      if (eps > 1.0 - doc.e_min()) continue;  // threshold beyond the support
      curve("mean_bad_volume", eps, std::nullopt, std::nullopt,
            [&](int n) { return mean_bad_volume(doc, n, eps); });
      curve("ratio", eps, std::nullopt, std::nullopt,
            [&](int n) { return bad_fraction_ratio(doc, n, eps); });
      for (double a : cfg_.bounds.a_values) {
        curve("decay_tight", eps, a, std::nullopt,
              [&](int n) { return decay_bound(doc, n, eps, a).tight; });
        curve("decay_exp", eps, a, std::nullopt, [&](int n) {
          const auto b = decay_bound(doc, n, eps, a);
          return b.exp_form.value_or(std::numeric_limits<double>::infinity());
        });
      }
      for (double gamma : cfg_.bounds.gammas)
        curve("markov_tail", eps, std::nullopt, gamma,
              [&](int n) { return markov_tail(doc, n, eps, gamma); });
    }
    curve("predicted_mean_error", 0.0, std::nullopt, std::nullopt,
          [&](int n) { return predicted_mean_error(doc, n); });

    std::ostringstream csv;
    write_bound_curves_csv(csv, curves);
    write_file(paths_.bounds_csv(), csv.str());
  }

  void stage_report() {
    const DocHistogram doc = load_doc();
    std::ifstream trials_in(paths_.trials_csv());
    if (!trials_in)
      throw std::runtime_error("report: missing " + paths_.trials_csv().string());
    const std::vector<TrialRecord> trials = read_trials_csv(trials_in);

    std::vector<VolumePair> pairs;
    if (std::filesystem::exists(paths_.volumes_csv())) {
      std::ifstream volumes_in(paths_.volumes_csv());
      pairs = read_volumes_csv(volumes_in);
    }

    const Report rep = build_report(cfg_, seed_, doc, trials, pairs);
    write_file(paths_.report_json(), report_to_json(rep) + "\n");
    emit_plot_data(rep, doc, paths_.dir.string());
  }

  const ExperimentConfig& cfg_;
  std::uint64_t seed_;
  int workers_;
  RunPaths paths_;
  std::optional<Problem> problem_;
};

}  // namespace

RunPaths RunPaths::for_run(const std::string& out_dir, const std::string& name,
                           std::uint64_t seed) {
  std::ostringstream dir;
  dir << name << "-seed" << seed;
  return RunPaths{std::filesystem::path(out_dir) / dir.str()};
}

int run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  ExperimentRun run(config, options);
  std::filesystem::create_directories(run.paths().dir);
  StageTracker tracker(run.paths(), config.name, run.seed());

  std::vector<std::string> stages;
  if (options.stage.empty()) {
    stages = kAllStages;
  } else {
    if (std::find(kAllStages.begin(), kAllStages.end(), options.stage) ==
        kAllStages.end()) {
      std::cerr << "doclab: unknown stage `" << options.stage << "`\n";
      return 2;
    }
    stages = {options.stage};
  }

  for (const std::string& stage : stages) {
    const std::int64_t started = now_ms();
    try {
      std::cerr << "[doclab] stage " << stage << " (" << config.name << ")\n";
      run.run_stage(stage);
    } catch (const std::exception& e) {
      std::cerr << "doclab: stage " << stage << " failed: " << e.what() << "\n";
      tracker.mark_failed(stage, e.what());
      return 2;
    }
    tracker.mark_done(stage, now_ms() - started);
  }
  return 0;
}

}  // namespace doclab
