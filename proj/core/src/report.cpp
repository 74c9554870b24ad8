#include "doclab/report.hpp"

#include <cmath>
#include <map>

#include <json.hpp>

namespace doclab {

namespace {

nlohmann::json config_json_object(const ExperimentConfig& cfg, std::uint64_t seed) {
  nlohmann::json j;
  j["name"] = cfg.name;
  if (cfg.kind == ExperimentConfig::ProblemKind::kGaussian) {
    j["problem"]["kind"] = "gaussian";
    j["problem"]["dim"] = cfg.gaussian.dim;
    j["problem"]["center_offset"] = cfg.gaussian.center_offset;
    j["problem"]["class_std"] = cfg.gaussian.class_std;
    j["problem"]["random_labels"] = cfg.random_labels;
    j["problem"]["test_samples"] = cfg.test_samples;
  } else {
    j["problem"]["kind"] = "mnist";
    j["problem"]["train_images"] = cfg.mnist.train_images;
    j["problem"]["train_labels"] = cfg.mnist.train_labels;
    j["problem"]["test_images"] = cfg.mnist.test_images;
    j["problem"]["test_labels"] = cfg.mnist.test_labels;
    j["problem"]["class_a"] = cfg.mnist.class_a;
    j["problem"]["class_b"] = cfg.mnist.class_b;
    j["problem"]["train_per_class"] = cfg.mnist.train_per_class;
    j["problem"]["test_per_class"] = cfg.mnist.test_per_class;
  }
  j["arch"]["layer_widths"] = cfg.arch.layer_widths;
  j["arch"]["leakiness"] = cfg.arch.leakiness;
  j["doc"]["samples"] = cfg.doc.samples;
  j["doc"]["bins"] = cfg.doc.bins;
  j["qn"]["n_values"] = cfg.qn.n_values;
  j["qn"]["trials_per_n"] = cfg.qn.trials_per_n;
  j["qn"]["max_trials_each"] = cfg.qn.max_trials_each;
  j["volumes"]["training_sets"] = cfg.volumes.training_sets;
  j["volumes"]["probes"] = cfg.volumes.probes;
  j["volumes"]["n"] = cfg.volumes.n;
  j["volumes"]["epsilons"] = cfg.volumes.epsilons;
  j["bounds"]["epsilons"] = cfg.bounds.epsilons;
  j["bounds"]["a_values"] = cfg.bounds.a_values;
  j["bounds"]["gammas"] = cfg.bounds.gammas;
  j["seed"] = seed;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config, std::uint64_t seed) {
  return config_json_object(config, seed).dump(2);
}

Report build_report(const ExperimentConfig& config, std::uint64_t seed,
                    const DocHistogram& doc,
                    const std::vector<TrialRecord>& trials,
                    const std::vector<VolumePair>& volume_pairs) {
  Report rep;
  rep.name = config.name;
  rep.config_echo_json = config_to_json(config, seed);
  rep.arch = doc.source.arch;
  rep.dataset_id = doc.source.dataset_id;
  rep.e_min_estimate = doc.e_min_estimate;
  rep.e_min_value = doc.e_min_value;
  rep.e_min_policy = doc.e_min_policy;
  rep.seed = seed;
  rep.generator = doc.source.generator;

  for (double eps : config.bounds.epsilons)
    if (eps <= 1.0 - doc.e_min())
      rep.g_table.emplace_back(eps, g_epsilon(doc, eps));

  // Group trials by n, keeping the config's n order.
  std::map<int, std::vector<TrialRecord>> by_n;
  for (const TrialRecord& t : trials) by_n[t.n].push_back(t);

  for (const auto& [n, records] : by_n) {
    const QnSummary s =
        summarize_qn(records, doc.e_min(), config.bounds.epsilons, seed);
    ReportPerN row;
    row.n = n;
    row.successes = s.successes;
    row.exhausted = s.exhausted;
    row.mean_test_error = s.mean;
    row.mean_sigma = s.mean_sigma;
    row.min = s.min;
    row.q1 = s.q1;
    row.median = s.median;
    row.q3 = s.q3;
    row.max = s.max;
    row.predicted_mean_error = predicted_mean_error(doc, n);
    row.mean_within_bound =
        row.mean_test_error <= row.predicted_mean_error + 3.0 * row.mean_sigma;
    for (const auto& [eps, phi] : s.phi_hat) {
      if (eps > 1.0 - doc.e_min()) continue;
      PhiCheck check;
      check.epsilon = eps;
      check.phi_hat = phi;
      check.phi_sigma =
          std::sqrt(phi * (1.0 - phi) / static_cast<double>(s.successes));
      check.ratio_bound = bad_fraction_ratio(doc, n, eps);
      check.within_bound = phi <= check.ratio_bound + 3.0 * check.phi_sigma;
      row.phi_checks.push_back(check);
    }
    rep.per_n.push_back(std::move(row));
  }

  // One correlation diagnostic per probed epsilon.
  std::map<double, std::vector<VolumePair>> by_eps;
  for (const VolumePair& p : volume_pairs) by_eps[p.epsilon].push_back(p);
  std::uint64_t tag = 1;
  for (const auto& [eps, pairs] : by_eps) {
    CorrelationBlock block;
    block.epsilon = eps;
    block.diagnostic = correlation_diagnostic(pairs, seed, tag++);
    rep.correlation.push_back(block);
  }
  return rep;
}

std::string report_to_json(const Report& rep) {
  nlohmann::json j;
  j["schema_version"] = rep.schema_version;
  j["name"] = rep.name;
  j["config"] = nlohmann::json::parse(rep.config_echo_json);
  j["doc"]["arch"] = rep.arch;
  j["doc"]["dataset_id"] = rep.dataset_id;
  j["doc"]["e_min_estimate"] = rep.e_min_estimate;
  j["doc"]["e_min_value"] = rep.e_min_value;
  j["doc"]["e_min_policy"] = rep.e_min_policy;
  auto& g = j["doc"]["g_epsilon"] = nlohmann::json::array();
  for (const auto& [eps, val] : rep.g_table)
    g.push_back({{"epsilon", eps}, {"value", val}});

  auto& per_n = j["per_n"] = nlohmann::json::array();
  for (const ReportPerN& row : rep.per_n) {
    nlohmann::json r;
    r["n"] = row.n;
    r["successes"] = row.successes;
    r["exhausted"] = row.exhausted;
    r["mean_test_error"] = row.mean_test_error;
    r["mean_sigma"] = row.mean_sigma;
    r["min"] = row.min;
    r["q1"] = row.q1;
    r["median"] = row.median;
    r["q3"] = row.q3;
    r["max"] = row.max;
    r["predicted_mean_error"] = row.predicted_mean_error;
    r["mean_within_bound"] = row.mean_within_bound;
    auto& checks = r["phi_checks"] = nlohmann::json::array();
    for (const PhiCheck& c : row.phi_checks) {
      checks.push_back({{"epsilon", c.epsilon},
                        {"phi_hat", c.phi_hat},
                        {"phi_sigma", c.phi_sigma},
                        {"ratio_bound", c.ratio_bound},
                        {"within_bound", c.within_bound}});
    }
    per_n.push_back(std::move(r));
  }

  auto& corr = j["correlation"] = nlohmann::json::array();
  for (const CorrelationBlock& block : rep.correlation) {
    const CorrelationDiagnostic& d = block.diagnostic;
    corr.push_back({{"epsilon", block.epsilon},
                    {"pair_count", d.pair_count},
                    {"usable_pairs", d.usable_pairs},
                    {"covariance", d.covariance},
                    {"covariance_ci_lo", d.covariance_ci_lo},
                    {"covariance_ci_hi", d.covariance_ci_hi},
                    {"mean_of_ratios", d.mean_of_ratios},
                    {"ratio_of_means", d.ratio_of_means},
                    {"diff_sigma", d.diff_sigma},
                    {"inequality_within_ci", d.inequality_within_ci}});
  }

  j["provenance"]["seed"] = rep.seed;
  j["provenance"]["generator_name"] = rep.generator;
  return j.dump(2);
}

}  // namespace doclab
