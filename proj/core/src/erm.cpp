#include "doclab/erm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "doclab/format.hpp"
#include "doclab/parallel.hpp"
#include "doclab/stats.hpp"

namespace doclab {

namespace {

constexpr int kBootstrapResamples = 1000;

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

FindResult find_zero_train_solution(const Arch& arch, const LabeledDataset& train,
                                    RngStream& rng, std::int64_t max_trials) {
  if (max_trials < 1)
    throw std::invalid_argument("find_zero_train_solution: max_trials must be >= 1");
  Eigen::VectorXd w(weight_count(arch));
  for (std::int64_t t = 1; t <= max_trials; ++t) {
    sample_unit_sphere_into(rng, w);
    if (zero_train_error(arch, w, train)) return {w, t};
  }
  return {std::nullopt, max_trials};
}

LabeledDataset GaussianSource::draw(std::int64_t n, RngStream& rng) const {
  LabeledDataset data = gen_gaussian(problem_, n, rng);
  if (random_labels_)
    for (auto& l : data.labels) l = rng.next_unit() < 0.5 ? 0 : 1;
  data.id = id();
  return data;
}

std::string GaussianSource::id() const {
  std::ostringstream os;
  os << "gaussian(dim=" << problem_.dim << ",offset=" << problem_.center_offset
     << ",std=" << problem_.class_std << (random_labels_ ? ",random-labels" : "")
     << ")";
  return os.str();
}

LabeledDataset PoolSource::draw(std::int64_t n, RngStream& rng) const {
  return draw_training_set(*pool_, n, rng);
}

std::vector<TrialRecord> sample_qn(const Arch& arch, const TrainingSetSource& source,
                                   const LabeledDataset& test, int n,
                                   std::int64_t trials, std::int64_t max_trials_each,
                                   std::uint64_t seed, int workers) {
  if (trials < 1) throw std::invalid_argument("sample_qn: trials must be >= 1");
  if (n < 0) throw std::invalid_argument("sample_qn: n must be >= 0");
  if (test.size() == 0) throw std::invalid_argument("sample_qn: empty test set");

  std::vector<TrialRecord> records(static_cast<std::size_t>(trials));
  parallel_for(0, trials, workers, [&](int, std::int64_t t) {
    const std::int64_t started = now_ms();
    const std::uint64_t train_id =
        streams::make(streams::kQnTrain, static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(t));
    RngStream train_rng = derive_stream(seed, train_id);
    const LabeledDataset train = source.draw(n, train_rng);

    RngStream weight_rng = derive_stream(
        seed, streams::make(streams::kQnWeight, static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(t)));
    const FindResult found =
        find_zero_train_solution(arch, train, weight_rng, max_trials_each);

    TrialRecord& rec = records[static_cast<std::size_t>(t)];
    rec.trial_id = t;
    rec.n = n;
    rec.train_stream = train_id;
    rec.trials_to_hit = found.trials;
    rec.exhausted = !found.weights.has_value();
    rec.test_error = rec.exhausted
                         ? std::numeric_limits<double>::quiet_NaN()
                         : empirical_error(arch, *found.weights, test);
    rec.wall_time_ms = now_ms() - started;
  });
  return records;
}

QnSummary summarize_qn(std::span<const TrialRecord> records, double e_min,
                       std::span<const double> epsilons, std::uint64_t seed) {
  QnSummary s;
  std::vector<double> errors;
  errors.reserve(records.size());
  for (const TrialRecord& r : records) {
    s.n = r.n;
    if (r.exhausted) {
      ++s.exhausted;
    } else {
      ++s.successes;
      errors.push_back(r.test_error);
    }
  }
  if (errors.empty())
    throw std::runtime_error("summarize_qn: every trial exhausted, nothing to summarize");

  s.mean = mean(errors);
  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.max = sorted.back();

  for (double eps : epsilons) {
    std::int64_t bad = 0;
    for (double e : errors) bad += e >= e_min + eps;
    s.phi_hat.emplace_back(eps, static_cast<double>(bad) /
                                    static_cast<double>(errors.size()));
  }

  RngStream boot = derive_stream(
      seed, streams::make(streams::kBootstrap, static_cast<std::uint64_t>(s.n), 0));
  s.mean_sigma = errors.size() >= 2
                     ? bootstrap_sigma_of_mean(errors, kBootstrapResamples, boot)
                     : 0.0;
  return s;
}

std::vector<VolumePair> estimate_volume_pairs(const Arch& arch,
                                              const LabeledDataset& train,
                                              const LabeledDataset& test,
                                              std::int64_t probes,
                                              std::span<const double> epsilons,
                                              double e_min, RngStream& rng) {
  if (probes < 1) throw std::invalid_argument("estimate_volume_pairs: probes must be >= 1");
  if (epsilons.empty())
    throw std::invalid_argument("estimate_volume_pairs: need at least one epsilon");

  Eigen::VectorXd w(weight_count(arch));
  std::int64_t accepted = 0;
  std::vector<std::int64_t> bad(epsilons.size(), 0);
  for (std::int64_t p = 0; p < probes; ++p) {
    sample_unit_sphere_into(rng, w);
    if (!zero_train_error(arch, w, train)) continue;
    ++accepted;
    const double test_error = empirical_error(arch, w, test);
    for (std::size_t k = 0; k < epsilons.size(); ++k)
      bad[k] += test_error >= e_min + epsilons[k];
  }

  std::vector<VolumePair> out(epsilons.size());
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    out[k].probes = probes;
    out[k].epsilon = epsilons[k];
    out[k].omega_hat = static_cast<double>(accepted) / static_cast<double>(probes);
    out[k].omega_eps_hat = static_cast<double>(bad[k]) / static_cast<double>(probes);
  }
  return out;
}

VolumePair estimate_volume_pair(const Arch& arch, const LabeledDataset& train,
                                const LabeledDataset& test, std::int64_t probes,
                                double epsilon, double e_min, RngStream& rng) {
  const double eps[1] = {epsilon};
  return estimate_volume_pairs(arch, train, test, probes, eps, e_min, rng)[0];
}

std::vector<VolumePair> sample_volume_pairs(const Arch& arch,
                                            const TrainingSetSource& source,
                                            const LabeledDataset& test, int n,
                                            std::int64_t training_sets,
                                            std::int64_t probes,
                                            std::span<const double> epsilons,
                                            double e_min, std::uint64_t seed,
                                            int workers) {
  if (training_sets < 1)
    throw std::invalid_argument("sample_volume_pairs: training_sets must be >= 1");
  std::vector<VolumePair> all(static_cast<std::size_t>(training_sets) *
                              epsilons.size());
  parallel_for(0, training_sets, workers, [&](int, std::int64_t s) {
    const std::uint64_t train_id =
        streams::make(streams::kVolumeTrain, static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(s));
    RngStream train_rng = derive_stream(seed, train_id);
    const LabeledDataset train = source.draw(n, train_rng);
    RngStream probe_rng = derive_stream(
        seed, streams::make(streams::kVolumeProbe, static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(s)));
    std::vector<VolumePair> rows =
        estimate_volume_pairs(arch, train, test, probes, epsilons, e_min, probe_rng);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      rows[k].set_index = s;
      rows[k].train_stream = train_id;
      rows[k].n = n;
      all[static_cast<std::size_t>(s) * epsilons.size() + k] = rows[k];
    }
  });
  return all;
}

CorrelationDiagnostic correlation_diagnostic(std::span<const VolumePair> pairs,
                                             std::uint64_t seed,
                                             std::uint64_t stream_tag) {
  CorrelationDiagnostic d;
  d.pair_count = static_cast<std::int64_t>(pairs.size());

  std::vector<double> phi, omega_usable;
  double omega_sum = 0.0, omega_eps_sum = 0.0;
  for (const VolumePair& p : pairs) {
    omega_sum += p.omega_hat;
    omega_eps_sum += p.omega_eps_hat;
    if (p.omega_hat > 0.0) {
      phi.push_back(p.omega_eps_hat / p.omega_hat);
      omega_usable.push_back(p.omega_hat);
    }
  }
  d.usable_pairs = static_cast<std::int64_t>(phi.size());
  if (d.usable_pairs < 2)
    throw std::runtime_error("correlation_diagnostic: fewer than 2 training sets with omega_hat > 0");
  if (omega_sum <= 0.0)
    throw std::runtime_error("correlation_diagnostic: omega_hat is zero everywhere");

  d.covariance = sample_covariance(phi, omega_usable);
  d.mean_of_ratios = mean(phi);
  d.ratio_of_means = omega_eps_sum / omega_sum;

  // Bootstrap over training sets.
  RngStream boot = derive_stream(seed, streams::make(streams::kBootstrap, 0, stream_tag));
  const std::uint64_t m = pairs.size();
  std::vector<double> diffs, covs;
  diffs.reserve(kBootstrapResamples);
  covs.reserve(kBootstrapResamples);
  std::vector<double> rphi, romega;
  for (int r = 0; r < kBootstrapResamples; ++r) {
    rphi.clear();
    romega.clear();
    double rsum = 0.0, reps_sum = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
      const VolumePair& p = pairs[boot.next_below(m)];
      rsum += p.omega_hat;
      reps_sum += p.omega_eps_hat;
      if (p.omega_hat > 0.0) {
        rphi.push_back(p.omega_eps_hat / p.omega_hat);
        romega.push_back(p.omega_hat);
      }
    }
    if (rphi.size() < 2 || rsum <= 0.0) continue;
    diffs.push_back(mean(rphi) - reps_sum / rsum);
    covs.push_back(sample_covariance(rphi, romega));
  }
  if (diffs.size() >= 2) {
    const double md = mean(diffs);
    double acc = 0.0;
    for (double v : diffs) acc += (v - md) * (v - md);
    d.diff_sigma = std::sqrt(acc / static_cast<double>(diffs.size() - 1));
    std::sort(covs.begin(), covs.end());
    d.covariance_ci_lo = quantile_sorted(covs, 0.025);
    d.covariance_ci_hi = quantile_sorted(covs, 0.975);
  }
  d.inequality_within_ci =
      d.mean_of_ratios <= d.ratio_of_means + 2.0 * d.diff_sigma;
  return d;
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << "trial_id,n,train_seed,trials_to_hit,test_error,wall_time_ms\n";
  for (const TrialRecord& r : records) {
    out << r.trial_id << ',' << r.n << ',' << r.train_stream << ','
        << r.trials_to_hit << ',';
    if (r.exhausted) out << "nan";
    else out << fmt_double(r.test_error);
    out << ",0\n";
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream& in) {
  std::vector<TrialRecord> records;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_trials_csv: empty file");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6)
      throw std::runtime_error("read_trials_csv: expected 6 columns, got line: " + line);
    TrialRecord r;
    r.trial_id = std::stoll(f[0]);
    r.n = std::stoi(f[1]);
    r.train_stream = std::stoull(f[2]);
    r.trials_to_hit = std::stoll(f[3]);
    r.test_error = std::stod(f[4]);
    r.exhausted = std::isnan(r.test_error);
    r.wall_time_ms = std::stoll(f[5]);
    records.push_back(r);
  }
  return records;
}

void write_timings_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << "trial_id,n,wall_time_ms\n";
  for (const TrialRecord& r : records)
    out << r.trial_id << ',' << r.n << ',' << r.wall_time_ms << '\n';
}

void write_volumes_csv(std::ostream& out, std::span<const VolumePair> pairs) {
  out << "train_seed,n,probes,omega_hat,omega_eps_hat,epsilon\n";
  for (const VolumePair& p : pairs) {
    out << p.train_stream << ',' << p.n << ',' << p.probes << ','
        << fmt_double(p.omega_hat) << ',' << fmt_double(p.omega_eps_hat) << ','
        << fmt_double(p.epsilon) << '\n';
  }
}

std::vector<VolumePair> read_volumes_csv(std::istream& in) {
  std::vector<VolumePair> pairs;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_volumes_csv: empty file");
  std::int64_t index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6)
      throw std::runtime_error("read_volumes_csv: expected 6 columns, got line: " + line);
    VolumePair p;
    p.set_index = index++;
    p.train_stream = std::stoull(f[0]);
    p.n = std::stoi(f[1]);
    p.probes = std::stoll(f[2]);
    p.omega_hat = std::stod(f[3]);
    p.omega_eps_hat = std::stod(f[4]);
    p.epsilon = std::stod(f[5]);
    pairs.push_back(p);
  }
  return pairs;
}

}  // namespace doclab
