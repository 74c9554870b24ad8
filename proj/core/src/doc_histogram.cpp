#include "doclab/doc_histogram.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "doclab/format.hpp"
#include "doclab/parallel.hpp"
#include "doclab/rng.hpp"

namespace doclab {

int DocHistogram::bin_index(double e) const {
  if (e < 0.0) e = 0.0;
  if (e > 1.0) e = 1.0;
  int idx = std::min(static_cast<int>(e * bin_count), bin_count - 1);
  // Fix float rounding around the edges.
  if (idx > 0 && e < bin_left(idx)) --idx;
  else if (idx + 1 < bin_count && e >= bin_right(idx)) ++idx;
  return idx;
}

void DocHistogram::set_analytic_e_min(double value) {
  if (value < 0.0 || value > 1.0)
    throw std::invalid_argument("set_analytic_e_min: value outside [0,1]");
  e_min_value = value;
  e_min_policy = "analytic-bayes";
}

void DocHistogram::validate() const {
  if (bin_count < 2) throw std::invalid_argument("DocHistogram: bin_count must be >= 2");
  if (counts.size() != static_cast<std::size_t>(bin_count))
    throw std::invalid_argument("DocHistogram: counts size != bin_count");
  std::int64_t sum = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("DocHistogram: negative bin count");
    sum += c;
  }
  if (sum != total_samples)
    throw std::invalid_argument("DocHistogram: counts do not sum to total_samples");
  if (total_samples <= 0)
    throw std::invalid_argument("DocHistogram: total_samples must be > 0");
}

DocHistogram estimate_doc(const Arch& arch, const LabeledDataset& test_set,
                          std::int64_t samples, int bins, std::uint64_t seed,
                          int workers) {
  arch.validate();
  if (samples < 1) throw std::invalid_argument("estimate_doc: samples must be >= 1");
  if (bins < 2) throw std::invalid_argument("estimate_doc: bins must be >= 2");
  if (test_set.size() == 0)
    throw std::invalid_argument("estimate_doc: empty test set");

  DocHistogram doc;
  doc.bin_count = bins;
  doc.counts.assign(static_cast<std::size_t>(bins), 0);
  doc.total_samples = samples;
  doc.source = {arch.to_string(), test_set.id, seed, RngStream::generator_name()};

  const int dim = weight_count(arch);
  const int nworkers = resolve_workers(workers);

  // Per-worker histograms merged bin-wise; integer counts make the merge
  // exact and independent of scheduling.
  std::vector<std::vector<std::int64_t>> local_counts(
      static_cast<std::size_t>(nworkers),
      std::vector<std::int64_t>(static_cast<std::size_t>(bins), 0));
  std::vector<double> local_min(static_cast<std::size_t>(nworkers), 1.0);
  std::vector<Eigen::VectorXd> scratch(static_cast<std::size_t>(nworkers),
                                       Eigen::VectorXd(dim));

  parallel_for(0, samples, nworkers, [&](int worker, std::int64_t i) {
    Eigen::VectorXd& w = scratch[static_cast<std::size_t>(worker)];
    RngStream rng = derive_stream(
        seed, streams::make(streams::kDocSample,
                            static_cast<std::uint64_t>(i) >> 32,
                            static_cast<std::uint64_t>(i)));
    sample_unit_sphere_into(rng, w);
    const double e = empirical_error(arch, w, test_set);
    ++local_counts[static_cast<std::size_t>(worker)]
                  [static_cast<std::size_t>(doc.bin_index(e))];
    double& mn = local_min[static_cast<std::size_t>(worker)];
    if (e < mn) mn = e;
  });

  for (int r = 0; r < nworkers; ++r) {
    for (int b = 0; b < bins; ++b)
      doc.counts[static_cast<std::size_t>(b)] +=
          local_counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)];
    doc.e_min_estimate =
        std::min(doc.e_min_estimate, local_min[static_cast<std::size_t>(r)]);
  }
  doc.e_min_value = doc.e_min_estimate;
  doc.e_min_policy = "doc-estimate";
  doc.validate();
  return doc;
}

namespace {

// Shared threshold walk: mass strictly below T plus the linear fraction of
// the straddling bin.
double mass_below(const DocHistogram& doc, double threshold) {
  double below = 0.0;
  for (int i = 0; i < doc.bin_count; ++i) {
    const double lo = doc.bin_left(i);
    const double hi = doc.bin_right(i);
    if (hi <= threshold) {
      below += doc.mass(i);
    } else if (lo < threshold) {
      below += doc.mass(i) * (threshold - lo) / (hi - lo);
    } else {
      break;
    }
  }
  return below;
}

}  // namespace

double g_epsilon(const DocHistogram& doc, double epsilon) {
  doc.validate();
  if (epsilon < 0.0 || epsilon > 1.0 - doc.e_min() + 1e-12)
    throw std::invalid_argument("g_epsilon: epsilon outside [0, 1 - e_min]");
  return mass_below(doc, doc.e_min() + epsilon);
}

double omega_epsilon(const DocHistogram& doc, double epsilon) {
  return 1.0 - g_epsilon(doc, epsilon);
}

std::string DocHistogram::to_json_string() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["bin_count"] = bin_count;
  j["total_samples"] = total_samples;
  j["counts"] = counts;
  j["e_min_estimate"] = e_min_estimate;
  j["e_min_value"] = e_min_value;
  j["e_min_policy"] = e_min_policy;
  j["arch"] = source.arch;
  j["dataset_id"] = source.dataset_id;
  j["seed"] = source.seed;
  j["generator_name"] = source.generator;
  return j.dump(2);
}

DocHistogram DocHistogram::from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  DocHistogram doc;
  doc.bin_count = j.at("bin_count").get<int>();
  doc.counts = j.at("counts").get<std::vector<std::int64_t>>();
  doc.total_samples = j.at("total_samples").get<std::int64_t>();
  doc.e_min_estimate = j.at("e_min_estimate").get<double>();
  doc.e_min_value = j.at("e_min_value").get<double>();
  doc.e_min_policy = j.at("e_min_policy").get<std::string>();
  doc.source.arch = j.at("arch").get<std::string>();
  doc.source.dataset_id = j.at("dataset_id").get<std::string>();
  doc.source.seed = j.at("seed").get<std::uint64_t>();
  doc.source.generator = j.at("generator_name").get<std::string>();
  doc.validate();
  return doc;
}

void DocHistogram::write_csv(std::ostream& out) const {
  out << "bin_left,bin_right,count,normalized_mass\n";
  for (int i = 0; i < bin_count; ++i) {
    out << fmt_double(bin_left(i)) << ',' << fmt_double(bin_right(i)) << ','
        << counts[static_cast<std::size_t>(i)] << ',' << fmt_double(mass(i))
        << '\n';
  }
}

}  // namespace doclab
