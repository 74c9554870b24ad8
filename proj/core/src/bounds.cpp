#include "doclab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "doclab/format.hpp"

namespace doclab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-bin mass at or above the threshold, straddling bin counted by its
// linear fraction.
std::vector<double> mass_above(const DocHistogram& doc, double threshold) {
  std::vector<double> m(static_cast<std::size_t>(doc.bin_count), 0.0);
  for (int i = 0; i < doc.bin_count; ++i) {
    const double lo = doc.bin_left(i);
    const double hi = doc.bin_right(i);
    if (lo >= threshold) {
      m[static_cast<std::size_t>(i)] = doc.mass(i);
    } else if (hi > threshold) {
      m[static_cast<std::size_t>(i)] = doc.mass(i) * (hi - threshold) / (hi - lo);
    }
  }
  return m;
}

double log_sum_exp(std::span<const double> terms) {
  double mx = kNegInf;
  for (double t : terms) mx = std::max(mx, t);
  if (mx == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double t : terms)
    if (t != kNegInf) acc += std::exp(t - mx);
  return mx + std::log(acc);
}

// log of sum_i mass_i * (1-E_mid_i)^n * (with_error ? E_mid_i : 1).
double log_weighted_sum(const DocHistogram& doc, std::span<const double> masses,
                        int n, bool with_error) {
  std::vector<double> terms(masses.size(), kNegInf);
  for (int i = 0; i < doc.bin_count; ++i) {
    const double m = masses[static_cast<std::size_t>(i)];
    if (m <= 0.0) continue;
    const double e_mid = doc.bin_mid(i);
    double t = std::log(m) + n * std::log1p(-e_mid);
    if (with_error) t += std::log(e_mid);
    terms[static_cast<std::size_t>(i)] = t;
  }
  return log_sum_exp(terms);
}

void check_n_epsilon(const DocHistogram& doc, int n, double epsilon) {
  doc.validate();
  if (n < 0) throw std::invalid_argument("bounds: n must be >= 0");
  if (epsilon < 0.0 || epsilon > 1.0 - doc.e_min() + 1e-12)
    throw std::invalid_argument("bounds: epsilon outside [0, 1 - e_min]");
}

}  // namespace

double mean_bad_volume(const DocHistogram& doc, int n, double epsilon) {
  check_n_epsilon(doc, n, epsilon);
  const auto masses = mass_above(doc, doc.e_min() + epsilon);
  const double ls = log_weighted_sum(doc, masses, n, false);
  return ls == kNegInf ? 0.0 : std::exp(ls);
}

double bad_fraction_ratio(const DocHistogram& doc, int n, double epsilon) {
  check_n_epsilon(doc, n, epsilon);
  const auto num_masses = mass_above(doc, doc.e_min() + epsilon);
  const auto den_masses = mass_above(doc, doc.e_min());
  const double log_den = log_weighted_sum(doc, den_masses, n, false);
  if (log_den == kNegInf)
    throw std::domain_error("bad_fraction_ratio: degenerate histogram, no mass above e_min");
  const double log_num = log_weighted_sum(doc, num_masses, n, false);
  return log_num == kNegInf ? 0.0 : std::exp(log_num - log_den);
}

DecayBound decay_bound(double g_eps_over_a, double omega_eps_frac,
                       double epsilon, int n, double a) {
  if (!(a > 1.0)) throw std::invalid_argument("decay_bound: a must be > 1");
  if (n < 0) throw std::invalid_argument("decay_bound: n must be >= 0");
  if (g_eps_over_a < 0.0 || g_eps_over_a > 1.0)
    throw std::invalid_argument("decay_bound: g outside [0,1]");
  if (omega_eps_frac < 0.0 || omega_eps_frac > 1.0)
    throw std::invalid_argument("decay_bound: omega fraction outside [0,1]");
  if (epsilon < 0.0) throw std::invalid_argument("decay_bound: epsilon must be >= 0");

  const double x = (1.0 - 1.0 / a) * epsilon * n;
  DecayBound out;
  if (g_eps_over_a > 0.0) {
    out.exp_form = std::exp(-x) / g_eps_over_a;
    if (x > 500.0) {
      // Denominator is dominated by g e^x; evaluate in logs to dodge overflow.
      out.tight = omega_eps_frac > 0.0
                      ? std::exp(std::log(omega_eps_frac) - std::log(g_eps_over_a) - x)
                      : 0.0;
      return out;
    }
  }
  out.tight =
      omega_eps_frac / ((1.0 - g_eps_over_a) + g_eps_over_a * std::exp(x));
  return out;
}

DecayBound decay_bound(const DocHistogram& doc, int n, double epsilon, double a) {
  if (!(a > 1.0)) throw std::invalid_argument("decay_bound: a must be > 1");
  check_n_epsilon(doc, n, epsilon);
  return decay_bound(g_epsilon(doc, epsilon / a), omega_epsilon(doc, epsilon),
                     epsilon, n, a);
}

double markov_tail(const DocHistogram& doc, int n, double epsilon, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("markov_tail: gamma must be > 0");
  return std::min(1.0, bad_fraction_ratio(doc, n, epsilon) / gamma);
}

double predicted_mean_error(const DocHistogram& doc, int n) {
  doc.validate();
  if (n < 0) throw std::invalid_argument("predicted_mean_error: n must be >= 0");
  std::vector<double> all(static_cast<std::size_t>(doc.bin_count));
  for (int i = 0; i < doc.bin_count; ++i)
    all[static_cast<std::size_t>(i)] = doc.mass(i);
  const double log_den = log_weighted_sum(doc, all, n, false);
  if (log_den == kNegInf)
    throw std::domain_error("predicted_mean_error: degenerate histogram");
  const double log_num = log_weighted_sum(doc, all, n, true);
  return log_num == kNegInf ? 0.0 : std::exp(log_num - log_den);
}

std::vector<double> qn_predicted(const DocHistogram& doc, int n) {
  doc.validate();
  if (n < 0) throw std::invalid_argument("qn_predicted: n must be >= 0");
  std::vector<double> logw(static_cast<std::size_t>(doc.bin_count), kNegInf);
  double mx = kNegInf;
  for (int i = 0; i < doc.bin_count; ++i) {
    if (doc.counts[static_cast<std::size_t>(i)] == 0) continue;
    const double t = std::log(doc.mass(i)) + n * std::log1p(-doc.bin_mid(i));
    logw[static_cast<std::size_t>(i)] = t;
    mx = std::max(mx, t);
  }
  if (mx == kNegInf)
    throw std::domain_error("qn_predicted: degenerate histogram");
  std::vector<double> out(logw.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    if (logw[i] == kNegInf) continue;
    out[i] = std::exp(logw[i] - mx);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

void write_bound_curves_csv(std::ostream& out, std::span<const BoundCurve> curves) {
  out << "n,value,kind,epsilon,a,gamma\n";
  for (const BoundCurve& c : curves) {
    for (std::size_t i = 0; i < c.n_values.size(); ++i) {
      out << c.n_values[i] << ',' << fmt_double(c.values[i]) << ',' << c.kind
          << ',' << fmt_double(c.epsilon) << ',';
      if (c.a) out << fmt_double(*c.a);
      out << ',';
      if (c.gamma) out << fmt_double(*c.gamma);
      out << '\n';
    }
  }
}

}  // namespace doclab
