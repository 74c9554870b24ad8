#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "doclab/doc_histogram.hpp"

namespace doclab {

/// Mean parameter volume of zero-training-error solutions with true error
/// >= e_min + epsilon, at training-set size n: the bin sum of
/// (1 - E_mid)^n * mass over the region above the threshold (straddling bin
/// counted fractionally). Computed in log space; at n = 0 this is exactly
/// omega_epsilon.
double mean_bad_volume(const DocHistogram& doc, int n, double epsilon);

/// mean_bad_volume(n, epsilon) / mean_bad_volume(n, 0): the expected fraction
/// of bad solutions among all zero-training-error solutions. Evaluated as a
/// log-space quotient so it stays finite long after both sides underflow.
double bad_fraction_ratio(const DocHistogram& doc, int n, double epsilon);

/// The closed-form decay bound on bad_fraction_ratio, split parameter a > 1:
///   tight    = omega_eps / ((1 - g) + g * e^{(1-1/a) eps n}),  g = g_{eps/a}
///   exp_form = (1/g) * e^{-(1-1/a) eps n}
/// exp_form is empty when g = 0 (the prefactor diverges); tight <= exp_form
/// wherever both exist.
struct DecayBound {
  double tight = 0.0;
  std::optional<double> exp_form;
};
DecayBound decay_bound(double g_eps_over_a, double omega_eps_frac,
                       double epsilon, int n, double a);
DecayBound decay_bound(const DocHistogram& doc, int n, double epsilon, double a);

/// Markov bound on Prob{ bad fraction >= gamma }: min(1, ratio / gamma).
double markov_tail(const DocHistogram& doc, int n, double epsilon, double gamma);

/// Mean true error over zero-training-error solutions predicted from the DOC
/// alone: sum E_mid (1-E_mid)^n mass / sum (1-E_mid)^n mass, over all bins.
double predicted_mean_error(const DocHistogram& doc, int n);

/// Predicted distribution of true error over zero-training-error solutions:
/// per-bin mass proportional to (1-E_mid)^n * mass, normalized to 1.
std::vector<double> qn_predicted(const DocHistogram& doc, int n);

/// One named bound/prediction evaluated over a list of n values.
struct BoundCurve {
  std::string kind;  // mean_bad_volume | ratio | decay_tight | decay_exp |
                     // markov_tail | predicted_mean_error
  double epsilon = 0.0;
  std::optional<double> a;
  std::optional<double> gamma;
  std::vector<int> n_values;
  std::vector<double> values;
};

/// CSV with columns (n, value, kind, epsilon, a, gamma); a and gamma are
/// blank where they do not apply.
void write_bound_curves_csv(std::ostream& out, std::span<const BoundCurve> curves);

}  // namespace doclab
