#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sumrule/ensembles.hpp"
#include "sumrule/measures.hpp"
#include "sumrule/sumrules.hpp"

namespace sr::ldp {

// E(mu) = sum w_i V(x_i) - sum_{i != j} w_i w_j log|x_i - x_j|
// (self-interaction excluded). Throws on coincident nodes.
double logarithmic_energy(const DiscreteMeasure& mu, const Evaluator& V);

struct RateProbeRow {
  int n = 0;
  long hits = 0;
  long draws = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;   // Wilson 95% interval
  double ci_hi = 0.0;
  double rate_estimate = 0.0;  // -log((hits+1/2)/(draws+1)) / (beta' n)
};

struct RateProbeReport {
  double x = 0.0;
  Side side = Side::plus;
  long draws = 0;
  double target_rate = 0.0;
  std::vector<RateProbeRow> rows;
  bool fractions_monotone = false;
  bool rates_consistent = false;  // factor-3 band or monotone approach
  std::uint64_t seed = 0;
};

// Estimates P(extreme eigenvalue beyond x) over an n ladder by direct
// simulation. x must lie strictly outside the equilibrium support.
RateProbeReport probe_extreme_rate(const ensembles::EnsembleSpec& base,
                                   const std::vector<int>& n_ladder, double x,
                                   Side side, long draws);

struct RateCurveRow {
  double x = 0.0;
  double f_direct = 0.0;   // f_plus / f_minus
  double f_effpot = 0.0;   // rate_from_effective_potential
  double discrepancy = 0.0;
};

std::vector<RateCurveRow> rate_curve(const EnsembleId& ens, Side side,
                                     const std::vector<double>& grid);

// Kolmogorov-Smirnov helpers
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
struct KsTwoSample {
  double statistic = 0.0;
  double p_value = 0.0;
};
KsTwoSample ks_two_sample(std::vector<double> a, std::vector<double> b);

struct WilsonCi {
  double lo = 0.0, hi = 0.0;
};
WilsonCi wilson_interval(long hits, long draws, double z = 1.959963984540054);

}  // namespace sr::ldp
