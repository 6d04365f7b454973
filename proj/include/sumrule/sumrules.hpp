#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sumrule/jacobi.hpp"
#include "sumrule/measures.hpp"

namespace sr {

// scalar rate functions
namespace rates {
// G(x) = x - 1 - log x for x > 0, +inf otherwise
double G(double x);
// L0*(x) = x^2 / 2
double L0star(double x);
// Odd-index rate of the Kesten-McKay chain; vanishes at -(k1+k2)/(2+k1+k2).
double H1(double x, double k1, double k2);
// Even-index rate; vanishes (with zero slope) at (k2-k1)/(2+k1+k2).
double H2(double x, double k1, double k2);
}  // namespace rates

struct EnsembleId {
  enum class Kind { Hermite, Laguerre, Jacobi } kind = Kind::Hermite;
  double tau = 1.0;       // Laguerre
  double kappa1 = 0.0;    // Jacobi
  double kappa2 = 0.0;
  static EnsembleId hermite() { return {}; }
  static EnsembleId laguerre(double tau) { return {Kind::Laguerre, tau, 0, 0}; }
  static EnsembleId jacobi(double k1, double k2) { return {Kind::Jacobi, 1.0, k1, k2}; }
  ReferenceLaw law() const;
  std::string name() const;
};

struct SumOptions {
  double tail_epsilon = 1e-6;  // trailing-window average above this flags divergence
};

// One side of a sum rule: the total, the per-term contributions, and a
// trailing-window diagnostic so slow convergence can be told from divergence.
struct SumTerms {
  double value = 0.0;  // +inf when flagged divergent or a term is infinite
  double partial_sum = 0.0;
  std::vector<double> terms;
  double tail_average = 0.0;
  bool divergent = false;
};

SumTerms sum_side_hermite(const jacobi::JacobiCoefficients& j, const SumOptions& o = {});
SumTerms sum_side_laguerre(const jacobi::ZChain& z, double tau, const SumOptions& o = {});
SumTerms sum_side_jacobi(const jacobi::VerblunskySeq& v, double k1, double k2,
                         const SumOptions& o = {});

// Outlier rate functions. Hermite uses the closed form
// (x/2) sqrt(x^2-4) - 2 log((x+sqrt(x^2-4))/2); Laguerre and Jacobi integrate
// S(t) sqrt((t-a-)(t-a+)) from the support edge by adaptive quadrature with
// the edge substitution t = edge +- s^2. +inf outside the admissible domain.
double f_plus(const EnsembleId& ens, double x);
double f_minus(const EnsembleId& ens, double x);

struct EffPotOptions {
  int panels = 512;
  int deg = 16;
};

// J_V(x) = V(x) - 2 int log|x-xi| f_V(xi) dxi; x must lie in [b-, b+]
double effective_potential(const ReferenceLaw& law, double x,
                           const EffPotOptions& o = {});

struct EffPotInfimum {
  double value = 0.0;        // global infimum used for rates
  double edge_value = 0.0;   // min(J(alpha-), J(alpha+))
  double searched_value = 0.0;
  double argmin = 0.0;
  double discrepancy = 0.0;  // |edge_value - searched_value|
};
EffPotInfimum inf_effective_potential(const ReferenceLaw& law, const EffPotOptions& o = {});

enum class Side { plus, minus };
double rate_from_effective_potential(const ReferenceLaw& law, double x, Side side,
                                     const EffPotOptions& o = {});

struct SpectralSide {
  double value = 0.0;
  double kl = 0.0;
  double sum_f_plus = 0.0;
  double sum_f_minus = 0.0;
  std::vector<double> per_atom_plus;
  std::vector<double> per_atom_minus;
  bool kl_cap_triggered = false;
  bool s1_violation = false;
  std::string s1_reason;
};

SpectralSide spectral_side(const ReferenceLaw& law, const MeasureS1& mu,
                           const KlOptions& kl_opts = {});

// H(T) = tr V(T) - 2 sum log a_k. For Laguerre the trace and determinant come
// from the z chain; for Jacobi (coefficients on [-2,2]) det(2I -+ T) come from
// the Verblunsky products. No dense eigendecomposition anywhere.
double h_functional(const EnsembleId& ens, const jacobi::JacobiCoefficients& j);
// h_functional minus its value on the same-size equilibrium chain
double h_normalized(const EnsembleId& ens, const jacobi::JacobiCoefficients& j);

struct GemReport {
  bool s1_member = false;
  std::string s1_reason;
  double threehalves_sum = 0.0;   // sum (lam+ - a+)^{3/2} + (a- - lam-)^{3/2}
  bool threehalves_ok = false;    // finite and hard-edge guards hold
  double szego_integral = 0.0;    // weighted log integral; -inf allowed
  bool szego_finite = false;
};
GemReport gem_diagnostics(const ReferenceLaw& law, const MeasureS1& mu);

using SumSideInput =
    std::variant<jacobi::JacobiCoefficients, jacobi::ZChain, jacobi::VerblunskySeq>;

struct SumRuleReport {
  EnsembleId ensemble;
  SumTerms sum;
  SpectralSide spectral;
  double abs_gap = 0.0;  // |sum - spectral| when both finite, else 0
  bool both_infinite = false;
  int truncation_depth = 0;
  enum class Verdict { Pass, PassInf, Fail } verdict = Verdict::Fail;
  void finalize(double tol);
};

SumRuleReport verify_sum_rule(const EnsembleId& ens, const SumSideInput& input,
                              const MeasureS1& mu, int depth, double tol = 1e-6,
                              const KlOptions& kl_opts = {});

}  // namespace sr
