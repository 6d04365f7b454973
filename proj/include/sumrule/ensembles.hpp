#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sumrule/jacobi.hpp"
#include "sumrule/measures.hpp"

namespace sr::ensembles {

struct EnsembleSpec {
  enum class Kind { Hermite, Laguerre, JacobiKN, GeneralV } kind = Kind::Hermite;
  int n = 1;
  double beta = 2.0;
  double tau = 0.5;     // Laguerre
  double kappa1 = 0.0;  // JacobiKN
  double kappa2 = 0.0;
  std::uint64_t seed = 0;
  double beta_prime() const { return 0.5 * beta; }
  void validate() const;
};

struct SampledSpectralData {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> weights;      // simplex
  jacobi::JacobiCoefficients coefficients;
  std::optional<jacobi::ZChain> z;            // Laguerre draws
  std::optional<jacobi::VerblunskySeq> alpha; // JacobiKN draws
  std::uint64_t seed = 0;
};

// Tridiagonal models. The Gamma/Beta shape ladders are exact for the target
// eigenvalue density at every n and beta; see docs/sampler_ladders.md for the
// table and derivation note.
SampledSpectralData sample_hermite(const EnsembleSpec& spec);
SampledSpectralData sample_laguerre(const EnsembleSpec& spec);
SampledSpectralData sample_jacobi_kn(const EnsembleSpec& spec);

// coefficient-only draws (no eigensolve), for Monte Carlo ladders
jacobi::JacobiCoefficients draw_hermite_coeffs(const EnsembleSpec& spec,
                                               std::uint64_t replicate);
jacobi::JacobiCoefficients draw_laguerre_coeffs(const EnsembleSpec& spec,
                                                std::uint64_t replicate);
jacobi::JacobiCoefficients draw_jacobi_kn_coeffs(const EnsembleSpec& spec,
                                                 std::uint64_t replicate);

std::vector<double> sample_dirichlet_weights(int n, double beta_prime,
                                             std::uint64_t seed);

struct McmcOptions {
  long steps = 200000;
  double step_size = -1.0;  // <=0: default 1.7 / (n sqrt(beta'))
  double burn_in_fraction = 0.2;
  int thinning = 10;
};

struct McmcResult {
  SampledSpectralData data;  // final state
  double acceptance_rate = 0.0;
  long domain_rejections = 0;
  std::vector<double> kept_b1;
  std::vector<double> kept_lambda_max;
};

// Random-walk Metropolis over (b_1..b_n, log a_1..log a_{n-1}) targeting
// exp(-n b' [tr V(T) - 2 sum (1 - k/n - 1/(n beta)) log a_k]) with the log-a
// Jacobian absorbed. Deterministic given (spec.seed, options).
McmcResult sample_general_v_mcmc(const EnsembleSpec& spec, const Evaluator& V,
                                 double domain_lo, double domain_hi,
                                 const McmcOptions& opts = {});

DiscreteMeasure empirical_measure(const SampledSpectralData& data, bool weighted);

}  // namespace sr::ensembles
