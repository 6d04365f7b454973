#include "sumrule/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sumrule/kernels.hpp"

namespace sr::ldp {

double logarithmic_energy(const DiscreteMeasure& mu, const Evaluator& V) {
  const std::size_t n = mu.size();
  for (std::size_t i = 1; i < n; ++i)
    if (!(mu.nodes[i] > mu.nodes[i - 1]))
      throw std::invalid_argument("logarithmic_energy: coincident nodes");
  double pot = 0.0;
  if (V)
    for (std::size_t i = 0; i < n; ++i) pot += mu.weights[i] * V(mu.nodes[i]);
  const double inter = kern::pairwise_log_energy(mu.nodes, mu.weights);
  return pot - 2.0 * inter;
}

WilsonCi wilson_interval(long hits, long draws, double z) {
  if (draws <= 0) return {0.0, 1.0};
  const double p = static_cast<double>(hits) / draws;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / draws;
  const double center = (p + z2 / (2.0 * draws)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / draws + z2 / (4.0 * draws * draws)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

RateProbeReport probe_extreme_rate(const ensembles::EnsembleSpec& base,
                                   const std::vector<int>& n_ladder, double x,
                                   Side side, long draws) {
  if (draws < 100) throw std::invalid_argument("probe_extreme_rate: draws must be >= 100");
  const EnsembleId ens = [&] {
    switch (base.kind) {
      case ensembles::EnsembleSpec::Kind::Hermite: return EnsembleId::hermite();
      case ensembles::EnsembleSpec::Kind::Laguerre: return EnsembleId::laguerre(base.tau);
      case ensembles::EnsembleSpec::Kind::JacobiKN:
        return EnsembleId::jacobi(base.kappa1, base.kappa2);
      default:
        throw std::invalid_argument("probe_extreme_rate: unsupported ensemble kind");
    }
  }();
  const ReferenceLaw law = ens.law();
  if (x >= law.alpha_minus() && x <= law.alpha_plus())
    throw std::invalid_argument("probe_extreme_rate: x lies inside the support");
  if ((side == Side::plus && x < law.alpha_plus()) ||
      (side == Side::minus && x > law.alpha_minus()))
    throw std::invalid_argument("probe_extreme_rate: x on the wrong side");

  RateProbeReport rep;
  rep.x = x;
  rep.side = side;
  rep.draws = draws;
  rep.seed = base.seed;
  rep.target_rate = side == Side::plus ? f_plus(ens, x) : f_minus(ens, x);

  for (int n : n_ladder) {
    ensembles::EnsembleSpec spec = base;
    spec.n = n;
    RateProbeRow row;
    row.n = n;
    row.draws = draws;
    for (long d = 0; d < draws; ++d) {
      jacobi::JacobiCoefficients j;
      switch (base.kind) {
        case ensembles::EnsembleSpec::Kind::Hermite:
          j = ensembles::draw_hermite_coeffs(spec, static_cast<std::uint64_t>(d) + 1);
          break;
        case ensembles::EnsembleSpec::Kind::Laguerre:
          j = ensembles::draw_laguerre_coeffs(spec, static_cast<std::uint64_t>(d) + 1);
          break;
        default:
          j = ensembles::draw_jacobi_kn_coeffs(spec, static_cast<std::uint64_t>(d) + 1);
          break;
      }
      const std::vector<double> lam = jacobi::eigenvalues_only(j);
      const bool hit = side == Side::plus ? (lam.back() > x) : (lam.front() < x);
      row.hits += hit;
    }
    row.p_hat = static_cast<double>(row.hits) / draws;
    const WilsonCi ci = wilson_interval(row.hits, draws);
    row.ci_lo = ci.lo;
    row.ci_hi = ci.hi;
    // +1/2 correction keeps the estimate finite at zero hits
    row.rate_estimate = -std::log((row.hits + 0.5) / (draws + 1.0)) /
                        (spec.beta_prime() * n);
    rep.rows.push_back(row);
  }

  rep.fractions_monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].p_hat > rep.rows[i - 1].p_hat) rep.fractions_monotone = false;

  bool all_in_band = true, monotone_approach = true;
  double prev_err = kInf;
  for (const RateProbeRow& row : rep.rows) {
    if (!(row.rate_estimate > rep.target_rate / 3.0 &&
          row.rate_estimate < rep.target_rate * 3.0))
      all_in_band = false;
    const double err = std::fabs(row.rate_estimate - rep.target_rate);
    if (err > prev_err + 1e-12) monotone_approach = false;
    prev_err = err;
  }
  rep.rates_consistent = all_in_band || monotone_approach;
  return rep;
}

std::vector<RateCurveRow> rate_curve(const EnsembleId& ens, Side side,
                                     const std::vector<double>& grid) {
  const ReferenceLaw law = ens.law();
  for (double x : grid)
    if (x > law.alpha_minus() && x < law.alpha_plus())
      throw std::invalid_argument("rate_curve: grid point inside the support");
  std::vector<RateCurveRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) {
    RateCurveRow row;
    row.x = x;
    row.f_direct = side == Side::plus ? f_plus(ens, x) : f_minus(ens, x);
    row.f_effpot = rate_from_effective_potential(law, x, side);
    const bool both_inf = !(row.f_direct < kInf) && !(row.f_effpot < kInf);
    row.discrepancy = both_inf ? 0.0 : std::fabs(row.f_direct - row.f_effpot);
    rows.push_back(row);
  }
  return rows;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - F));
  }
  return d;
}

namespace {
// Kolmogorov tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_q(double lambda) {
  if (lambda < 1e-10) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}
}  // namespace

KsTwoSample ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t na = a.size(), nb = b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < na && j < nb) {
    const double x = std::min(a[i], b[j]);
    while (i < na && a[i] <= x) ++i;
    while (j < nb && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsTwoSample out;
  out.statistic = d;
  const double ne = std::sqrt(static_cast<double>(na) * nb / (na + nb));
  // Stephens' small-sample correction
  out.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
  return out;
}

}  // namespace sr::ldp
