#include "sumrule/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sumrule/rng.hpp"

namespace sr::ensembles {

namespace {
// substream tags; replicate id is folded into the high bits of the index
constexpr std::uint32_t kTagB = 0x10, kTagA = 0x11;
constexpr std::uint32_t kTagZOdd = 0x20, kTagZEven = 0x21;
constexpr std::uint32_t kTagAlpha = 0x30;
constexpr std::uint32_t kTagMcmc = 0x40;

std::uint64_t slot(std::uint64_t replicate, std::uint64_t index) {
  return (replicate << 20) ^ index;
}
}  // namespace

void EnsembleSpec::validate() const {
  if (n < 1) throw std::invalid_argument("EnsembleSpec: n must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("EnsembleSpec: beta must be > 0");
  if (kind == Kind::Laguerre && !(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("EnsembleSpec: tau must lie in (0,1]");
  if (kind == Kind::JacobiKN && (kappa1 < 0.0 || kappa2 < 0.0))
    throw std::invalid_argument("EnsembleSpec: kappas must be nonnegative");
}

jacobi::JacobiCoefficients draw_hermite_coeffs(const EnsembleSpec& spec,
                                               std::uint64_t replicate) {
  spec.validate();
  const int n = spec.n;
  const double bp = spec.beta_prime();
  jacobi::JacobiCoefficients j;
  j.b.resize(n);
  j.a.resize(n - 1);
  const double sd = 1.0 / std::sqrt(bp * n);
  for (int k = 1; k <= n; ++k) {
    rng::Stream s = rng::substream(spec.seed, kTagB, slot(replicate, k));
    j.b[k - 1] = sd * rng::normal(s);
  }
  for (int k = 1; k <= n - 1; ++k) {
    rng::Stream s = rng::substream(spec.seed, kTagA, slot(replicate, k));
    j.a[k - 1] = std::sqrt(rng::gamma(s, bp * (n - k), 1.0 / (bp * n)));
  }
  return j;
}

jacobi::ZChain draw_laguerre_chain(const EnsembleSpec& spec, std::uint64_t replicate) {
  spec.validate();
  const int n = spec.n;
  const double bp = spec.beta_prime();
  const double m = bp * n;
  const double scale = spec.tau / m;
  jacobi::ZChain z;
  z.z.resize(2 * n - 1);
  for (int k = 1; k <= n; ++k) {
    rng::Stream s = rng::substream(spec.seed, kTagZOdd, slot(replicate, k));
    z.z[2 * k - 2] = rng::gamma(s, m * (1.0 / spec.tau - 1.0) + bp * (n - k) + 1.0, scale);
  }
  for (int k = 1; k <= n - 1; ++k) {
    rng::Stream s = rng::substream(spec.seed, kTagZEven, slot(replicate, k));
    z.z[2 * k - 1] = rng::gamma(s, bp * (n - k), scale);
  }
  return z;
}

jacobi::JacobiCoefficients draw_laguerre_coeffs(const EnsembleSpec& spec,
                                                std::uint64_t replicate) {
  return jacobi::z_compose(draw_laguerre_chain(spec, replicate));
}

jacobi::VerblunskySeq draw_jacobi_kn_alpha(const EnsembleSpec& spec,
                                           std::uint64_t replicate) {
  spec.validate();
  const int n = spec.n;
  const double bp = spec.beta_prime();
  const double m = bp * n;
  const double k1 = spec.kappa1, k2 = spec.kappa2;
  jacobi::VerblunskySeq v;
  v.alpha.resize(2 * n - 1);
  for (int i = 0; i < 2 * n - 1; ++i) {
    double p, q;
    if (i % 2 == 0) {
      const int jj = i / 2;
      if (jj <= n - 2) {
        p = k1 * m + bp * (n - jj - 1) + 1.0;
        q = k2 * m + bp * (n - jj - 1) + 1.0;
      } else {
        p = k1 * m + 1.0;
        q = k2 * m + 1.0;
      }
    } else {
      const int jj = (i + 1) / 2;
      if (jj <= n - 2) {
        p = (k1 + k2) * m + bp * (n - jj - 1) + 2.0;
        q = bp * (n - jj);
      } else {
        p = (k1 + k2) * m + 2.0;
        q = bp;
      }
    }
    rng::Stream s = rng::substream(spec.seed, kTagAlpha, slot(replicate, i));
    v.alpha[i] = rng::beta_symm_interval(s, p, q);
  }
  return v;
}

jacobi::JacobiCoefficients draw_jacobi_kn_coeffs(const EnsembleSpec& spec,
                                                 std::uint64_t replicate) {
  return jacobi::szego_pushforward(jacobi::geronimus_forward(draw_jacobi_kn_alpha(spec, replicate)),
                                   jacobi::SzegoDirection::to01);
}

namespace {
SampledSpectralData finish_sample(const EnsembleSpec& spec,
                                  jacobi::JacobiCoefficients j) {
  SampledSpectralData out;
  DiscreteMeasure mu = jacobi::spectral_from_coeffs(j);
  out.eigenvalues = std::move(mu.nodes);
  out.weights = std::move(mu.weights);
  out.coefficients = std::move(j);
  out.seed = spec.seed;
  return out;
}
}  // namespace

SampledSpectralData sample_hermite(const EnsembleSpec& spec) {
  return finish_sample(spec, draw_hermite_coeffs(spec, 0));
}

SampledSpectralData sample_laguerre(const EnsembleSpec& spec) {
  jacobi::ZChain z = draw_laguerre_chain(spec, 0);
  SampledSpectralData out = finish_sample(spec, jacobi::z_compose(z));
  out.z = std::move(z);
  return out;
}

SampledSpectralData sample_jacobi_kn(const EnsembleSpec& spec) {
  jacobi::VerblunskySeq v = draw_jacobi_kn_alpha(spec, 0);
  SampledSpectralData out = finish_sample(
      spec, jacobi::szego_pushforward(jacobi::geronimus_forward(v),
                                      jacobi::SzegoDirection::to01));
  out.alpha = std::move(v);
  return out;
}

std::vector<double> sample_dirichlet_weights(int n, double beta_prime,
                                             std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_dirichlet_weights: n must be >= 1");
  if (!(beta_prime > 0.0))
    throw std::invalid_argument("sample_dirichlet_weights: beta' must be > 0");
  return rng::dirichlet(seed, static_cast<std::size_t>(n), beta_prime);
}

McmcResult sample_general_v_mcmc(const EnsembleSpec& spec, const Evaluator& V,
                                 double domain_lo, double domain_hi,
                                 const McmcOptions& opts) {
  spec.validate();
  if (!V) throw std::invalid_argument("sample_general_v_mcmc: V required");
  const int n = spec.n;
  const double bp = spec.beta_prime();
  const double beta = spec.beta;
  const double step =
      opts.step_size > 0.0 ? opts.step_size : 1.7 / (n * std::sqrt(bp));

  // log target over (b, l = log a); +inf potential values reject the proposal
  auto log_target = [&](const jacobi::JacobiCoefficients& j,
                        const std::vector<double>& ell, bool& ok) {
    ok = true;
    const std::vector<double> lam = jacobi::eigenvalues_only(j);
    double trv = 0.0;
    for (double x : lam) {
      if (x < domain_lo || x > domain_hi) {
        ok = false;
        return 0.0;
      }
      const double vx = V(x);
      if (!std::isfinite(vx)) {
        ok = false;
        return 0.0;
      }
      trv += vx;
    }
    double lw = 0.0;
    for (int k = 1; k <= n - 1; ++k)
      lw += (2.0 * n * bp * (1.0 - static_cast<double>(k) / n - 1.0 / (n * beta)) + 1.0) *
            ell[k - 1];
    return -n * bp * trv + lw;
  };

  // start at the potential minimum over a coarse grid
  const double lo = std::max(domain_lo, -10.0), hi = std::min(domain_hi, 10.0);
  double x0 = lo, v0 = kInf;
  for (int i = 0; i <= 128; ++i) {
    const double x = lo + (hi - lo) * i / 128.0;
    const double v = V(x);
    if (std::isfinite(v) && v < v0) {
      v0 = v;
      x0 = x;
    }
  }
  jacobi::JacobiCoefficients cur;
  cur.b.assign(n, x0);
  cur.a.assign(n - 1, std::max(0.05, (hi - lo) / 16.0));
  std::vector<double> ell(n - 1);
  for (int k = 0; k < n - 1; ++k) ell[k] = std::log(cur.a[k]);

  bool ok = false;
  double cur_lp = log_target(cur, ell, ok);
  if (!ok) throw std::runtime_error("sample_general_v_mcmc: invalid starting state");

  rng::Stream walk = rng::substream(spec.seed, kTagMcmc, 0);
  McmcResult res;
  const long burn = static_cast<long>(opts.burn_in_fraction * opts.steps);
  long accepted = 0, counted = 0;
  jacobi::JacobiCoefficients prop = cur;
  std::vector<double> ell_prop = ell;
  for (long t = 0; t < opts.steps; ++t) {
    for (int k = 0; k < n; ++k) prop.b[k] = cur.b[k] + step * rng::normal(walk);
    for (int k = 0; k < n - 1; ++k) {
      ell_prop[k] = ell[k] + step * rng::normal(walk);
      prop.a[k] = std::exp(ell_prop[k]);
    }
    bool pok = false;
    const double lp = log_target(prop, ell_prop, pok);
    bool take = false;
    if (pok) {
      const double u = walk.uniform();
      take = std::log(u) < lp - cur_lp;
    } else {
      ++res.domain_rejections;
      walk.uniform();  // keep the draw count aligned
    }
    if (take) {
      cur = prop;
      ell = ell_prop;
      cur_lp = lp;
    }
    if (t >= burn) {
      ++counted;
      if (take) ++accepted;
      if ((t - burn) % opts.thinning == 0) {
        res.kept_b1.push_back(cur.b[0]);
        res.kept_lambda_max.push_back(jacobi::eigenvalues_only(cur).back());
      }
    }
  }
  res.acceptance_rate = counted ? static_cast<double>(accepted) / counted : 0.0;
  res.data = finish_sample(spec, cur);
  return res;
}

DiscreteMeasure empirical_measure(const SampledSpectralData& data, bool weighted) {
  std::vector<double> nodes = data.eigenvalues;
  std::vector<double> w;
  if (weighted) {
    w = data.weights;
  } else {
    w.assign(nodes.size(), 1.0 / static_cast<double>(nodes.size()));
  }
  return DiscreteMeasure(std::move(nodes), std::move(w));
}

}  // namespace sr::ensembles
