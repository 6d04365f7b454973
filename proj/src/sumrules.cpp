#include "sumrule/sumrules.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sumrule/quadrature.hpp"

namespace sr {

namespace {
constexpr double kPi = std::numbers::pi;
}

namespace rates {

double G(double x) {
  if (!(x > 0.0)) return kInf;
  return x - 1.0 - std::log(x);
}

double L0star(double x) { return 0.5 * x * x; }

double H1(double x, double k1, double k2) {
  if (!(x > -1.0 && x < 1.0)) return kInf;
  const double c = 2.0 + k1 + k2;
  const double s = 1.0 + k1 + k2;
  return -s * std::log(c * (1.0 - x) / (2.0 * s)) - std::log(c * (1.0 + x) / 2.0);
}

double H2(double x, double k1, double k2) {
  if (!(x > -1.0 && x < 1.0)) return kInf;
  const double c = 2.0 + k1 + k2;
  return -(1.0 + k1) * std::log(c * (1.0 - x) / (2.0 * (1.0 + k1))) -
         (1.0 + k2) * std::log(c * (1.0 + x) / (2.0 * (1.0 + k2)));
}

}  // namespace rates

ReferenceLaw EnsembleId::law() const {
  switch (kind) {
    case Kind::Hermite: return ReferenceLaw::semicircle();
    case Kind::Laguerre: return ReferenceLaw::marchenko_pastur(tau);
    case Kind::Jacobi:
      if (kappa1 == 0.0 && kappa2 == 0.0) return ReferenceLaw::arcsine01();
      return ReferenceLaw::kesten_mckay(kappa1, kappa2);
  }
  throw std::logic_error("EnsembleId::law: unreachable");
}

std::string EnsembleId::name() const {
  switch (kind) {
    case Kind::Hermite: return "hermite";
    case Kind::Laguerre: return "laguerre";
    case Kind::Jacobi: return "jacobi";
  }
  return "?";
}

namespace {

SumTerms finish(std::vector<double> terms, const SumOptions& o) {
  SumTerms out;
  out.terms = std::move(terms);
  bool infinite_term = false;
  for (double t : out.terms) {
    if (t == kInf) infinite_term = true;
    else out.partial_sum += t;
  }
  const std::size_t n = out.terms.size();
  const std::size_t win = std::max<std::size_t>(5, n / 10);
  double tail = 0.0;
  std::size_t cnt = 0;
  for (std::size_t i = n > win ? n - win : 0; i < n; ++i, ++cnt)
    tail += std::fabs(out.terms[i] == kInf ? 0.0 : out.terms[i]);
  out.tail_average = cnt ? tail / cnt : 0.0;
  out.divergent = infinite_term || out.tail_average > o.tail_epsilon;
  out.value = out.divergent ? kInf : out.partial_sum;
  return out;
}

}  // namespace

SumTerms sum_side_hermite(const jacobi::JacobiCoefficients& j, const SumOptions& o) {
  std::vector<double> terms;
  terms.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    double t = rates::L0star(j.b[k]);
    if (k < j.a.size()) {
      const double g = rates::G(j.a[k] * j.a[k]);
      t = (g == kInf) ? kInf : t + g;
    }
    terms.push_back(t);
  }
  return finish(std::move(terms), o);
}

SumTerms sum_side_laguerre(const jacobi::ZChain& z, double tau, const SumOptions& o) {
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("sum_side_laguerre: tau must lie in (0,1]");
  std::vector<double> terms;
  const std::size_t m = z.size();
  for (std::size_t k = 1; 2 * k - 1 <= m; ++k) {
    double t = rates::G(z.z[2 * k - 2]) / tau;  // z_{2k-1}
    if (2 * k <= m) {
      const double g = rates::G(z.z[2 * k - 1] / tau);  // z_{2k}
      t = (t == kInf || g == kInf) ? kInf : t + g;
    }
    terms.push_back(t);
  }
  return finish(std::move(terms), o);
}

SumTerms sum_side_jacobi(const jacobi::VerblunskySeq& v, double k1, double k2,
                         const SumOptions& o) {
  if (k1 < 0.0 || k2 < 0.0)
    throw std::invalid_argument("sum_side_jacobi: kappas must be nonnegative");
  std::vector<double> terms;
  for (std::size_t k = 0; 2 * k < v.size(); ++k) {
    double t = rates::H2(v.alpha[2 * k], k1, k2);
    if (2 * k + 1 < v.size()) {
      const double h1 = rates::H1(v.alpha[2 * k + 1], k1, k2);
      t = (t == kInf || h1 == kInf) ? kInf : t + h1;
    }
    terms.push_back(t);
  }
  return finish(std::move(terms), o);
}

namespace {

// int_edge^x S(t) sqrt(|t-am||t-ap|) dt with substitution t = edge +- s^2
double outlier_rate_quad(const ReferenceLaw& law, double x, Side side) {
  const double am = law.alpha_minus(), ap = law.alpha_plus();
  if (side == Side::plus) {
    const double smax = std::sqrt(x - ap);
    return quad::adaptive_gk(
        [&](double s) {
          const double t = ap + s * s;
          return 2.0 * s * s * law.s_factor(t) * std::sqrt(t - am);
        },
        0.0, smax, 1e-11, 1e-11);
  }
  const double smax = std::sqrt(am - x);
  return quad::adaptive_gk(
      [&](double s) {
        const double t = am - s * s;
        return 2.0 * s * s * law.s_factor(t) * std::sqrt(ap - t);
      },
      0.0, smax, 1e-11, 1e-11);
}

}  // namespace

double f_plus(const EnsembleId& ens, double x) {
  switch (ens.kind) {
    case EnsembleId::Kind::Hermite: {
      if (x < 2.0) return kInf;
      if (x == 2.0) return 0.0;
      const double s = std::sqrt(x * x - 4.0);
      return 0.5 * x * s - 2.0 * std::log(0.5 * (x + s));
    }
    case EnsembleId::Kind::Laguerre: {
      const ReferenceLaw law = ens.law();
      if (x < law.alpha_plus()) return kInf;
      if (x == law.alpha_plus()) return 0.0;
      return outlier_rate_quad(law, x, Side::plus);
    }
    case EnsembleId::Kind::Jacobi: {
      const ReferenceLaw law = ens.law();
      const double up = law.alpha_plus();
      if (x < up || x > 1.0) return kInf;
      if (x == up) return 0.0;
      // hard edge at 1 when kappa2 = 0; the integrand has a nonintegrable
      // pole at 1 otherwise
      if (x >= 1.0) return ens.kappa2 > 0.0 ? kInf : 0.0;
      return outlier_rate_quad(law, x, Side::plus);
    }
  }
  return kInf;
}

double f_minus(const EnsembleId& ens, double x) {
  switch (ens.kind) {
    case EnsembleId::Kind::Hermite:
      return f_plus(ens, -x);
    case EnsembleId::Kind::Laguerre: {
      const ReferenceLaw law = ens.law();
      const double tm = law.alpha_minus();
      if (x > tm || x < 0.0) return kInf;
      if (x == tm) return 0.0;
      if (x <= 0.0) return kInf;  // F_L^-(0) diverges (tau < 1); tau=1 handled above
      return outlier_rate_quad(law, x, Side::minus);
    }
    case EnsembleId::Kind::Jacobi: {
      const ReferenceLaw law = ens.law();
      const double um = law.alpha_minus();
      if (x > um || x < 0.0) return kInf;
      if (x == um) return 0.0;
      if (x <= 0.0) return ens.kappa1 > 0.0 ? kInf : 0.0;
      return outlier_rate_quad(law, x, Side::minus);
    }
  }
  return kInf;
}

namespace {

// int_I f_V(xi) log|x - xi| dxi. For x inside the support the local log is
// subtracted and integrated in closed form; the remainder is composite GL in
// the cosine variable, split at the singular angle.
double log_potential(const ReferenceLaw& law, double x, const EffPotOptions& o) {
  const double am = law.alpha_minus(), ap = law.alpha_plus();
  const double m = 0.5 * (am + ap), r = 0.5 * (ap - am);
  const bool interior = (x > am && x < ap);
  const double fx = interior ? law.density(x) : 0.0;

  auto integrand = [&](double th) {
    const double xi = m + r * std::cos(th);
    const double fv = law.density(xi);
    const double lg = std::log(std::fabs(x - xi));
    return (fv - fx) * lg * r * std::sin(th);
  };

  double total = 0.0;
  if (interior) {
    const double thx = std::acos(std::clamp((x - m) / r, -1.0, 1.0));
    int pl = std::max(1, static_cast<int>(std::lround(o.panels * thx / kPi)));
    int pr = std::max(1, o.panels - pl);
    total += quad::composite_gl(integrand, 0.0, thx, pl, o.deg);
    total += quad::composite_gl(integrand, thx, kPi, pr, o.deg);
    // closed form of f_V(x) * int_I log|x-xi| dxi
    const double dl = x - am, dr = ap - x;
    total += fx * (dl * (std::log(dl) - 1.0) + dr * (std::log(dr) - 1.0));
  } else {
    total = quad::composite_gl(integrand, 0.0, kPi, o.panels, o.deg);
  }
  return total;
}

}  // namespace

double effective_potential(const ReferenceLaw& law, double x, const EffPotOptions& o) {
  if (x < law.b_minus() || x > law.b_plus())
    throw std::domain_error("effective_potential: x outside the potential domain");
  const double v = law.potential(x);
  if (v == kInf) return kInf;
  return v - 2.0 * log_potential(law, x, o);
}

namespace {

// golden-section minimization; f assumed unimodal on [a,b]
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a,
                                     double b, int iters = 80) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-12; ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a); fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

}  // namespace

EffPotInfimum inf_effective_potential(const ReferenceLaw& law, const EffPotOptions& o) {
  const double am = law.alpha_minus(), ap = law.alpha_plus();
  const double width = ap - am;
  const double C = std::max(2.0, 2.0 * width);
  auto J = [&](double x) { return effective_potential(law, x, o); };

  EffPotInfimum out;
  const double j_am = J(am), j_ap = J(ap);
  out.edge_value = std::min(j_am, j_ap);

  // search both flanks, seeded at the support edges
  const double lo_r = ap, hi_r = std::min(law.b_plus(), ap + C);
  const double lo_l = std::max(law.b_minus(), am - C), hi_l = am;
  double best_x = j_am <= j_ap ? am : ap;
  double best_v = out.edge_value;
  if (hi_r > lo_r) {
    auto [x, v] = golden_min(J, lo_r, hi_r);
    if (v < best_v) { best_v = v; best_x = x; }
  }
  if (hi_l > lo_l) {
    auto [x, v] = golden_min(J, lo_l, hi_l);
    if (v < best_v) { best_v = v; best_x = x; }
  }
  out.searched_value = best_v;
  out.argmin = best_x;
  out.value = std::min(best_v, out.edge_value);
  out.discrepancy = std::fabs(out.edge_value - out.searched_value);
  return out;
}

double rate_from_effective_potential(const ReferenceLaw& law, double x, Side side,
                                     const EffPotOptions& o) {
  if (x < law.b_minus() || x > law.b_plus())
    throw std::domain_error("rate_from_effective_potential: x outside [b-, b+]");
  if (side == Side::plus && x < law.alpha_plus()) return kInf;
  if (side == Side::minus && x > law.alpha_minus()) return kInf;
  const double j = effective_potential(law, x, o);
  if (j == kInf) return kInf;
  return j - inf_effective_potential(law, o).value;
}

namespace {

EnsembleId ensemble_for(const ReferenceLaw& law) {
  switch (law.kind()) {
    case LawKind::SemiCircle: return EnsembleId::hermite();
    case LawKind::MarchenkoPastur: return EnsembleId::laguerre(law.tau());
    case LawKind::KestenMcKay:
    case LawKind::Arcsine01: return EnsembleId::jacobi(law.kappa1(), law.kappa2());
    case LawKind::GeneralV:
      throw std::runtime_error("spectral_side: no closed outlier rate for GeneralV");
  }
  throw std::logic_error("unreachable");
}

}  // namespace

SpectralSide spectral_side(const ReferenceLaw& law, const MeasureS1& mu,
                           const KlOptions& kl_opts) {
  SpectralSide out;
  std::string why;
  if (!mu.validate_against(law, &why)) {
    out.value = kInf;
    out.s1_violation = true;
    out.s1_reason = why;
    return out;
  }
  const KlResult kl = kl_reverse(law, mu, kl_opts);
  out.kl = kl.value;
  out.kl_cap_triggered = kl.cap_triggered;

  const bool general = law.kind() == LawKind::GeneralV;
  EnsembleId ens;
  if (!general) ens = ensemble_for(law);
  for (const Atom& a : mu.atoms_plus) {
    const double f = general ? rate_from_effective_potential(law, a.pos, Side::plus)
                             : f_plus(ens, a.pos);
    out.per_atom_plus.push_back(f);
    out.sum_f_plus += f;
  }
  for (const Atom& a : mu.atoms_minus) {
    const double f = general ? rate_from_effective_potential(law, a.pos, Side::minus)
                             : f_minus(ens, a.pos);
    out.per_atom_minus.push_back(f);
    out.sum_f_minus += f;
  }
  out.value = out.kl + out.sum_f_plus + out.sum_f_minus;
  return out;
}

double h_functional(const EnsembleId& ens, const jacobi::JacobiCoefficients& j) {
  const std::size_t n = j.size();
  switch (ens.kind) {
    case EnsembleId::Kind::Hermite: {
      double h = 0.0;
      for (double bk : j.b) h += 0.5 * bk * bk;
      for (double ak : j.a) h += ak * ak - std::log(ak * ak);
      return h;
    }
    case EnsembleId::Kind::Laguerre: {
      const jacobi::ZChain z = jacobi::z_decompose(j);
      const double tau = ens.tau;
      double tr = 0.0;
      for (double zk : z.z) tr += zk;
      double logdet = 0.0;
      for (std::size_t k = 0; k < z.size(); k += 2) logdet += std::log(z.z[k]);
      double loga2 = 0.0;
      for (std::size_t k = 1; k < n; ++k)
        loga2 += std::log(z.z[2 * k - 2]) + std::log(z.z[2 * k - 1]);
      return tr / tau - (1.0 / tau - 1.0) * logdet - loga2;
    }
    case EnsembleId::Kind::Jacobi: {
      // coefficients live on [-2,2]; det(2I -+ T) via the Verblunsky products
      const jacobi::VerblunskySeq v = jacobi::geronimus_inverse(j);
      double log_dm = std::log(2.0), log_dp = std::log(2.0);
      for (std::size_t k = 0; k < v.size(); ++k) {
        log_dm += std::log(1.0 - v.alpha[k]);
        log_dp += std::log(1.0 + (k % 2 == 0 ? v.alpha[k] : -v.alpha[k]));
      }
      double loga2 = 0.0;
      for (double ak : j.a) loga2 += std::log(ak * ak);
      return -ens.kappa1 * log_dm - ens.kappa2 * log_dp - loga2;
    }
  }
  throw std::logic_error("h_functional: unreachable");
}

double h_normalized(const EnsembleId& ens, const jacobi::JacobiCoefficients& j) {
  const std::size_t n = j.size();
  switch (ens.kind) {
    case EnsembleId::Kind::Hermite:
      return h_functional(ens, j) - static_cast<double>(n - 1);
    case EnsembleId::Kind::Laguerre: {
      const double tau = ens.tau;
      const double at_min =
          static_cast<double>(n) / tau + (n - 1) * (1.0 - std::log(tau));
      return h_functional(ens, j) - at_min;
    }
    case EnsembleId::Kind::Jacobi: {
      const jacobi::JacobiCoefficients eq = jacobi::geronimus_forward(
          jacobi::kmk_verblunsky(ens.kappa1, ens.kappa2, static_cast<int>(2 * n - 1)));
      return h_functional(ens, j) - h_functional(ens, eq);
    }
  }
  throw std::logic_error("h_normalized: unreachable");
}

GemReport gem_diagnostics(const ReferenceLaw& law, const MeasureS1& mu) {
  GemReport rep;
  rep.s1_member = mu.validate_against(law, &rep.s1_reason);

  const double ap = law.alpha_plus(), am = law.alpha_minus();
  for (const Atom& a : mu.atoms_plus)
    rep.threehalves_sum += std::pow(std::max(a.pos - ap, 0.0), 1.5);
  for (const Atom& a : mu.atoms_minus)
    rep.threehalves_sum += std::pow(std::max(am - a.pos, 0.0), 1.5);
  rep.threehalves_ok = std::isfinite(rep.threehalves_sum);
  // hard-edge guards
  if (law.kind() == LawKind::MarchenkoPastur) {
    if (!mu.atoms_minus.empty() && !(mu.atoms_minus.front().pos > 0.0))
      rep.threehalves_ok = false;
  } else if (law.kind() == LawKind::KestenMcKay || law.kind() == LawKind::Arcsine01) {
    if (!mu.atoms_minus.empty() && !(mu.atoms_minus.front().pos > 0.0))
      rep.threehalves_ok = false;
    if (!mu.atoms_plus.empty() && !(mu.atoms_plus.front().pos < 1.0))
      rep.threehalves_ok = false;
  }

  // weighted Szego condition: int sqrt((a+ - x)(x - a-)) / w(x) log f(x) dx > -inf
  auto wfun = [&](double x) -> double {
    switch (law.kind()) {
      case LawKind::MarchenkoPastur: return x;
      case LawKind::KestenMcKay:
      case LawKind::Arcsine01: return x * (1.0 - x);
      default: return 1.0;
    }
  };
  if (!mu.ac_density) {
    rep.szego_integral = -kInf;
    rep.szego_finite = false;
    return rep;
  }
  const double m = 0.5 * (am + ap), r = 0.5 * (ap - am);
  const quad::Rule& rule = quad::gauss_legendre(16);
  const int panels = 512;
  const double h = kPi / panels;
  double total = 0.0;
  bool hit_zero = false;
  for (int p = 0; p < panels && !hit_zero; ++p) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double th = (p + 0.5) * h + 0.5 * h * rule.nodes[i];
      const double x = m + r * std::cos(th);
      const double f = mu.ac_density(x);
      if (f <= 0.0) {
        hit_zero = true;
        break;
      }
      // sqrt((ap-x)(x-am)) = r sin(theta); dx = r sin(theta) dtheta
      const double rs = r * std::sin(th);
      total += 0.5 * h * rule.weights[i] * rs * rs / wfun(x) * std::log(f);
    }
  }
  rep.szego_integral = hit_zero ? -kInf : total;
  rep.szego_finite = !hit_zero && total > -1e6;
  return rep;
}

void SumRuleReport::finalize(double tol) {
  const bool sum_inf = !(sum.value < kInf);
  const bool spec_inf = !(spectral.value < kInf);
  both_infinite = sum_inf && spec_inf;
  if (both_infinite) {
    verdict = Verdict::PassInf;
    abs_gap = 0.0;
    return;
  }
  if (sum_inf != spec_inf) {
    verdict = Verdict::Fail;
    abs_gap = kInf;
    return;
  }
  abs_gap = std::fabs(sum.value - spectral.value);
  verdict = abs_gap < tol ? Verdict::Pass : Verdict::Fail;
}

SumRuleReport verify_sum_rule(const EnsembleId& ens, const SumSideInput& input,
                              const MeasureS1& mu, int depth, double tol,
                              const KlOptions& kl_opts) {
  SumRuleReport rep;
  rep.ensemble = ens;
  rep.truncation_depth = depth;
  switch (ens.kind) {
    case EnsembleId::Kind::Hermite: {
      const auto* j = std::get_if<jacobi::JacobiCoefficients>(&input);
      if (!j) throw std::invalid_argument("verify_sum_rule: Hermite expects coefficients");
      rep.sum = sum_side_hermite(*j);
      break;
    }
    case EnsembleId::Kind::Laguerre: {
      if (const auto* z = std::get_if<jacobi::ZChain>(&input)) {
        rep.sum = sum_side_laguerre(*z, ens.tau);
      } else if (const auto* j = std::get_if<jacobi::JacobiCoefficients>(&input)) {
        rep.sum = sum_side_laguerre(jacobi::z_decompose(*j), ens.tau);
      } else {
        throw std::invalid_argument("verify_sum_rule: Laguerre expects a z chain");
      }
      break;
    }
    case EnsembleId::Kind::Jacobi: {
      const auto* v = std::get_if<jacobi::VerblunskySeq>(&input);
      if (!v) throw std::invalid_argument("verify_sum_rule: Jacobi expects Verblunsky");
      rep.sum = sum_side_jacobi(*v, ens.kappa1, ens.kappa2);
      break;
    }
  }
  rep.spectral = spectral_side(ens.law(), mu, kl_opts);
  rep.finalize(tol);
  return rep;
}

}  // namespace sr
