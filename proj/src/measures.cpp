#include "sumrule/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sumrule/kernels.hpp"
#include "sumrule/quadrature.hpp"

namespace sr {

namespace {
constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }
}  // namespace

ReferenceLaw ReferenceLaw::semicircle() {
  ReferenceLaw law;
  law.kind_ = LawKind::SemiCircle;
  law.am_ = -2.0;
  law.ap_ = 2.0;
  law.bm_ = -kInf;
  law.bp_ = kInf;
  return law;
}

ReferenceLaw ReferenceLaw::marchenko_pastur(double tau) {
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("marchenko_pastur: tau must lie in (0,1]");
  ReferenceLaw law;
  law.kind_ = LawKind::MarchenkoPastur;
  law.tau_ = tau;
  const double st = std::sqrt(tau);
  law.am_ = sq(1.0 - st);
  law.ap_ = sq(1.0 + st);
  law.bm_ = 0.0;
  law.bp_ = kInf;
  return law;
}

ReferenceLaw ReferenceLaw::kesten_mckay(double k1, double k2) {
  if (k1 < 0.0 || k2 < 0.0)
    throw std::invalid_argument("kesten_mckay: parameters must be nonnegative");
  ReferenceLaw law;
  law.kind_ = LawKind::KestenMcKay;
  law.k1_ = k1;
  law.k2_ = k2;
  const double c = 2.0 + k1 + k2;
  const double disc = 4.0 * std::sqrt((1.0 + k1) * (1.0 + k2) * (1.0 + k1 + k2));
  law.am_ = 0.5 + (k1 * k1 - k2 * k2 - disc) / (2.0 * c * c);
  law.ap_ = 0.5 + (k1 * k1 - k2 * k2 + disc) / (2.0 * c * c);
  law.bm_ = 0.0;
  law.bp_ = 1.0;
  return law;
}

ReferenceLaw ReferenceLaw::arcsine01() {
  ReferenceLaw law = kesten_mckay(0.0, 0.0);
  law.kind_ = LawKind::Arcsine01;
  law.am_ = 0.0;
  law.ap_ = 1.0;
  return law;
}

ReferenceLaw ReferenceLaw::general(Evaluator potential, double b_minus, double b_plus,
                                   Evaluator density, double a_minus, double a_plus) {
  ReferenceLaw law;
  law.kind_ = LawKind::GeneralV;
  law.pot_ = std::move(potential);
  law.bm_ = b_minus;
  law.bp_ = b_plus;
  law.dens_ = std::move(density);
  law.am_ = a_minus;
  law.ap_ = a_plus;
  return law;
}

bool ReferenceLaw::has_density() const {
  return kind_ != LawKind::GeneralV || bool(dens_);
}

double ReferenceLaw::density(double x) const {
  switch (kind_) {
    case LawKind::SemiCircle:
      if (x <= -2.0 || x >= 2.0) return 0.0;
      return std::sqrt(4.0 - x * x) / (2.0 * kPi);
    case LawKind::MarchenkoPastur:
      if (x <= am_ || x >= ap_) return 0.0;
      return std::sqrt((ap_ - x) * (x - am_)) / (2.0 * kPi * tau_ * x);
    case LawKind::KestenMcKay:
      if (x <= am_ || x >= ap_) return 0.0;
      return (2.0 + k1_ + k2_) / (2.0 * kPi) *
             std::sqrt((ap_ - x) * (x - am_)) / (x * (1.0 - x));
    case LawKind::Arcsine01:
      if (x <= 0.0 || x >= 1.0) return 0.0;
      return 1.0 / (kPi * std::sqrt(x * (1.0 - x)));
    case LawKind::GeneralV:
      if (!dens_) throw std::runtime_error("density: GeneralV law has no evaluator");
      if (x <= am_ || x >= ap_) return 0.0;
      return dens_(x);
  }
  return 0.0;
}

double ReferenceLaw::potential(double x) const {
  if (x < bm_ || x > bp_) return kInf;
  switch (kind_) {
    case LawKind::SemiCircle:
      return 0.5 * x * x;
    case LawKind::MarchenkoPastur:
      if (x <= 0.0) return tau_ == 1.0 ? (x == 0.0 ? 0.0 : kInf) : kInf;
      return x / tau_ - (1.0 / tau_ - 1.0) * std::log(x);
    case LawKind::KestenMcKay:
      if ((x <= 0.0 && k1_ > 0.0) || (x >= 1.0 && k2_ > 0.0)) return kInf;
      return -k1_ * (x > 0.0 ? std::log(x) : 0.0) -
             k2_ * (x < 1.0 ? std::log(1.0 - x) : 0.0);
    case LawKind::Arcsine01:
      return 0.0;
    case LawKind::GeneralV:
      if (!pot_) throw std::runtime_error("potential: GeneralV law has no evaluator");
      return pot_(x);
  }
  return kInf;
}

double ReferenceLaw::s_factor(double x) const {
  switch (kind_) {
    case LawKind::SemiCircle:
      return 1.0;
    case LawKind::MarchenkoPastur:
      return 1.0 / (tau_ * x);
    case LawKind::KestenMcKay:
      return (2.0 + k1_ + k2_) / (x * (1.0 - x));
    case LawKind::Arcsine01:
      return 2.0 / (x * (1.0 - x));
    case LawKind::GeneralV:
      if (!s_) throw std::runtime_error("s_factor: GeneralV law has no evaluator");
      return s_(x);
  }
  return 0.0;
}

std::string ReferenceLaw::name() const {
  switch (kind_) {
    case LawKind::SemiCircle: return "semicircle";
    case LawKind::MarchenkoPastur: return "marchenko_pastur";
    case LawKind::KestenMcKay: return "kesten_mckay";
    case LawKind::Arcsine01: return "arcsine01";
    case LawKind::GeneralV: return "general";
  }
  return "?";
}

double MeasureS1::total_mass() const {
  double m = ac_mass + interior_singular_mass;
  for (const Atom& a : atoms_plus) m += a.mass;
  for (const Atom& a : atoms_minus) m += a.mass;
  return m;
}

bool MeasureS1::validate_against(const ReferenceLaw& law, std::string* why) const {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (const Atom& a : atoms_plus)
    if (!(a.mass > 0.0)) throw std::invalid_argument("MeasureS1: atom mass must be > 0");
  for (const Atom& a : atoms_minus)
    if (!(a.mass > 0.0)) throw std::invalid_argument("MeasureS1: atom mass must be > 0");
  if (ac_mass < -1e-12 || interior_singular_mass < 0.0)
    throw std::invalid_argument("MeasureS1: negative mass component");
  if (std::fabs(total_mass() - 1.0) > 1e-8)
    throw std::invalid_argument("MeasureS1: total mass must be 1");

  for (std::size_t i = 0; i < atoms_plus.size(); ++i) {
    if (!(atoms_plus[i].pos > law.alpha_plus()))
      return fail("plus atom not strictly right of the support");
    if (i > 0 && !(atoms_plus[i].pos < atoms_plus[i - 1].pos))
      return fail("plus atoms not strictly decreasing");
    if (atoms_plus[i].pos > law.b_plus()) return fail("plus atom outside [b-, b+]");
  }
  for (std::size_t i = 0; i < atoms_minus.size(); ++i) {
    if (!(atoms_minus[i].pos < law.alpha_minus()))
      return fail("minus atom not strictly left of the support");
    if (i > 0 && !(atoms_minus[i].pos > atoms_minus[i - 1].pos))
      return fail("minus atoms not strictly increasing");
    if (atoms_minus[i].pos < law.b_minus()) return fail("minus atom outside [b-, b+]");
  }
  return true;
}

MeasureS1 equilibrium_measure(const ReferenceLaw& law) {
  MeasureS1 mu;
  mu.ac_density = [law](double x) { return law.density(x); };
  mu.ac_mass = 1.0;
  mu.tag = law.name();
  return mu;
}

MeasureS1 polynomial_modulated(const ReferenceLaw& law, std::vector<double> poly) {
  auto peval = [poly](double x) {
    double v = 0.0;
    for (std::size_t i = poly.size(); i-- > 0;) v = v * x + poly[i];
    return v;
  };
  const double norm = quad::composite_gl(
      [&](double x) { return peval(x) * law.density(x); }, law.alpha_minus(),
      law.alpha_plus(), 512);
  if (!(norm > 0.0))
    throw std::invalid_argument("polynomial_modulated: polynomial not positive on support");
  MeasureS1 mu;
  mu.ac_density = [law, peval, norm](double x) {
    const double v = peval(x) * law.density(x) / norm;
    if (v < 0.0) throw std::domain_error("polynomial_modulated: negative density");
    return v;
  };
  mu.ac_mass = 1.0;
  mu.tag = "polynomial_modulated";
  return mu;
}

MeasureS1 hermite_rank_one(double c) {
  MeasureS1 mu;
  mu.ac_density = [c](double x) {
    if (x <= -2.0 || x >= 2.0) return 0.0;
    const double s = 4.0 - x * x;
    return (std::sqrt(s) / 2.0) / (kPi * (sq(c - 0.5 * x) + 0.25 * s));
  };
  mu.tag = "rank_one";
  if (std::fabs(c) > 1.0) {
    const double pos = c + 1.0 / c;
    const double mass = 1.0 - 1.0 / (c * c);
    if (c > 0)
      mu.atoms_plus.push_back({pos, mass});
    else
      mu.atoms_minus.push_back({pos, mass});
    mu.ac_mass = 1.0 - mass;
  }
  return mu;
}

MeasureS1 laguerre_atom_at_zero(double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("laguerre_atom_at_zero: tau must lie in (0,1)");
  const ReferenceLaw mp = ReferenceLaw::marchenko_pastur(tau);
  MeasureS1 mu;
  mu.ac_density = [mp, tau](double x) { return tau * mp.density(x); };
  mu.ac_mass = tau;
  mu.atoms_minus.push_back({0.0, 1.0 - tau});
  mu.tag = "atom_at_zero";
  return mu;
}

MeasureS1 bernstein_szego01(double r) {
  if (!(std::fabs(r) < 1.0))
    throw std::invalid_argument("bernstein_szego01: |r| must be < 1");
  MeasureS1 mu;
  // density on [-2,2]: (1-r^2) / (pi (1+r^2-rx) sqrt(4-x^2)); pushforward by
  // x -> (2-x)/4 onto [0,1]
  mu.ac_density = [r](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double x = 2.0 - 4.0 * t;
    return 4.0 * (1.0 - r * r) /
           (kPi * (1.0 + r * r - r * x) * std::sqrt(4.0 - x * x));
  };
  mu.tag = "bernstein_szego";
  return mu;
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> n, std::vector<double> w)
    : nodes(std::move(n)), weights(std::move(w)) {
  if (nodes.size() != weights.size())
    throw std::invalid_argument("DiscreteMeasure: node/weight size mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0 && !(nodes[i] > nodes[i - 1]))
      throw std::invalid_argument("DiscreteMeasure: nodes must be strictly increasing");
    if (!(weights[i] > 0.0))
      throw std::invalid_argument("DiscreteMeasure: weights must be positive");
  }
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

KlResult kl_reverse(const ReferenceLaw& law, const MeasureS1& mu, const KlOptions& opts) {
  if (!law.has_density())
    throw std::runtime_error("kl_reverse: law has no density evaluator");
  if (!mu.ac_density)
    throw std::invalid_argument("kl_reverse: measure lacks a density evaluator");

  const double a = law.alpha_minus(), b = law.alpha_plus();
  const double m = 0.5 * (a + b), r = 0.5 * (b - a);
  const quad::Rule& rule = quad::gauss_legendre(opts.deg);

  KlResult out;
  // x = m + r cos(theta) absorbs the sqrt edge factors of f_V
  const double h = kPi / opts.panels;
  std::vector<double> vals(rule.nodes.size());
  double total = 0.0;
  for (int p = 0; p < opts.panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double th = mid + 0.5 * h * rule.nodes[i];
      const double x = m + r * std::cos(th);
      const double fv = law.density(x);
      if (fv <= 0.0) {
        vals[i] = 0.0;
        continue;
      }
      const double f = mu.ac_density(x);
      if (f <= 0.0) {
        // f_V-positive set where mu has no density: K = +inf
        out.value = kInf;
        out.support_violation = true;
        return out;
      }
      vals[i] = fv * std::log(fv / f) * r * std::sin(th);
    }
    total += 0.5 * h * kern::dot(vals, rule.weights);
  }
  if (total > opts.divergence_cap) {
    out.value = kInf;
    out.cap_triggered = true;
    return out;
  }
  out.value = total;
  return out;
}

std::vector<double> quad_moments(const DiscreteMeasure& mu, int max_order) {
  if (max_order < 0) throw std::invalid_argument("quad_moments: max_order must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
  kern::weighted_power_sums(mu.nodes, mu.weights, out);
  return out;
}

DiscreteMeasure discretize(const ReferenceLaw& law, int panels, int deg) {
  const double a = law.alpha_minus(), b = law.alpha_plus();
  const double m = 0.5 * (a + b), r = 0.5 * (b - a);
  const quad::Rule& rule = quad::gauss_legendre(deg);
  const double h = kPi / panels;
  std::vector<double> nodes, weights;
  nodes.reserve(panels * deg);
  weights.reserve(panels * deg);
  // theta descending in x: build ascending by sweeping theta from pi to 0
  for (int p = panels - 1; p >= 0; --p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = rule.nodes.size(); i-- > 0;) {
      const double th = mid + 0.5 * h * rule.nodes[i];
      const double x = m + r * std::cos(th);
      const double w = 0.5 * h * rule.weights[i] * law.density(x) * r * std::sin(th);
      if (w > 0.0) {
        nodes.push_back(x);
        weights.push_back(w);
      }
    }
  }
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return DiscreteMeasure(std::move(nodes), std::move(weights));
}

}  // namespace sr
