#include "sumrule/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "sumrule/kernels.hpp"

namespace sr::quad {

namespace {

Rule make_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, then Newton on P_n
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::map<int, Rule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

double composite_gl(const std::function<double(double)>& f, double a, double b,
                    int panels, int deg) {
  if (panels < 1) throw std::invalid_argument("composite_gl: panels must be >= 1");
  const Rule& rule = gauss_legendre(deg);
  const double h = (b - a) / panels;
  std::vector<double> vals(rule.nodes.size());
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      vals[i] = f(mid + 0.5 * h * rule.nodes[i]);
    total += 0.5 * h * kern::dot(vals, rule.weights);
  }
  return total;
}

namespace {

// QUADPACK dqk15 nodes/weights
constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkEstimate {
  double value;
  double error;
};

GkEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * wgk[7];
  double gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * xgk[j];
    const double fsum = f(c - x) + f(c + x);
    kron += fsum * wgk[j];
    if (j % 2 == 1) gauss += fsum * wg[j / 2];
  }
  return {kron * h, std::fabs((kron - gauss) * h)};
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double tol, int depth, int max_depth) {
  const GkEstimate e = gk15(f, a, b);
  if (e.error <= tol || depth >= max_depth) {
    if (depth >= max_depth && e.error > tol * 1e3)
      throw std::runtime_error("adaptive_gk: failed to converge");
    return e.value;
  }
  const double c = 0.5 * (a + b);
  return adaptive_rec(f, a, c, 0.5 * tol, depth + 1, max_depth) +
         adaptive_rec(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double abstol, double reltol, int max_depth) {
  if (a == b) return 0.0;
  const GkEstimate first = gk15(f, a, b);
  const double tol = std::max(abstol, reltol * std::fabs(first.value));
  if (first.error <= tol) return first.value;
  const double c = 0.5 * (a + b);
  return adaptive_rec(f, a, c, 0.5 * tol, 1, max_depth) +
         adaptive_rec(f, c, b, 0.5 * tol, 1, max_depth);
}

}  // namespace sr::quad
