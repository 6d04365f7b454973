#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sr::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1,1]
  std::vector<double> weights;
};

// Gauss-Legendre rule of order n (Newton iteration on Legendre polynomials).
const Rule& gauss_legendre(int n);

// Composite Gauss-Legendre over [a,b] with `panels` equal panels.
double composite_gl(const std::function<double(double)>& f, double a, double b,
                    int panels, int deg = 16);

// Adaptive Gauss-Kronrod 7/15 bisection. Throws on depth exhaustion only if
// the remaining error estimate exceeds the requested tolerance by 1e3.
double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double abstol = 1e-12, double reltol = 1e-12, int max_depth = 28);

}  // namespace sr::quad
