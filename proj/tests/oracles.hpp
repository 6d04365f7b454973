#pragma once

// Test-only oracles, deliberately independent of the library's numerical
// paths: adaptive Simpson quadrature, dense eigensolves through Eigen, and a
// direct Gram-Schmidt recursion check.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "sumrule/jacobi.hpp"

namespace oracle {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

struct DenseEig {
  std::vector<double> values;
  std::vector<double> first_row_sq;  // squared first components
};

inline DenseEig dense_spectral(const sr::jacobi::JacobiCoefficients& j) {
  const int n = static_cast<int>(j.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) T(i, i) = j.b[i];
  for (int i = 0; i + 1 < n; ++i) T(i, i + 1) = T(i + 1, i) = j.a[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  DenseEig out;
  out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  out.first_row_sq.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v = es.eigenvectors()(0, k);
    out.first_row_sq[k] = v * v;
  }
  return out;
}

inline double dense_trV(const sr::jacobi::JacobiCoefficients& j,
                        const std::function<double(double)>& V) {
  double s = 0.0;
  for (double lam : dense_spectral(j).values) s += V(lam);
  return s;
}

// checks the three-term recursion x p_k = a_{k+1} p_{k+1} + b_{k+1} p_k +
// a_k p_{k-1} against explicitly orthonormalized polynomials on the measure
inline double recursion_residual(const sr::DiscreteMeasure& mu,
                                 const sr::jacobi::JacobiCoefficients& j) {
  const std::size_t n = mu.size();
  const std::size_t depth = j.size();
  // Gram-Schmidt on monomials evaluated at the nodes, weighted inner product
  std::vector<std::vector<double>> P;
  std::vector<double> cur(n, 1.0);
  auto inner = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += mu.weights[i] * u[i] * v[i];
    return s;
  };
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<double> v = k == 0 ? cur : std::vector<double>(n);
    if (k > 0)
      for (std::size_t i = 0; i < n; ++i) v[i] = mu.nodes[i] * P[k - 1][i];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : P) {
        const double c = inner(q, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
      }
    const double nv = std::sqrt(inner(v, v));
    for (double& x : v) x /= nv;
    P.push_back(std::move(v));
  }
  double resid = 0.0;
  for (std::size_t k = 0; k + 1 < depth; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double rhs = j.b[k] * P[k][i];
      rhs += j.a[k] * P[k + 1][i];
      if (k > 0) rhs += j.a[k - 1] * P[k - 1][i];
      resid = std::max(resid, std::fabs(mu.nodes[i] * P[k][i] - rhs));
    }
  }
  return resid;
}

}  // namespace oracle
