#include "sumrule/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sr::jacobi {

namespace {

double hypot2(double a, double b) { return std::hypot(a, b); }

// Implicit-shift QL with Wilkinson shifts on a symmetric tridiagonal matrix.
// d: diagonal (length n), e: subdiagonal (length n, e[n-1] unused).
// If z != nullptr it holds the first row of the accumulated rotation product
// (started at e_1), which is all Golub-Welsch needs.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return;
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw std::runtime_error("tridiag_ql: too many iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z != nullptr) {
            const double zi1 = (*z)[i + 1];
            const double zi = (*z)[i];
            (*z)[i + 1] = s * zi + c * zi1;
            (*z)[i] = c * zi - s * zi1;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

struct SortedSpectral {
  std::vector<double> values;
  std::vector<double> weights;
};

SortedSpectral solve(const JacobiCoefficients& j, bool want_weights) {
  const std::size_t n = j.size();
  if (n == 0) throw std::invalid_argument("spectral_from_coeffs: empty coefficients");
  if (j.a.size() + 1 != n)
    throw std::invalid_argument("spectral_from_coeffs: a must have length n-1");
  for (double ak : j.a)
    if (!(ak > 0.0))
      throw std::invalid_argument("spectral_from_coeffs: offdiagonal entries must be > 0");
  std::vector<double> d = j.b;
  std::vector<double> e(n, 0.0);
  std::copy(j.a.begin(), j.a.end(), e.begin());
  std::vector<double> z;
  if (want_weights) {
    z.assign(n, 0.0);
    z[0] = 1.0;
  }
  tridiag_ql(d, e, want_weights ? &z : nullptr);

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) { return d[p] < d[q]; });

  SortedSpectral out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = d[idx[i]];
  if (want_weights) {
    out.weights.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out.weights[i] = z[idx[i]] * z[idx[i]];
      total += out.weights[i];
    }
    for (double& w : out.weights) w /= total;
  }
  return out;
}

}  // namespace

JacobiCoefficients coeffs_from_measure(const DiscreteMeasure& mu, int depth) {
  const std::size_t n = mu.size();
  if (depth < 1) throw std::invalid_argument("coeffs_from_measure: depth must be >= 1");
  if (n < static_cast<std::size_t>(depth))
    throw std::runtime_error("coeffs_from_measure: fewer distinct nodes (" +
                             std::to_string(n) + ") than depth " + std::to_string(depth));
  const double mass = mu.total_mass();

  std::vector<std::vector<double>> Q;
  Q.reserve(depth);
  std::vector<double> q0(n);
  for (std::size_t i = 0; i < n; ++i) q0[i] = std::sqrt(mu.weights[i] / mass);
  Q.push_back(std::move(q0));

  JacobiCoefficients out;
  out.b.resize(depth);
  out.a.resize(depth - 1);
  double beta = 0.0;
  for (int k = 0; k < depth; ++k) {
    const std::vector<double>& qk = Q[k];
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = mu.nodes[i] * qk[i];
    double alpha = 0.0;
    for (std::size_t i = 0; i < n; ++i) alpha += qk[i] * v[i];
    out.b[k] = alpha;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] -= alpha * qk[i];
      if (k > 0) v[i] -= beta * Q[k - 1][i];
    }
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : Q) {
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += q[i] * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= proj * q[i];
      }
    }
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    beta = std::sqrt(norm2);
    if (k < depth - 1) {
      if (!(beta > 1e-13))
        throw std::runtime_error(
            "coeffs_from_measure: rank deficiency at recursion step " +
            std::to_string(k + 1));
      out.a[k] = beta;
      for (double& x : v) x /= beta;
      Q.push_back(std::move(v));
    }
  }
  return out;
}

DiscreteMeasure spectral_from_coeffs(const JacobiCoefficients& j) {
  SortedSpectral s = solve(j, true);
  return DiscreteMeasure(std::move(s.values), std::move(s.weights));
}

std::vector<double> eigenvalues_only(const JacobiCoefficients& j) {
  return solve(j, false).values;
}

ZChain z_decompose(const JacobiCoefficients& j) {
  const std::size_t n = j.size();
  ZChain out;
  out.z.resize(2 * n - 1);
  out.z[0] = j.b[0];  // z_1 = b_1
  if (out.z[0] < 0.0)
    throw std::runtime_error("z_decompose: z_1 = b_1 < 0, measure not supported on [0,inf)");
  for (std::size_t k = 1; k < n; ++k) {
    const double zodd = out.z[2 * k - 2];  // z_{2k-1}
    const double ak = j.a[k - 1];
    if (zodd <= 0.0) {
      if (ak > 0.0)
        throw std::runtime_error("z_decompose: z_" + std::to_string(2 * k - 1) +
                                 " <= 0 with a_" + std::to_string(k) +
                                 " > 0 (halfline Favard criterion fails)");
      out.z[2 * k - 1] = 0.0;
    } else {
      out.z[2 * k - 1] = ak * ak / zodd;  // z_{2k}
    }
    const double znext = j.b[k] - out.z[2 * k - 1];  // z_{2k+1}
    if (znext < -1e-12)
      throw std::runtime_error("z_decompose: z_" + std::to_string(2 * k + 1) +
                               " < 0, measure not supported on [0,inf)");
    out.z[2 * k] = std::max(znext, 0.0);
  }
  return out;
}

JacobiCoefficients z_compose(const ZChain& zc) {
  const std::size_t m = zc.size();
  if (m == 0) throw std::invalid_argument("z_compose: empty chain");
  for (double z : zc.z)
    if (z < 0.0) throw std::invalid_argument("z_compose: entries must be nonnegative");
  const std::size_t n = (m + 1) / 2;
  JacobiCoefficients out;
  out.b.resize(n);
  out.a.resize(n - 1);
  auto z = [&](std::size_t i) { return i == 0 ? 0.0 : (i <= m ? zc.z[i - 1] : 0.0); };
  for (std::size_t k = 1; k <= n; ++k) out.b[k - 1] = z(2 * k - 2) + z(2 * k - 1);
  for (std::size_t k = 1; k < n; ++k) out.a[k - 1] = std::sqrt(z(2 * k - 1) * z(2 * k));
  return out;
}

JacobiCoefficients geronimus_forward(const VerblunskySeq& v) {
  const std::size_t L = v.size();
  if (L == 0) throw std::invalid_argument("geronimus_forward: empty sequence");
  for (std::size_t i = 0; i < L; ++i)
    if (!(std::fabs(v.alpha[i]) < 1.0))
      throw std::runtime_error("geronimus_forward: |alpha_" + std::to_string(i) +
                               "| >= 1 (finitely supported measure)");
  auto al = [&](long i) { return i < 0 ? -1.0 : v.alpha[static_cast<std::size_t>(i)]; };
  const std::size_t n = (L + 1) / 2;
  JacobiCoefficients out;
  out.b.resize(n);
  out.a.resize(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double am1 = al(2 * static_cast<long>(k) - 1);
    // the alpha_{2k-2} term is absent at k = 0 (multiplied by zero)
    out.b[k] = (1.0 - am1) * al(2 * k) -
               (k > 0 ? (1.0 + am1) * al(2 * static_cast<long>(k) - 2) : 0.0);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double am1 = al(2 * static_cast<long>(k) - 1);
    out.a[k] = std::sqrt((1.0 - am1) * (1.0 - al(2 * k) * al(2 * k)) * (1.0 + al(2 * k + 1)));
  }
  return out;
}

VerblunskySeq geronimus_inverse(const JacobiCoefficients& j) {
  const std::size_t n = j.size();
  if (n == 0) throw std::invalid_argument("geronimus_inverse: empty coefficients");
  VerblunskySeq v;
  v.alpha.reserve(2 * n - 1);
  auto check = [&](double x, std::size_t k) {
    if (!(std::fabs(x) < 1.0 - 1e-14))
      throw std::runtime_error("geronimus_inverse: recovered |alpha_" +
                               std::to_string(k) + "| >= 1, out of class");
    return x;
  };
  v.alpha.push_back(check(j.b[0] / 2.0, 0));
  if (n == 1) return v;
  v.alpha.push_back(check(j.a[0] * j.a[0] / (2.0 * (1.0 - v.alpha[0] * v.alpha[0])) - 1.0, 1));
  for (std::size_t k = 1; k < n; ++k) {
    const double am1 = v.alpha[2 * k - 1];
    const double ev = (j.b[k] + (1.0 + am1) * v.alpha[2 * k - 2]) / (1.0 - am1);
    v.alpha.push_back(check(ev, 2 * k));
    if (k < n - 1) {
      const double od =
          j.a[k] * j.a[k] / ((1.0 - am1) * (1.0 - ev * ev)) - 1.0;
      v.alpha.push_back(check(od, 2 * k + 1));
    }
  }
  return v;
}

JacobiCoefficients szego_pushforward(const JacobiCoefficients& j, SzegoDirection d) {
  JacobiCoefficients out;
  out.b.resize(j.b.size());
  out.a.resize(j.a.size());
  if (d == SzegoDirection::to01) {
    for (std::size_t i = 0; i < j.b.size(); ++i) out.b[i] = (2.0 - j.b[i]) / 4.0;
    for (std::size_t i = 0; i < j.a.size(); ++i) out.a[i] = j.a[i] / 4.0;
  } else {
    for (std::size_t i = 0; i < j.b.size(); ++i) out.b[i] = 2.0 - 4.0 * j.b[i];
    for (std::size_t i = 0; i < j.a.size(); ++i) out.a[i] = 4.0 * j.a[i];
  }
  return out;
}

CanonicalMoments canonical_from_verblunsky(const VerblunskySeq& v) {
  CanonicalMoments out;
  out.p.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.p[i] = 0.5 * (v.alpha[i] + 1.0);
  return out;
}

VerblunskySeq verblunsky_from_canonical(const CanonicalMoments& p) {
  VerblunskySeq out;
  out.alpha.resize(p.p.size());
  for (std::size_t i = 0; i < p.p.size(); ++i) out.alpha[i] = 2.0 * p.p[i] - 1.0;
  return out;
}

JacobiCoefficients reference_coefficients(const ReferenceLaw& law, int depth) {
  if (depth < 1) throw std::invalid_argument("reference_coefficients: depth must be >= 1");
  JacobiCoefficients out;
  out.b.resize(depth);
  out.a.resize(depth - 1);
  switch (law.kind()) {
    case LawKind::SemiCircle:
      std::fill(out.b.begin(), out.b.end(), 0.0);
      std::fill(out.a.begin(), out.a.end(), 1.0);
      return out;
    case LawKind::MarchenkoPastur: {
      const double tau = law.tau();
      out.b[0] = 1.0;
      std::fill(out.b.begin() + 1, out.b.end(), 1.0 + tau);
      std::fill(out.a.begin(), out.a.end(), std::sqrt(tau));
      return out;
    }
    case LawKind::Arcsine01:
    case LawKind::KestenMcKay: {
      const double k1 = law.kappa1(), k2 = law.kappa2();
      const double c = 2.0 + k1 + k2;
      out.b[0] = (1.0 + k1) / c;
      const double bk = 0.5 * (1.0 + (k1 * k1 - k2 * k2) / (c * c));
      std::fill(out.b.begin() + 1, out.b.end(), bk);
      if (depth > 1) {
        out.a[0] = std::sqrt((1.0 + k1) * (1.0 + k2)) / std::pow(c, 1.5);
        const double ak = std::sqrt((1.0 + k1 + k2) * (1.0 + k1) * (1.0 + k2)) / (c * c);
        std::fill(out.a.begin() + 1, out.a.end(), ak);
      }
      return out;
    }
    case LawKind::GeneralV:
      throw std::runtime_error("reference_coefficients: unsupported for GeneralV");
  }
  throw std::logic_error("reference_coefficients: unreachable");
}

VerblunskySeq kmk_verblunsky(double k1, double k2, int count) {
  const double c = 2.0 + k1 + k2;
  VerblunskySeq v;
  v.alpha.resize(count);
  for (int i = 0; i < count; ++i)
    v.alpha[i] = (i % 2 == 0) ? (k2 - k1) / c : -(k1 + k2) / c;
  return v;
}

DiscreteMeasure gauss_rule(const ReferenceLaw& law, int n) {
  return spectral_from_coeffs(reference_coefficients(law, n));
}

namespace {
double det_shifted(const JacobiCoefficients& j, double shift, double sign) {
  // det(shift*I + sign*T) via the tridiagonal three-term recurrence
  const std::size_t n = j.size();
  double dm1 = 1.0, d = shift + sign * j.b[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double next = (shift + sign * j.b[k]) * d - j.a[k - 1] * j.a[k - 1] * dm1;
    dm1 = d;
    d = next;
  }
  return d;
}
}  // namespace

double det_2I_minus(const JacobiCoefficients& j) { return det_shifted(j, 2.0, -1.0); }
double det_2I_plus(const JacobiCoefficients& j) { return det_shifted(j, 2.0, 1.0); }

}  // namespace sr::jacobi
