#pragma once

#include <vector>

#include "sumrule/measures.hpp"

namespace sr::jacobi {

// Recursion coefficients of orthonormal polynomials: b has length n, a has
// length n-1, all a_k > 0.
struct JacobiCoefficients {
  std::vector<double> b;
  std::vector<double> a;
  std::size_t size() const { return b.size(); }
};

// Nonnegative chain z_1..z_{2n-1} with z_0 = 0 implicit:
// b_k = z_{2k-2} + z_{2k-1}, a_k^2 = z_{2k-1} z_{2k}. Characterizes support
// in [0, inf).
struct ZChain {
  std::vector<double> z;  // z[i] is z_{i+1}
  std::size_t size() const { return z.size(); }
};

// alpha_0, alpha_1, ... in (-1,1), with alpha_{-1} = -1 implicit.
struct VerblunskySeq {
  std::vector<double> alpha;
  std::size_t size() const { return alpha.size(); }
};

struct CanonicalMoments {
  std::vector<double> p;  // p_1, p_2, ... in [0,1]
};

// Recursion coefficients of `mu` to the given depth, by Lanczos with full
// reorthogonalization on diag(nodes) started at sqrt(weights). Throws
// std::runtime_error naming the failing step on rank deficiency.
JacobiCoefficients coeffs_from_measure(const DiscreteMeasure& mu, int depth);

// Spectral measure of (T, e_1): eigenvalues ascending, weights = squared
// first eigenvector components (Golub-Welsch). Implicit-shift QL with
// Wilkinson shifts; only the first row of the eigenvector matrix is carried.
DiscreteMeasure spectral_from_coeffs(const JacobiCoefficients& j);

// eigenvalues only (ascending), no vector accumulation
std::vector<double> eigenvalues_only(const JacobiCoefficients& j);

ZChain z_decompose(const JacobiCoefficients& j);
JacobiCoefficients z_compose(const ZChain& z);

// Geronimus relations with alpha_{-1} = -1. From alpha_0..alpha_{L-1} the
// n x n coefficients with n = ceil(L/2) are produced; an even-length input's
// last entry does not enter the truncation.
JacobiCoefficients geronimus_forward(const VerblunskySeq& v);
// inverse recursion; recovered alpha_0..alpha_{2n-2} for an n x n input
VerblunskySeq geronimus_inverse(const JacobiCoefficients& j);

enum class SzegoDirection { to01, from01 };
// affine map x -> 1/2 - x/4 between coefficients on [-2,2] and [0,1]
JacobiCoefficients szego_pushforward(const JacobiCoefficients& j, SzegoDirection d);

CanonicalMoments canonical_from_verblunsky(const VerblunskySeq& v);
VerblunskySeq verblunsky_from_canonical(const CanonicalMoments& p);

// closed-form coefficient sequences of the classical laws (KMK on [0,1])
JacobiCoefficients reference_coefficients(const ReferenceLaw& law, int depth);

// Verblunsky coefficients of the Kesten-McKay law, in the orientation of the
// Geronimus relations above: even entries (k2-k1)/(2+k1+k2), odd entries
// -(k1+k2)/(2+k1+k2).
VerblunskySeq kmk_verblunsky(double k1, double k2, int count);

// Gauss rule of a classical law via Golub-Welsch on reference_coefficients
DiscreteMeasure gauss_rule(const ReferenceLaw& law, int n);

// det(2I - T) and det(2I + T) by the three-term determinant recurrence
double det_2I_minus(const JacobiCoefficients& j);
double det_2I_plus(const JacobiCoefficients& j);

}  // namespace sr::jacobi
