// AVX2 variants of the arithmetic kernels. Compiled with -mavx2 -mfma; only
// reached through the runtime dispatcher in kernels.cpp.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace sr::kern::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// log(x) for finite positive x, Cephes-style: reduce x = m * 2^e with
// m in [sqrt(1/2), sqrt(2)), then log(m) = z - z^2/2 + z^3 P(z)/Q(z), z = m-1.
inline __m256d log_pd(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);

  __m256i bits = _mm256_castpd_si256(x);
  __m256i expo = _mm256_and_si256(_mm256_srli_epi64(bits, 52),
                                  _mm256_set1_epi64x(0x7FF));
  // exponent as double via the 2^52 magic-number trick (expo is small and >= 0)
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(expo, _mm256_set1_epi64x(0x4330000000000000LL))),
      _mm256_set1_pd(4503599627370496.0));
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));

  // mantissa in [0.5, 1)
  __m256i mant = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FE0000000000000LL));
  __m256d m = _mm256_castsi256_pd(mant);

  const __m256d sqrthf = _mm256_set1_pd(0.70710678118654752440);
  __m256d lt = _mm256_cmp_pd(m, sqrthf, _CMP_LT_OQ);
  m = _mm256_add_pd(m, _mm256_and_pd(lt, m));   // m *= 2 where m < sqrt(1/2)
  e = _mm256_sub_pd(e, _mm256_and_pd(lt, one)); // e -= 1 there

  __m256d z = _mm256_sub_pd(m, one);
  __m256d zz = _mm256_mul_pd(z, z);

  // Cephes log.c rational coefficients
  __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(7.70838733755885391666e0));

  __m256d q = _mm256_add_pd(z, _mm256_set1_pd(1.12873587189167450590e1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(7.11544750618563894466e1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.31251620126765340583e1));

  __m256d y = _mm256_mul_pd(_mm256_mul_pd(z, zz), _mm256_div_pd(p, q));
  // exact-ish e*ln2 via hi/lo split
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(half, zz, y);
  __m256d r = _mm256_add_pd(z, y);
  r = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
  return r;
}

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));

}  // namespace

double dot_avx2(const double* x, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * w[i];
  return s;
}

double pairwise_log_energy_avx2(const double* x, const double* w, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const __m256d xi = _mm256_set1_pd(x[i]);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      __m256d d = _mm256_and_pd(_mm256_sub_pd(_mm256_loadu_pd(x + j), xi), kAbsMask);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), log_pd(d), acc);
    }
    double s = hsum(acc);
    for (; j < n; ++j) s += w[j] * std::log(std::fabs(x[j] - x[i]));
    total += w[i] * s;
  }
  return total;
}

void weighted_power_sums_avx2(const double* x, const double* w, std::size_t n,
                              double* out, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) out[j] = 0.0;
  if (m == 0) return;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    __m256d p = _mm256_loadu_pd(w + i);
    for (std::size_t j = 0; j < m; ++j) {
      out[j] += hsum(p);
      p = _mm256_mul_pd(p, xv);
    }
  }
  for (; i < n; ++i) {
    double p = w[i];
    for (std::size_t j = 0; j < m; ++j) {
      out[j] += p;
      p *= x[i];
    }
  }
}

}  // namespace sr::kern::detail
