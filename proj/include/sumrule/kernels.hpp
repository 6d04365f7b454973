#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel inner loops used by the quadrature, moment and energy code.
// Every kernel has a scalar reference implementation and (on x86-64) an AVX2
// variant; the active backend is picked once at runtime from CPUID unless
// overridden. The two backends are equivalence-tested against each other.
namespace sr::kern {

enum class Backend { Auto, Scalar, Avx2 };

// Select the backend. Auto (default) probes the CPU. Requesting Avx2 on a
// machine without it throws std::runtime_error.
void set_backend(Backend b);
Backend active_backend();
bool avx2_available();
std::string backend_name();

// sum_i x[i] * w[i]
double dot(std::span<const double> x, std::span<const double> w);

// sum_{i<j} w[i] w[j] log|x[i] - x[j]|.
// Precondition: all pairwise differences nonzero (caller checks).
double pairwise_log_energy(std::span<const double> x, std::span<const double> w);

// out[j] = sum_i w[i] * x[i]^j for j = 0..out.size()-1
void weighted_power_sums(std::span<const double> x, std::span<const double> w,
                         std::span<double> out);

namespace detail {
double dot_scalar(const double* x, const double* w, std::size_t n);
double pairwise_log_energy_scalar(const double* x, const double* w, std::size_t n);
void weighted_power_sums_scalar(const double* x, const double* w, std::size_t n,
                                double* out, std::size_t m);
#if defined(SUMRULE_HAVE_AVX2)
double dot_avx2(const double* x, const double* w, std::size_t n);
double pairwise_log_energy_avx2(const double* x, const double* w, std::size_t n);
void weighted_power_sums_avx2(const double* x, const double* w, std::size_t n,
                              double* out, std::size_t m);
#endif
}  // namespace detail

}  // namespace sr::kern
