#include "sumrule/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sr::kern {

namespace detail {

double dot_scalar(const double* x, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * w[i];
  return s;
}

double pairwise_log_energy_scalar(const double* x, const double* w, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = i + 1; j < n; ++j)
      acc += w[j] * std::log(std::fabs(x[j] - x[i]));
    total += w[i] * acc;
  }
  return total;
}

void weighted_power_sums_scalar(const double* x, const double* w, std::size_t n,
                                double* out, std::size_t m) {
  for (std::size_t j = 0; j < m; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = w[i];
    for (std::size_t j = 0; j < m; ++j) {
      out[j] += p;
      p *= x[i];
    }
  }
}

}  // namespace detail

namespace {

struct Vtable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*energy)(const double*, const double*, std::size_t);
  void (*psums)(const double*, const double*, std::size_t, double*, std::size_t);
};

constexpr Vtable kScalar{detail::dot_scalar, detail::pairwise_log_energy_scalar,
                         detail::weighted_power_sums_scalar};
#if defined(SUMRULE_HAVE_AVX2)
constexpr Vtable kAvx2{detail::dot_avx2, detail::pairwise_log_energy_avx2,
                       detail::weighted_power_sums_avx2};
#endif

bool cpu_has_avx2() {
#if defined(SUMRULE_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend g_backend = Backend::Auto;
const Vtable* g_active = nullptr;

const Vtable* resolve(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &kScalar;
    case Backend::Avx2:
#if defined(SUMRULE_HAVE_AVX2)
      if (cpu_has_avx2()) return &kAvx2;
#endif
      throw std::runtime_error("kern: AVX2 backend requested but not available");
    case Backend::Auto:
    default:
#if defined(SUMRULE_HAVE_AVX2)
      if (cpu_has_avx2() && std::getenv("SUMRULE_FORCE_SCALAR") == nullptr)
        return &kAvx2;
#endif
      return &kScalar;
  }
}

const Vtable* active() {
  if (g_active == nullptr) g_active = resolve(g_backend);
  return g_active;
}

}  // namespace

void set_backend(Backend b) {
  g_active = resolve(b);
  g_backend = b;
}

Backend active_backend() {
  const Vtable* v = active();
#if defined(SUMRULE_HAVE_AVX2)
  if (v == &kAvx2) return Backend::Avx2;
#endif
  (void)v;
  return Backend::Scalar;
}

bool avx2_available() { return cpu_has_avx2(); }

std::string backend_name() {
  return active_backend() == Backend::Avx2 ? "avx2" : "scalar";
}

double dot(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) throw std::invalid_argument("kern::dot: size mismatch");
  return active()->dot(x.data(), w.data(), x.size());
}

double pairwise_log_energy(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size())
    throw std::invalid_argument("kern::pairwise_log_energy: size mismatch");
  return active()->energy(x.data(), w.data(), x.size());
}

void weighted_power_sums(std::span<const double> x, std::span<const double> w,
                         std::span<double> out) {
  if (x.size() != w.size())
    throw std::invalid_argument("kern::weighted_power_sums: size mismatch");
  active()->psums(x.data(), w.data(), x.size(), out.data(), out.size());
}

}  // namespace sr::kern
