#include "sumrule/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sr::rng {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream_id) {
  state_ = mix64(mix64(seed) ^ mix64(stream_id * 0xA24BAED4963EE407ULL + 1));
}

std::uint64_t Stream::next_u64() {
  // splitmix64
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Stream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

Stream substream(std::uint64_t seed, std::uint32_t tag, std::uint64_t index) {
  return Stream(seed, (static_cast<std::uint64_t>(tag) << 48) ^ index);
}

// Wichura, Applied Statistics 37 (1988), algorithm AS241 (PPND16).
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p outside (0,1)");
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double normal(Stream& s) { return normal_quantile(s.uniform()); }

namespace {
double gamma_ge1(Stream& s, double shape) {
  // Marsaglia & Tsang (2000)
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(s);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = s.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}
}  // namespace

double gamma(Stream& s, double shape, double scale) {
  if (shape < 0.0 || scale <= 0.0)
    throw std::invalid_argument("gamma: invalid parameters");
  if (shape == 0.0) return 0.0;
  if (shape >= 1.0) return scale * gamma_ge1(s, shape);
  // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
  const double g = gamma_ge1(s, shape + 1.0);
  return scale * g * std::pow(s.uniform(), 1.0 / shape);
}

double beta(Stream& s, double a, double b) {
  const double x = gamma(s, a, 1.0);
  const double y = gamma(s, b, 1.0);
  return x / (x + y);
}

double beta_symm_interval(Stream& s, double p, double q) {
  // X ~ Beta(p,q), alpha = 1 - 2X has density prop. to (1-a)^(p-1)(1+a)^(q-1)
  return 1.0 - 2.0 * beta(s, p, q);
}

std::vector<double> dirichlet(std::uint64_t seed, std::size_t n, double concentration) {
  if (n == 0) throw std::invalid_argument("dirichlet: n must be positive");
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Stream s = substream(seed, /*tag=*/0x44u, i);
    w[i] = gamma(s, concentration, 1.0 / (concentration * static_cast<double>(n)));
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace sr::rng
