#pragma once

#include <cstdint>
#include <vector>

// Deterministic, platform-independent random streams. Each coefficient index
// of a sampler gets its own substream keyed by (seed, tag, index) so that
// enlarging the matrix size preserves the randomness of shared indices.
namespace sr::rng {

std::uint64_t mix64(std::uint64_t z);

class Stream {
 public:
  Stream() : state_(0x853c49e6748fea9bULL) {}
  Stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  // uniform on the open interval (0,1)
  double uniform();

 private:
  std::uint64_t state_;
};

// substream key helper: tag identifies the variable family, index the slot
Stream substream(std::uint64_t seed, std::uint32_t tag, std::uint64_t index);

// standard normal via the AS241 inverse CDF (Wichura), |error| < 1e-15
double normal(Stream& s);
double normal_quantile(double p);

// Gamma(shape, scale); Marsaglia-Tsang squeeze for shape >= 1, boosted below.
// shape == 0 returns 0.
double gamma(Stream& s, double shape, double scale);

double beta(Stream& s, double a, double b);

// density proportional to (1-x)^(p-1) (1+x)^(q-1) on (-1,1)
double beta_symm_interval(Stream& s, double p, double q);

std::vector<double> dirichlet(std::uint64_t seed, std::size_t n, double concentration);

}  // namespace sr::rng
