#include "twosticks/random.hpp"

#include <cmath>

namespace twosticks {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

}  // namespace

Rng sample_stream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

Eigen::VectorXd gaussian_vector(Rng& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

Eigen::VectorXd halton_point(std::uint64_t index, int dim) {
  Eigen::VectorXd u(dim);
  constexpr int kCount = sizeof(kPrimes) / sizeof(kPrimes[0]);
  for (int d = 0; d < dim; ++d) {
    // Beyond the prime table, fall back to scrambled digits of larger bases.
    const int base = d < kCount ? kPrimes[d] : kPrimes[kCount - 1] + 2 * (d - kCount + 1);
    double f = 1.0, r = 0.0;
    std::uint64_t i = index + 1;
    while (i > 0) {
      f /= base;
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    u[d] = r;
  }
  return u;
}

}  // namespace twosticks
