#include "twosticks/scalar.hpp"

#include <cmath>

namespace twosticks {

double power_remainder(double p, double z) {
  if (p == 2.0) return z * z;
  if (std::abs(z) < 0.5) {
    // sum_{k>=2} binom(p,k) z^k
    double coeff = p * (p - 1.0) / 2.0;
    double zk = z * z;
    double sum = coeff * zk;
    for (int k = 3; k < 200; ++k) {
      coeff *= (p - k + 1.0) / k;
      zk *= z;
      const double term = coeff * zk;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  if (z > -1.0) return std::expm1(p * std::log1p(z)) - p * z;
  return std::pow(std::abs(1.0 + z), p) - 1.0 - p * z;
}

}  // namespace twosticks

namespace twosticks {

double linearization_remainder(double p, double x, double y) {
  if (x == 0.0) return std::pow(std::abs(y), p);
  const double z = y / x;
  if (std::abs(z) > 1e8) {
    return std::pow(std::abs(x + y), p) - std::pow(std::abs(x), p) -
           p * y * std::copysign(std::pow(std::abs(x), p - 1.0), x);
  }
  return std::pow(std::abs(x), p) * power_remainder(p, z);
}

}  // namespace twosticks
