#include "twosticks/gap.hpp"

#include <cmath>

#include "twosticks/errors.hpp"
#include "twosticks/scalar.hpp"

namespace twosticks {

namespace {

// h(b, b+d) for a p-norm, with |b| close to 1 and d small.
//
// |b+d|^p = n0^p + p n0^(p-1) <d,N> + Phi, Phi = sum of coordinate remainders, so
// |b+d| = n0 (1+u)^(1/p) with u = (p n0^(p-1) <d,N> + Phi) / n0^p, and
// h = n0 [(1+u)^(1/p) - 1 - u/p] + Phi / (p n0^(p-1)).
double p_norm_gap_near(double p, const Vector& b, double n0, const Vector& normal, const Vector& d) {
  double phi = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) phi += linearization_remainder(p, b[i], d[i]);
  const double n0p1 = std::pow(n0, p - 1.0);
  const double u = (p * n0p1 * d.dot(normal) + phi) / (n0p1 * n0);
  return n0 * power_remainder(1.0 / p, u) + phi / (p * n0p1);
}

}  // namespace

double gap(const Norm& norm, const Vector& x, const Vector& y) {
  check_vector(norm, x, "x");
  check_vector(norm, y, "y");
  const double nx = norm(x);
  if (nx < kZeroNorm) return 0.0;

  const Vector normal = normal_map(norm, x);
  const double a = y.dot(normal);
  if (norm.kind() == NormKind::plugin || a <= 0.0) return norm(y) - a;

  // h(x,y) = a h(x/|x|, y/a): rescale so the base point is a unit vector and
  // y/a - x/|x| is the (possibly small) offset.
  const Vector b = x / nx;
  const Vector d = y / a - b;
  if (d.cwiseAbs().maxCoeff() > 0.5) return norm(y) - a;
  return a * p_norm_gap_near(*norm.exponent(), b, norm(b), normal, d);
}

double triangle_equality_residual(const Norm& norm, const Vector& x, const Vector& y) {
  const Vector s = x + y;
  if (is_zero(norm, s)) throw DomainError("triangle equality needs x + y != 0");
  const double rhs = norm(x) + norm(y) - gap(norm, s, x) - gap(norm, s, y);
  return std::abs(norm(s) - rhs);
}

double linearization_identity_residual(const Norm& norm, const Vector& x, const Vector& y) {
  if (is_zero(norm, x)) throw DomainError("linearization identity needs x != 0");
  check_vector(norm, y, "y");
  const double rhs = norm(x) + gap(norm, x, y) + (y - x).dot(normal_map(norm, x));
  return std::abs(norm(y) - rhs);
}

}  // namespace twosticks
