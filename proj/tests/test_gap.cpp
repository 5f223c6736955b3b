#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "twosticks/errors.hpp"
#include "twosticks/gap.hpp"
#include "twosticks/random.hpp"

using namespace twosticks;

namespace {

std::vector<Norm> norms(int dim) {
  return {Norm::euclidean(dim), Norm::p_norm(1.5, dim), Norm::p_norm(3.0, dim), Norm::p_norm(4.0, dim)};
}

}  // namespace

TEST_CASE("gap at the origin and on the ray") {
  const Norm p3 = Norm::p_norm(3.0, 2);
  const Vector x{{0.4, -1.2}};
  CHECK(gap(p3, Vector::Zero(2), x) == 0.0);
  CHECK(std::abs(gap(p3, x, 2.5 * x)) < 1e-15);
  CHECK(std::abs(gap(p3, x, x)) < 1e-15);
  // negative multiples: |y| - <y, N(x)> = 2|y|
  CHECK(gap(p3, x, -x) == doctest::Approx(2.0 * p3(x)));
}

TEST_CASE("gap agrees with a long double direct evaluation") {
  Rng rng = sample_stream(21, 0);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const Norm n = Norm::p_norm(p, 3);
    for (int i = 0; i < 500; ++i) {
      const Vector x = gaussian_vector(rng, 3);
      const Vector y = gaussian_vector(rng, 3);
      const long double ref = oracle::gap(x, y, p);
      CHECK(std::abs(gap(n, x, y) - static_cast<double>(ref)) <= 1e-13 * (1.0 + p * std::abs(static_cast<double>(ref))) + 1e-14 * n(y));
    }
  }
}

TEST_CASE("euclidean gap keeps relative accuracy for small offsets") {
  const Norm e = Norm::euclidean(2);
  const Vector x{{1.0, 0.0}};
  for (double s : {1e-2, 1e-4, 1e-6, 1e-8}) {
    for (double phi : {0.3, 1.2, 2.0, 3.0}) {
      const double a = s * std::cos(phi), b = s * std::sin(phi);
      const double ref = static_cast<double>(oracle::euclid_gap_e1(a, b));
      CAPTURE(s);
      CAPTURE(phi);
      CHECK(gap(e, x, Vector{{1.0 + a, b}}) == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("p-norm gap keeps relative accuracy for small offsets") {
  // scaling: h(x, x + s v) ~ s^2 C for small s, so ratios across scales are stable
  const Norm p4 = Norm::p_norm(4.0, 3);
  const Vector x{{0.7, -0.2, 0.5}};
  const Vector v{{0.1, 0.9, -0.3}};
  const double base = gap(p4, x, x + 1e-3 * v) / 1e-6;
  for (double s : {1e-4, 1e-5, 1e-6, 1e-7}) {
    CHECK(gap(p4, x, x + s * v) / (s * s) == doctest::Approx(base).epsilon(2e-3));
  }
}

TEST_CASE("gap is nonnegative and positively homogeneous") {
  Rng rng = sample_stream(22, 0);
  for (const Norm& n : norms(4)) {
    for (int i = 0; i < 500; ++i) {
      const Vector x = gaussian_vector(rng, 4);
      const Vector y = gaussian_vector(rng, 4);
      const double h = gap(n, x, y);
      CHECK(h >= -1e-15 * n(y));
      const double t = log_uniform(rng, 1e-3, 1e3);
      CHECK(gap(n, t * x, y) == doctest::Approx(h).epsilon(1e-12).scale(n(y)));
      CHECK(gap(n, x, t * y) == doctest::Approx(t * h).epsilon(1e-12).scale(t * n(y)));
    }
  }
}

TEST_CASE("triangle equality and linearization identity") {
  Rng rng = sample_stream(23, 0);
  for (const Norm& n : norms(3)) {
    for (int i = 0; i < 2000; ++i) {
      const Vector x = gaussian_vector(rng, 3) * log_uniform(rng, 1e-2, 1e2);
      const Vector y = gaussian_vector(rng, 3) * log_uniform(rng, 1e-2, 1e2);
      const double scale = n(x) + n(y);
      CHECK(triangle_equality_residual(n, x, y) <= 1e-12 * scale);
      CHECK(linearization_identity_residual(n, x, y) <= 1e-12 * scale);
    }
  }
  const Norm e = Norm::euclidean(2);
  const Vector x{{1.0, 2.0}};
  CHECK_THROWS_AS(triangle_equality_residual(e, x, -x), DomainError);
  CHECK_THROWS_AS(linearization_identity_residual(e, Vector::Zero(2), x), DomainError);
}

TEST_CASE("plug-in norms use the direct formula") {
  const Norm w = Norm::plugin(2, [](const Vector& v) { return std::sqrt(v[0] * v[0] + 4.0 * v[1] * v[1]); });
  const Vector x{{1.0, 0.5}}, y{{-0.3, 2.0}};
  const double n = w(x);
  const double ref = w(y) - (y[0] * x[0] + 4.0 * y[1] * x[1]) / n;
  CHECK(gap(w, x, y) == doctest::Approx(ref).epsilon(1e-8));
}
