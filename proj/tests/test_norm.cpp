#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "twosticks/errors.hpp"
#include "twosticks/norm.hpp"
#include "twosticks/random.hpp"

using namespace twosticks;

TEST_CASE("construction and descriptors") {
  CHECK(Norm::euclidean(3).describe() == "euclidean");
  CHECK(Norm::p_norm(3.0, 2).describe() == "p:3");
  CHECK(Norm::p_norm(1.5, 2).describe() == "p:1.5");
  CHECK(*Norm::euclidean(2).exponent() == 2.0);
  CHECK_THROWS_AS(Norm::p_norm(1.0, 2), InvalidInput);
  CHECK_THROWS_AS(Norm::p_norm(INFINITY, 2), InvalidInput);
  CHECK_THROWS_AS(Norm::euclidean(0), InvalidInput);
  CHECK_THROWS_AS(Norm::plugin(2, nullptr), InvalidInput);
}

TEST_CASE("norm values") {
  const Norm e = Norm::euclidean(2);
  CHECK(e(Vector{{3.0, 4.0}}) == doctest::Approx(5.0));
  const Norm p3 = Norm::p_norm(3.0, 3);
  const Vector x{{1.0, -2.0, 0.5}};
  CHECK(p3(x) == doctest::Approx(static_cast<double>(oracle::pnorm(x, 3.0L))).epsilon(1e-15));
  // no overflow for huge coordinates
  CHECK(p3(Vector{{1e300, 1e300, 0.0}}) == doctest::Approx(std::cbrt(2.0) * 1e300));
  CHECK(p3(Vector::Zero(3)) == 0.0);
}

TEST_CASE("vector checks") {
  const Norm e = Norm::euclidean(2);
  CHECK_THROWS_AS(check_vector(e, Vector::Zero(3)), InvalidInput);
  CHECK_THROWS_AS(check_vector(e, Vector{{NAN, 1.0}}), InvalidInput);
  CHECK_THROWS_AS(normal_map(e, Vector::Zero(2)), DomainError);
  CHECK(is_zero(e, Vector::Zero(2)));
}

TEST_CASE("euclidean normal map is x / |x|") {
  const Norm e = Norm::euclidean(3);
  const Vector x{{1.0, 2.0, -2.0}};
  CHECK((normal_map(e, x) - x / 3.0).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("p = 3 normal map agrees with a finite difference oracle") {
  const Norm p3 = Norm::p_norm(3.0, 3);
  Rng rng = sample_stream(5, 0);
  for (int i = 0; i < 200; ++i) {
    const Vector x = gaussian_vector(rng, 3);
    const Vector fd = finite_diff_gradient(p3, x, 1e-6 * p3(x));
    CHECK((normal_map(p3, x) - fd).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((normal_map(p3, x) - oracle::pnormal(x, 3.0L)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("plug-in norm gradient by extrapolated differences") {
  // weighted Euclidean norm sqrt(x^2 + 4 y^2)
  const Norm w = Norm::plugin(2, [](const Vector& v) { return std::sqrt(v[0] * v[0] + 4.0 * v[1] * v[1]); }, "weighted");
  CHECK(w.describe() == "weighted");
  CHECK_FALSE(w.exponent().has_value());
  Rng rng = sample_stream(6, 0);
  for (int i = 0; i < 100; ++i) {
    const Vector x = gaussian_vector(rng, 2);
    const double n = w(x);
    const Vector exact{{x[0] / n, 4.0 * x[1] / n}};
    CHECK((normal_map(w, x) - exact).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("tangent decomposition") {
  const Norm p4 = Norm::p_norm(4.0, 3);
  Vector x{{1.0, 0.5, -0.25}};
  x /= p4(x);
  const Vector y{{0.3, -1.0, 2.0}};
  const TangentDecomposition d = tangent_decompose(p4, x, y);
  REQUIRE(d.x_perp.has_value());
  CHECK(std::abs(d.x_perp->dot(normal_map(p4, x))) < 1e-14);
  CHECK(p4(*d.x_perp) == doctest::Approx(1.0));
  CHECK((d.alpha * x + d.epsilon * *d.x_perp - y).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(d.epsilon >= 0.0);

  const TangentDecomposition par = tangent_decompose(p4, x, 2.0 * x);
  CHECK_FALSE(par.x_perp.has_value());
  CHECK(par.alpha == doctest::Approx(2.0));
  CHECK_THROWS_AS(tangent_decompose(p4, 2.0 * x, y), DomainError);
}

TEST_CASE("sampled norm axioms") {
  for (const Norm& n : {Norm::euclidean(3), Norm::p_norm(1.5, 4), Norm::p_norm(3.0, 2), Norm::p_norm(8.0, 5)}) {
    const NormValidationReport r = validate_norm(n, 2000, 17);
    CAPTURE(n.describe());
    CHECK(r.ok(1e-12));
  }
}
