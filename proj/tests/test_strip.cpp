#include <doctest.h>

#include <cmath>

#include "twosticks/errors.hpp"
#include "twosticks/moduli.hpp"
#include "twosticks/random.hpp"
#include "twosticks/sticks.hpp"

using namespace twosticks;

namespace {

Vector v2(double a, double b) { return Vector{{a, b}}; }

void order_by_modulus(const Norm& norm, Stick& l, Stick& m, double radius) {
  if (modulus(norm, l.direction(), radius).sigma > modulus(norm, m.direction(), radius).sigma) std::swap(l, m);
}

}  // namespace

TEST_CASE("strip width formula") {
  CHECK(strip_bound(4.0, 1.0, 10.0, 0.01) == doctest::Approx(16.0 / 2.0 * 0.1));
  CHECK(strip_bound(3.0, 2.0, 10.0, 0.02) == 2.0 * strip_bound(3.0, 2.0, 10.0, 0.01));
  const double delta = strip_delta_for_bound(2.5, 1.2, 0.3, 0.5);
  CHECK(strip_bound(2.5, 1.2, 4.0 / (0.3 - 3.0 * delta), delta) == doctest::Approx(0.5));
}

TEST_CASE("closest point on a stick") {
  const Norm e = Norm::euclidean(2);
  const Stick l{v2(-1, 0), v2(1, 0)};
  const Vector c = closest_point_on_stick(e, l, v2(0.3, 2));
  CHECK((c - v2(0.3, 0)).norm() < 1e-6);
  CHECK(e(Vector(c - v2(0.3, 2))) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(closest_point_on_stick(e, l, v2(5, 1)) == l.end);
  CHECK(closest_point_on_stick(e, l, v2(-5, 1)) == l.start);
}

TEST_CASE("coincident sticks sit in the strip") {
  const Norm e = Norm::euclidean(2);
  const Stick l{v2(-0.5, 0), v2(0.5, 0)};
  const double delta = 0.001, rho = 0.3;
  const StripReport r = strip_experiment(e, l, l, v2(0, 0), delta, rho, 3.0, 1.0, 1.0);
  CHECK(r.projection == 0.0);
  CHECK(r.passed);
  CHECK(r.star_ok);
  CHECK(r.bound == strip_bound(3.0, 1.0, r.kappa, delta));
  CHECK(r.kappa == doctest::Approx(4.0 / (rho - 3.0 * delta)));
  CHECK(std::abs(r.axya) <= r.bound + 1e-12);
}

TEST_CASE("hypotheses are named when they fail") {
  const Norm e = Norm::euclidean(2);
  const Stick l{v2(-0.5, 0), v2(0.5, 0)};
  auto failing = [&](const Stick& a, const Stick& b, double delta, double rho, double lam, double k, double big_r,
                     StripOptions opts = {}) {
    try {
      strip_experiment(e, a, b, v2(0, 0), delta, rho, lam, k, big_r, opts);
    } catch (const PreconditionError& err) {
      return err.hypothesis();
    }
    return std::string("none");
  };
  CHECK(failing(l, Stick{v2(0, 0), v2(2, 0)}, 0.001, 0.3, 3.0, 1.0, 1.0) == "equal_length");
  CHECK(failing(l, reversed(l), 0.001, 0.3, 3.0, 1.0, 1.0) == "two_sticks");
  CHECK(failing(l, l, 0.3, 0.95, 3.0, 1.0, 1.0) == "delta");
  CHECK(failing(l, l, 0.01, 0.02, 3.0, 1.0, 1.0) == "rho");
  CHECK(failing(l, l, 0.001, 0.3, 2.0, 1.0, 1.0) == "lambda");
  CHECK(failing(l, l, 0.001, 0.3, 3.0, 0.5, 1.0) == "k_const");
  CHECK(failing(l, l, 0.001, 0.6, 3.0, 1.0, 1.0) == "notinb");
  const Stick far{v2(-0.5, 0.5), v2(0.5, 0.5)};
  CHECK(failing(l, far, 0.001, 0.3, 3.0, 1.0, 1.0) == "near");
  StripOptions small_kappa;
  small_kappa.kappa = 1.0;
  CHECK(failing(l, l, 0.001, 0.3, 3.0, 1.0, 1.0, small_kappa) == "kappa");
  CHECK(failing(l, l, 0.01, 0.3, 3.0, 1.0, 1.0) == "eta");

  // bmax: for p = 4 the modulus depends on the direction
  const Norm p4 = Norm::p_norm(4.0, 2);
  const Stick axis{v2(-0.5, 0), v2(0.5, 0)};
  Vector dir = v2(std::cos(1e-3), std::sin(1e-3));
  dir /= p4(dir);
  const Stick tilted{axis.start, axis.start + dir};
  const double radius = 4.0 / (0.3 - 0.003) * 0.001;
  Stick a = axis, b = tilted;
  order_by_modulus(p4, a, b, radius);
  auto fails_p4 = [&](const Stick& s, const Stick& t) {
    try {
      strip_experiment(p4, s, t, v2(0, 0), 0.001, 0.3, 3.0, 1.0, 10.0);
    } catch (const PreconditionError& err) {
      return err.hypothesis();
    }
    return std::string("none");
  };
  CHECK(fails_p4(b, a) == "bmax");
  CHECK(fails_p4(a, b) == "none");
}

TEST_CASE("sampled configurations satisfy every hypothesis") {
  for (const Norm& n : {Norm::euclidean(2), Norm::p_norm(3.0, 2), Norm::p_norm(4.0, 3)}) {
    StripSamplerOptions so;
    so.delta = 0.002;
    so.rho = 0.3;
    int made = 0;
    for (int i = 0; i < 50; ++i) {
      Rng rng = sample_stream(60, static_cast<std::uint64_t>(i));
      auto cfg = sample_strip_configuration(n, so, rng);
      if (!cfg) continue;
      ++made;
      CHECK(two_sticks_check(n, cfg->l, cfg->m));
      CHECK(equal_length(n, cfg->l, cfg->m));
      CHECK(stick_length(n, cfg->l) == doctest::Approx(1.0));
      for (const Vector& p : {cfg->l.start, cfg->l.end, cfg->m.start, cfg->m.end}) CHECK(n(p) > so.rho);
      CHECK(n(closest_point_on_stick(n, cfg->m, cfg->x0)) <= so.delta);
    }
    CHECK(made >= 40);
  }
}

TEST_CASE("euclidean strip experiment with extended constants") {
  const Norm e = Norm::euclidean(2);
  const double lam0 = *estimate_lambda(e, 0.25, SamplingMode::full, 20000, 61).lambda_hat;
  const double lam = extend_to_radius(0.25, lam0, 1.0).lambda;
  const double k = std::max(1.0, *estimate_balanced(e, 1.0, SamplingMode::tangent, 20000, 62).k_hat);
  StripSamplerOptions so;
  so.rho = 0.3;
  so.delta = strip_delta_for_bound(lam, k, so.rho, 0.5);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng = sample_stream(63, static_cast<std::uint64_t>(i));
    auto cfg = sample_strip_configuration(e, so, rng);
    REQUIRE(cfg);
    Stick l = cfg->l, m = cfg->m;
    order_by_modulus(e, l, m, 4.0 / (so.rho - 3.0 * so.delta) * so.delta);
    const StripReport r = strip_experiment(e, l, m, cfg->x0, so.delta, so.rho, lam, k, 1.0);
    CHECK(r.passed);
    CHECK(r.axya_ok);
    CHECK(r.star_ok);
    CHECK(r.bound == doctest::Approx(0.5));
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("scaled configurations are normalized") {
  const Norm e = Norm::euclidean(2);
  const Stick l{v2(-1, 0), v2(1, 0)};
  const StripReport r = strip_experiment(e, l, l, v2(0, 0), 0.002, 0.6, 3.0, 1.0, 1.0);
  CHECK(r.scale == doctest::Approx(2.0));
  CHECK(r.delta == doctest::Approx(0.001));
  CHECK(r.rho == doctest::Approx(0.3));
}
