#include <doctest.h>

#include <cmath>

#include "twosticks/atlas.hpp"
#include "twosticks/errors.hpp"
#include "twosticks/random.hpp"
#include "twosticks/sticks.hpp"

using namespace twosticks;

namespace {

Vector v1(double a) { return Vector{{a}}; }
Vector v2(double a, double b) { return Vector{{a, b}}; }

// Equal-length two-sticks pairs: rays of the distance function to random sites.
std::vector<std::pair<Stick, Stick>> atlas_pairs(const Norm& norm, int count, std::uint64_t seed) {
  std::vector<std::pair<Stick, Stick>> out;
  Rng rng = sample_stream(seed, 0);
  while (static_cast<int>(out.size()) < count) {
    SiteSet set{norm, {}};
    for (int k = 0; k < 6; ++k) set.sites.push_back(gaussian_vector(rng, norm.dim()) * 3.0);
    std::vector<Vector> q;
    for (int k = 0; k < 40; ++k) q.push_back(gaussian_vector(rng, norm.dim()) * 3.0);
    const RayFamily fam = build_ray_family(set, q, 0.8);
    for (std::size_t i = 0; i + 1 < fam.sticks.size() && static_cast<int>(out.size()) < count; i += 2) {
      out.emplace_back(fam.sticks[i], fam.sticks[i + 1]);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("two sticks predicate") {
  const Norm e = Norm::euclidean(2);
  // common start: always satisfied
  CHECK(two_sticks_check(e, Stick{v2(0, 0), v2(1, 0)}, Stick{v2(0, 0), v2(-3, 5)}));
  CHECK(two_sticks_check(Norm::euclidean(1), Stick{v1(0), v1(1)}, Stick{v1(0), v1(2)}));
  CHECK_FALSE(two_sticks_check(e, Stick{v2(0, 0), v2(1, 0)}, Stick{v2(1, 0), v2(0, 0)}));
  // order of the endpoints matters
  const Stick l{v2(0, 0), v2(1, 0)}, m{v2(1.5, 0), v2(3, 0)};
  CHECK_FALSE(two_sticks_check(e, l, m));
  CHECK(two_sticks_check(e, l, reversed(m)));
  // symmetric under exchanging the sticks
  CHECK(two_sticks_check(e, l, m) == two_sticks_check(e, m, l));
}

TEST_CASE("points along a stick") {
  const Stick l{v2(0, 0), v2(2, 0)};
  CHECK(point_at(l, 0.0) == l.start);
  CHECK(point_at(l, 1.0) == l.end);
  CHECK(point_at(l, 0.5) == v2(1, 0));
  // the reversed stick at 1-t is the stick at t
  for (double t : {0.0, 0.25, 0.7, 1.0}) CHECK((point_at(reversed(l), 1.0 - t) - point_at(l, t)).norm() < 1e-15);
  const Stick hat = sub_stick(l, 0.2, 1.0);
  CHECK((point_at(hat, (0.6 - 0.2) / 0.8) - point_at(l, 0.6)).norm() < 1e-15);
}

TEST_CASE("sub-stick closure and the flip chain on atlas pairs") {
  for (const Norm& n : {Norm::euclidean(2), Norm::p_norm(3.0, 3), Norm::p_norm(1.5, 2)}) {
    Rng rng = sample_stream(50, 0);
    for (const auto& [l, m] : atlas_pairs(n, 300, 51)) {
      REQUIRE(two_sticks_check(n, l, m));
      const double s = uniform(rng, 0.0, 1.0), t = uniform(rng, 0.0, 1.0);
      CHECK(two_sticks_check(n, sub_stick(l, 0.0, t), sub_stick(m, 0.0, s)));
      CHECK(two_sticks_check(n, reversed(l), reversed(m)));
      const FlipChainReport rep = flip_chain_verify(n, l, m, s, t);
      CHECK(rep.ok());
    }
  }
}

TEST_CASE("flip chain edge cases") {
  const Norm e = Norm::euclidean(2);
  const Stick l{v2(0, 0), v2(1, 0)}, m{v2(0, 0.1), v2(0.1, 1.095)};
  const Stick m_unit{m.start, m.start + (m.end - m.start) / (m.end - m.start).norm()};
  const FlipChainReport id = flip_chain_verify(e, l, m_unit, 1.0, 0.0);
  CHECK(id.stage[0]);
  CHECK(id.stage[4] == id.stage[0]);
  const FlipChainReport deg = flip_chain_verify(e, l, m_unit, 0.4, 0.4);
  CHECK(deg.degenerate);
  CHECK(deg.ok());
  CHECK_THROWS_AS(flip_chain_verify(e, l, Stick{v2(0, 0), v2(2, 0)}, 0.5, 0.5), PreconditionError);
  CHECK_THROWS_AS(flip_chain_verify(e, l, m_unit, 1.5, 0.5), PreconditionError);
}

TEST_CASE("euclidean monotonicity and interpolation") {
  const Stick l{v2(0, 0), v2(1, 0)};
  CHECK(euclid_monotonicity(l, l) == 0.0);
  CHECK(euclid_monotonicity(l, Stick{v2(0, 0), v2(0, 1)}) == 0.0);
  CHECK(euclid_interp_bound_residual(l, l, 0.3) == 0.0);
  CHECK_THROWS_AS(euclid_monotonicity(l, Stick{v2(1, 0), v2(0, 0)}), PreconditionError);

  const Norm e = Norm::euclidean(3);
  Rng rng = sample_stream(52, 0);
  for (const auto& [l2, m2] : atlas_pairs(e, 2000, 53)) {
    CHECK(euclid_monotonicity(l2, m2) >= -1e-12);
    for (double t : {0.0, 0.1, 0.5, 0.9, 1.0}) CHECK(euclid_interp_bound_residual(l2, m2, t) <= 1e-12);
    const double s = uniform(rng, 1e-3, 1.0), t = uniform(rng, 1e-3, s);
    CHECK(euclid_lipschitz_ratio(l2, m2, s, t) <= 1.0 + 1e-9);
  }
}

TEST_CASE("euclidean Lipschitz ratio special cases") {
  const Stick l{v2(0, 0), v2(1, 0)}, m{v2(0, 0.5), v2(0.6, 1.3)};
  CHECK(euclid_lipschitz_ratio(l, l, 0.5, 0.5) == 0.0);
  CHECK(euclid_lipschitz_ratio(l, m, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(euclid_lipschitz_ratio(l, m, 0.4, 0.5), PreconditionError);
  CHECK_THROWS_AS(euclid_lipschitz_ratio(l, m, 0.5, 0.0), PreconditionError);
}

TEST_CASE("without equal length there is no Lipschitz estimate") {
  const Stick l{v1(0), v1(1)}, m{v1(0), v1(2)};
  CHECK(two_sticks_check(Norm::euclidean(1), l, m));
  CHECK_THROWS_AS(euclid_lipschitz_ratio(l, m, 1.0, 0.5), PreconditionError);
  CHECK(std::isinf(euclid_lipschitz_ratio(l, m, 1.0, 0.5, false)));
}

TEST_CASE("Hölder ratios") {
  const Norm e = Norm::euclidean(2);
  const Stick l{v2(0, 0), v2(1, 0)};
  CHECK(holder_ratio(e, l, l, 0.5, 2.0, 2.0, 3.0) == 0.0);
  // scale invariance: the pair is normalized to unit length first
  const Norm p4 = Norm::p_norm(4.0, 2);
  const auto pairs = atlas_pairs(p4, 50, 54);
  const auto& [a, b] = pairs[7];
  const Stick a2{3.0 * a.start, 3.0 * a.end}, b2{3.0 * b.start, 3.0 * b.end};
  CHECK(holder_ratio(p4, a, b, 0.5, 2.0, 4.0, 100.0) == doctest::Approx(holder_ratio(p4, a2, b2, 0.5, 2.0, 4.0, 100.0)));
  CHECK_THROWS_AS(holder_ratio(p4, a, b, 0.0, 2.0, 4.0, 100.0), PreconditionError);
  CHECK_THROWS_AS(holder_ratio(p4, a, b, 0.5, 2.0, 4.0, 1e-9), PreconditionError);

  // Euclidean with p = q = 2: consistent with the Lipschitz bound 2/t
  for (const auto& [x, y] : atlas_pairs(e, 1000, 55)) {
    CHECK(holder_ratio(e, x, y, 0.5, 2.0, 2.0, 100.0) <= 1.0 + 1e-9);
  }
}

TEST_CASE("Hölder constant for p = 4 stabilizes") {
  const Norm p4 = Norm::p_norm(4.0, 3);
  const auto pairs = atlas_pairs(p4, 10000, 56);
  double sup_small = 0.0, sup_all = 0.0;
  Rng rng = sample_stream(57, 0);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double t = uniform(rng, 0.05, 1.0);
    const double c = holder_ratio(p4, pairs[k].first, pairs[k].second, t, 2.0, 4.0, 100.0);
    REQUIRE(std::isfinite(c));
    if (k < pairs.size() / 2) sup_small = std::max(sup_small, c);
    sup_all = std::max(sup_all, c);
  }
  CHECK(sup_all < 10.0);
  CHECK(sup_all <= 1.5 * sup_small);
}

TEST_CASE("special stick selection") {
  const Norm e = Norm::euclidean(2);
  const std::vector<Stick> sticks{Stick{v2(0, 0), v2(1, 0)}, Stick{v2(0, 0), v2(0, 1)}, Stick{v2(1, 1), v2(1.6, 1.8)}};
  CHECK(select_special_stick(e, {sticks[0]}, 0.1) == 0);
  CHECK(select_special_stick(e, sticks, 0.1) == 0);
  CHECK_THROWS_AS(select_special_stick(e, {}, 0.1), InvalidInput);

  const Norm p4 = Norm::p_norm(4.0, 2);
  const Stick axis{v2(0, 0), v2(1, 0)};
  const double c = std::pow(0.5, 0.25);
  const Stick diag{v2(0, 0), v2(c, c)};
  const double s_axis = modulus(p4, axis.direction(), 0.1).sigma;
  const double s_diag = modulus(p4, diag.direction(), 0.1).sigma;
  CHECK(s_axis != doctest::Approx(s_diag));
  CHECK(select_special_stick(p4, {axis, diag}, 0.1) == (s_diag > s_axis ? 1u : 0u));
}
