#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twosticks/norm.hpp"
#include "twosticks/sticks.hpp"

namespace twosticks {

/// A finite set C of sites, measured in `norm`.
struct SiteSet {
  Norm norm;
  std::vector<Vector> sites;
};

struct NearestPoint {
  std::size_t index = 0;
  Vector site;
  double distance = 0.0;
  bool unique = true;  // no other site within 1e-12 (1 + distance)
};

/// Exhaustive scan. Throws InvalidInput for an empty set.
NearestPoint nearest_point(const SiteSet& sites, const Vector& x);

/// Rays of the distance function to C. Every stick starts at a site and has
/// length `length`; pairs satisfy the two sticks condition.
struct RayFamily {
  double length = 0.0;
  std::vector<Stick> sticks;
  std::vector<std::size_t> site_index;
  std::vector<std::string> notes;  // skipped queries and why
};

/// For each query x with nearest site c: the stick [c, c + L (x-c)/|x-c|].
/// Queries with a tied nearest site, or whose extended endpoint has a
/// different nearest site, are skipped with a note. Throws PreconditionError
/// ("query_in_set") for a query at distance 0 from C.
RayFamily build_ray_family(const SiteSet& sites, const std::vector<Vector>& queries, double length);

/// `count` Halton points in the box [lo, hi]^dim.
std::vector<Vector> halton_queries(int dim, std::size_t count, double lo, double hi, std::uint64_t offset = 0);

struct EndpointModulusRow {
  double delta0 = 0.0;
  double epsilon = 0.0;      // max |l1 - m1| over pairs with an intermediate gap <= delta0
  std::size_t pairs = 0;     // pairs contributing
};

/// Empirical modulus of continuity of the intermediate point -> endpoint map:
/// for each pair the smallest |l_u - m_v| over u, v in [t, 1] is found, and
/// epsilon(delta0) is the largest |l1 - m1| among pairs whose smallest gap is
/// at most delta0. Nondecreasing in delta0.
std::vector<EndpointModulusRow> endpoint_map_modulus(const Norm& norm, const RayFamily& family, double t,
                                                     const std::vector<double>& delta0_grid);

/// Number of pairs in the family that fail two_sticks_check.
std::size_t count_two_sticks_failures(const Norm& norm, const RayFamily& family);

}  // namespace twosticks
