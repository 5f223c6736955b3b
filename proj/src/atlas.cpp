#include "twosticks/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "twosticks/errors.hpp"
#include "twosticks/random.hpp"

namespace twosticks {

namespace {

template <typename F>
double golden_min_value(F f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::min({fc, fd, f(lo), f(hi)});
}

}  // namespace

NearestPoint nearest_point(const SiteSet& set, const Vector& x) {
  if (set.sites.empty()) throw InvalidInput("site set is empty");
  check_vector(set.norm, x, "query");
  NearestPoint best;
  double second = std::numeric_limits<double>::infinity();
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < set.sites.size(); ++k) {
    const double d = set.norm(Vector(x - set.sites[k]));
    if (d < best.distance) {
      second = best.distance;
      best.distance = d;
      best.index = k;
    } else {
      second = std::min(second, d);
    }
  }
  best.site = set.sites[best.index];
  best.unique = second - best.distance > 1e-12 * (1.0 + best.distance);
  return best;
}

RayFamily build_ray_family(const SiteSet& set, const std::vector<Vector>& queries, double length) {
  if (!(length > 0.0)) throw InvalidInput("ray length must be positive");
  if (set.sites.empty()) throw InvalidInput("site set is empty");
  RayFamily fam;
  fam.length = length;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const NearestPoint np = nearest_point(set, queries[q]);
    if (np.distance < kZeroNorm) throw PreconditionError("query_in_set", "query " + std::to_string(q) + " lies in C");
    if (!np.unique) {
      fam.notes.push_back("query " + std::to_string(q) + ": nearest site not unique");
      continue;
    }
    const Vector end = np.site + (length / np.distance) * (queries[q] - np.site);
    const NearestPoint at_end = nearest_point(set, end);
    if (!at_end.unique || at_end.index != np.index) {
      fam.notes.push_back("query " + std::to_string(q) + ": extended endpoint leaves the nearest-site cell");
      continue;
    }
    fam.sticks.push_back(Stick{np.site, end});
    fam.site_index.push_back(np.index);
  }
  return fam;
}

std::vector<Vector> halton_queries(int dim, std::size_t count, double lo, double hi, std::uint64_t offset) {
  if (dim < 1 || !(hi > lo)) throw InvalidInput("bad query box");
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back((lo + (hi - lo) * halton_point(offset + k, dim).array()).matrix());
  }
  return out;
}

std::vector<EndpointModulusRow> endpoint_map_modulus(const Norm& norm, const RayFamily& family, double t,
                                                     const std::vector<double>& delta0_grid) {
  if (family.sticks.empty()) throw InvalidInput("family is empty");
  if (!(t > 0.0 && t <= 1.0)) throw PreconditionError("parameter_range", "need 0 < t <= 1");

  struct PairGap {
    double gap;
    double ends;
  };
  std::vector<PairGap> pairs;
  const auto& sticks = family.sticks;
  for (std::size_t i = 0; i < sticks.size(); ++i) {
    for (std::size_t j = i + 1; j < sticks.size(); ++j) {
      const Stick& l = sticks[i];
      const Stick& m = sticks[j];
      auto inner = [&](double u) {
        const Vector lu = point_at(l, u);
        return golden_min_value([&](double v) { return norm(Vector(lu - point_at(m, v))); }, t, 1.0, 1e-10);
      };
      const double g = golden_min_value(inner, t, 1.0, 1e-10);
      pairs.push_back(PairGap{g, norm(Vector(l.end - m.end))});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const PairGap& a, const PairGap& b) { return a.gap < b.gap; });
  std::vector<double> prefix(pairs.size());
  double run = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) prefix[k] = run = std::max(run, pairs[k].ends);

  std::vector<EndpointModulusRow> rows;
  for (double d0 : delta0_grid) {
    const auto it = std::upper_bound(pairs.begin(), pairs.end(), d0,
                                     [](double v, const PairGap& p) { return v < p.gap; });
    const auto n = static_cast<std::size_t>(it - pairs.begin());
    rows.push_back(EndpointModulusRow{d0, n ? prefix[n - 1] : 0.0, n});
  }
  return rows;
}

std::size_t count_two_sticks_failures(const Norm& norm, const RayFamily& family) {
  std::size_t fails = 0;
  for (std::size_t i = 0; i < family.sticks.size(); ++i) {
    for (std::size_t j = i + 1; j < family.sticks.size(); ++j) {
      if (!two_sticks_check(norm, family.sticks[i], family.sticks[j])) ++fails;
    }
  }
  return fails;
}

}  // namespace twosticks
