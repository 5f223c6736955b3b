#include "twosticks/sticks.hpp"

#include <cmath>
#include <limits>

#include "twosticks/errors.hpp"

namespace twosticks {

namespace {

constexpr double kSlack = 1e-12;

bool two_sticks_euclidean(const Stick& l, const Stick& m) {
  return (l.end - m.start).norm() >= (l.end - l.start).norm() - kSlack &&
         (m.end - l.start).norm() >= (m.end - m.start).norm() - kSlack;
}

bool ts_and_equal(const Norm& norm, const Stick& l, const Stick& m) {
  return two_sticks_check(norm, l, m) && equal_length(norm, l, m);
}

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("parameter_range", std::string(what) + " must lie in [0,1]");
}

}  // namespace

double stick_length(const Norm& norm, const Stick& l) { return norm(l.direction()); }

bool two_sticks_check(const Norm& norm, const Stick& l, const Stick& m) {
  check_vector(norm, l.start, "l.start");
  check_vector(norm, l.end, "l.end");
  check_vector(norm, m.start, "m.start");
  check_vector(norm, m.end, "m.end");
  return norm(Vector(l.end - m.start)) >= norm(Vector(l.end - l.start)) - kSlack &&
         norm(Vector(m.end - l.start)) >= norm(Vector(m.end - m.start)) - kSlack;
}

bool equal_length(const Norm& norm, const Stick& l, const Stick& m, double tol) {
  const double a = stick_length(norm, l), b = stick_length(norm, m);
  return std::abs(a - b) <= tol * (1.0 + std::max(a, b));
}

Vector point_at(const Stick& l, double t) { return (1.0 - t) * l.start + t * l.end; }

Stick sub_stick(const Stick& l, double a, double b) { return Stick{point_at(l, a), point_at(l, b)}; }

Stick reversed(const Stick& l) { return Stick{l.end, l.start}; }

bool FlipChainReport::ok() const {
  for (int k = 0; k < 4; ++k) {
    if (!stage[k]) return false;
  }
  return (degenerate || stage[4]) && flip_first >= -kSlack && flip_second >= -kSlack;
}

FlipChainReport flip_chain_verify(const Norm& norm, const Stick& l, const Stick& m, double s, double t) {
  require_unit_interval(s, "s");
  require_unit_interval(t, "t");
  if (!two_sticks_check(norm, l, m)) throw PreconditionError("two_sticks", "pair violates the two sticks condition");
  if (!equal_length(norm, l, m)) throw PreconditionError("equal_length", "sticks differ in length");

  FlipChainReport rep;
  rep.degenerate = s == t;
  rep.stage[0] = ts_and_equal(norm, l, m);
  rep.stage[1] = ts_and_equal(norm, reversed(l), reversed(m));
  rep.stage[2] = ts_and_equal(norm, sub_stick(l, 1.0, t), sub_stick(m, 1.0, t));
  rep.stage[3] = ts_and_equal(norm, sub_stick(l, t, 1.0), sub_stick(m, t, 1.0));
  rep.stage[4] = ts_and_equal(norm, sub_stick(l, t, s), sub_stick(m, t, s));

  const Vector ls = point_at(l, s), lt = point_at(l, t), ms = point_at(m, s), mt = point_at(m, t);
  rep.flip_first = norm(Vector(ms - lt)) - norm(Vector(ms - mt));
  rep.flip_second = norm(Vector(ls - mt)) - norm(Vector(ls - lt));
  return rep;
}

double euclid_monotonicity(const Stick& l, const Stick& m) {
  if (!two_sticks_euclidean(l, m)) throw PreconditionError("two_sticks", "pair violates the Euclidean two sticks condition");
  return (l.end - m.end).dot(l.start - m.start);
}

double euclid_interp_bound_residual(const Stick& l, const Stick& m, double t) {
  if (!two_sticks_euclidean(l, m)) throw PreconditionError("two_sticks", "pair violates the Euclidean two sticks condition");
  const double lhs = (1.0 - t) * (1.0 - t) * (l.start - m.start).squaredNorm() + t * t * (l.end - m.end).squaredNorm();
  const double rhs = (point_at(l, t) - point_at(m, t)).squaredNorm();
  return std::max(0.0, lhs - rhs);
}

double euclid_lipschitz_ratio(const Stick& l, const Stick& m, double s, double t, bool require_equal_length) {
  if (!(t > 0.0 && t <= s && s <= 1.0)) throw PreconditionError("parameter_range", "need 0 < t <= s <= 1");
  if (require_equal_length) {
    if (!two_sticks_euclidean(l, m)) throw PreconditionError("two_sticks", "pair violates the Euclidean two sticks condition");
    const double a = (l.end - l.start).norm(), b = (m.end - m.start).norm();
    if (std::abs(a - b) > 1e-9 * (1.0 + std::max(a, b))) throw PreconditionError("equal_length", "sticks differ in length");
  }
  const double num = t * (l.end - m.end).norm();
  if (num == 0.0) return 0.0;
  const double den = 2.0 * (point_at(l, s) - point_at(m, t)).norm();
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

double holder_ratio(const Norm& norm, const Stick& l, const Stick& m, double t, double q, double p,
                    double holder_radius) {
  if (!(t > 0.0 && t <= 1.0)) throw PreconditionError("parameter_range", "need 0 < t <= 1");
  if (!(q > 1.0 && q <= p)) throw InvalidInput("holder_ratio needs 1 < q <= p");
  if (!two_sticks_check(norm, l, m)) throw PreconditionError("two_sticks", "pair violates the two sticks condition");
  if (!equal_length(norm, l, m)) throw PreconditionError("equal_length", "sticks differ in length");
  const double len = stick_length(norm, l);
  if (len < 1e-12) throw PreconditionError("length", "degenerate stick");
  const double ends = norm(Vector(l.end - m.end)) / len;
  if (ends > holder_radius * (1.0 + 1e-12)) throw PreconditionError("holder_radius", "|l1 - m1| exceeds the radius");
  if (ends == 0.0) return 0.0;
  const double mid = norm(Vector(point_at(l, t) - point_at(m, t))) / len;
  if (mid == 0.0) return std::numeric_limits<double>::infinity();
  return t * ends / std::pow(mid, q / p);
}

std::size_t select_special_stick(const Norm& norm, const std::vector<Stick>& sticks, double radius,
                                 const ModulusOptions& opts) {
  if (sticks.empty()) throw InvalidInput("select_special_stick needs at least one stick");
  std::vector<double> sig;
  sig.reserve(sticks.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const Stick& s : sticks) {
    const Vector d = s.direction();
    const double len = norm(d);
    if (len < 1e-12) throw PreconditionError("length", "degenerate stick");
    sig.push_back(modulus(norm, d / len, radius, opts).sigma);
    best = std::max(best, sig.back());
  }
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (sig[k] >= best - 1e-9 * std::abs(best)) return k;
  }
  return 0;
}

}  // namespace twosticks
