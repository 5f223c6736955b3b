#include "twosticks/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twosticks/errors.hpp"
#include "twosticks/scalar.hpp"

namespace twosticks {

namespace {

double pnorm(double p, const Vector& v) {
  double s = 0.0;
  for (double c : v) s += std::pow(std::abs(c), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

double solve_g(double p, double eps) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("solve_g needs p > 1");
  const double top = std::pow(2.0, p) - 2.0;
  if (!(eps >= 0.0) || eps > top * (1.0 + 1e-15)) throw InvalidInput("solve_g needs 0 <= eps <= 2^p - 2");
  if (eps == 0.0) return 0.0;
  if (eps >= top) return 1.0;
  // (1-r)^p + (1+r)^p - 2 = g(r) + g(-r) with g(z) = |1+z|^p - 1 - pz.
  auto f = [p](double r) { return power_remainder(p, r) + power_remainder(p, -r); };
  double lo = 0.0, hi = 1.0;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return f(hi) - eps < eps - f(lo) ? hi : lo;
    if (f(mid) < eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

double SharpnessInstance::gap_norm() const { return pnorm(p, Vector(e - e_bar)); }

double SharpnessInstance::m_norm() const { return pnorm(p, m); }

double SharpnessInstance::two_sticks_margin() const {
  const Vector mid = 0.5 * (e + e_bar);
  return std::min(pnorm(p, Vector(mid + m)), pnorm(p, Vector(mid - m))) - 1.0;
}

double SharpnessInstance::unit_residual() const {
  return std::max(std::abs(pnorm(p, e) - 1.0), std::abs(pnorm(p, e_bar) - 1.0));
}

SharpnessInstance construct_pgt2(double p, double delta) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidInput("construct_pgt2 needs p >= 2");
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  const double dp = std::pow(delta, p);
  if (!(dp < 1.0)) throw InvalidInput("delta too large");
  const double eps = 2.0 * dp / (1.0 - dp);
  if (eps > std::pow(2.0, p) - 2.0) throw InvalidInput("delta too large: eps exceeds 2^p - 2");
  SharpnessInstance s;
  s.p = p;
  s.delta = delta;
  s.x_param = std::pow((1.0 - dp) / 2.0, 1.0 / p);
  s.y_param = s.x_param * solve_g(p, eps);
  const double x = s.x_param, y = s.y_param;
  s.e = Vector{{delta, x, -x}};
  s.e_bar = Vector{{-delta, x, -x}};
  s.m = Vector{{0.0, y, y}};
  return s;
}

SharpnessInstance construct_plt2(double p, double x_param) {
  if (!(p > 1.0 && p <= 2.0)) throw InvalidInput("construct_plt2 needs 1 < p <= 2");
  const double xp = std::pow(x_param, p);
  if (!(x_param > 0.0) || xp < std::pow(2.0, -p) * (1.0 - 1e-15) || xp > 0.5 * (1.0 + 1e-15)) {
    throw InvalidInput("construct_plt2 needs 2^-p <= x^p <= 1/2");
  }
  SharpnessInstance s;
  s.p = p;
  s.x_param = x_param;
  const double eps = std::clamp(1.0 / xp - 2.0, 0.0, std::pow(2.0, p) - 2.0);
  s.delta = x_param * solve_g(p, eps);
  s.y_param = std::pow(std::max(0.0, 1.0 - 2.0 * xp), 1.0 / p);
  const double x = x_param, d = s.delta;
  s.e = Vector{{x - d, x + d, 0.0}};
  s.e_bar = Vector{{x + d, x - d, 0.0}};
  s.m = Vector{{0.0, 0.0, s.y_param}};
  return s;
}

double sharpness_exponent(double p) { return p >= 2.0 ? 2.0 / p : p / 2.0; }

SharpnessCurve sharpness_curve(double p, const std::vector<double>& grid) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("sharpness needs p > 1");
  if (grid.empty()) throw InvalidInput("sharpness grid is empty");
  SharpnessCurve c;
  c.p = p;
  c.exponent = sharpness_exponent(p);
  c.band_low = std::numeric_limits<double>::infinity();
  c.band_high = 0.0;
  for (double param : grid) {
    const SharpnessInstance s = p >= 2.0 ? construct_pgt2(p, param) : construct_plt2(p, param);
    SharpnessRow row{param, s.gap_norm(), s.m_norm(), 0.0};
    if (!(row.m_norm > 0.0)) throw InvalidInput("degenerate grid point: |m| = 0");
    row.ratio = row.gap_norm / std::pow(row.m_norm, c.exponent);
    c.band_low = std::min(c.band_low, row.ratio);
    c.band_high = std::max(c.band_high, row.ratio);
    c.rows.push_back(row);
  }
  return c;
}

std::vector<double> default_sharpness_grid(double p, int per_decade) {
  if (per_decade < 1) throw InvalidInput("points per decade must be positive");
  std::vector<double> grid;
  const int steps = (p >= 2.0 ? 3 : 4) * per_decade;
  for (int k = 0; k <= steps; ++k) {
    const double small = std::pow(10.0, -2.0 - static_cast<double>(k) / per_decade);
    grid.push_back(p >= 2.0 ? small : std::pow(0.5 - small, 1.0 / p));
  }
  return grid;
}

}  // namespace twosticks
