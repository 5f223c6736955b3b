#pragma once

#include <vector>

#include "twosticks/norm.hpp"

namespace twosticks {

/// The root r in [0,1] of (1-r)^p + (1+r)^p = 2 + eps, by bisection.
/// Requires p > 1 and 0 <= eps <= 2^p - 2.
double solve_g(double p, double eps);

struct SharpnessInstance {
  double p = 0.0;
  double delta = 0.0;
  Vector e;
  Vector e_bar;
  Vector m;
  double x_param = 0.0;
  double y_param = 0.0;

  double gap_norm() const;  // |e - e_bar|_p
  double m_norm() const;    // |m|_p
  /// min(|m + (e+e_bar)/2|, |-m + (e+e_bar)/2|) - 1; nonnegative up to rounding.
  double two_sticks_margin() const;
  /// max(| |e| - 1 |, | |e_bar| - 1 |)
  double unit_residual() const;
};

/// e = (d, x, -x), e_bar = (-d, x, -x), m = (0, y, y) with 1 = d^p + 2 x^p and
/// y = x g(2 d^p / (1 - d^p)). Requires p >= 2.
SharpnessInstance construct_pgt2(double p, double delta);

/// e = (x-d, x+d, 0), e_bar = (x+d, x-d, 0), m = (0, 0, y) with
/// d = x g(1/x^p - 2) and y = (1 - 2x^p)^(1/p). Requires 1 < p <= 2 and
/// 2^-p <= x^p <= 1/2.
SharpnessInstance construct_plt2(double p, double x_param);

/// 2/p for p >= 2, p/2 for p < 2.
double sharpness_exponent(double p);

struct SharpnessRow {
  double parameter = 0.0;  // delta for p >= 2, x for p < 2
  double gap_norm = 0.0;
  double m_norm = 0.0;
  double ratio = 0.0;      // gap_norm / m_norm^exponent
};

struct SharpnessCurve {
  double p = 0.0;
  double exponent = 0.0;
  std::vector<SharpnessRow> rows;
  double band_low = 0.0;
  double band_high = 0.0;

  double band_factor() const { return band_high / band_low; }
};

SharpnessCurve sharpness_curve(double p, const std::vector<double>& parameter_grid);

/// delta = 10^-2 .. 10^-5 for p >= 2; x^p = 1/2 - 10^-k, 2 <= k <= 6, for p < 2.
std::vector<double> default_sharpness_grid(double p, int points_per_decade = 4);

}  // namespace twosticks
