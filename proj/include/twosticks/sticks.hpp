#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twosticks/moduli.hpp"
#include "twosticks/norm.hpp"
#include "twosticks/random.hpp"

namespace twosticks {

/// Directed segment from `start` (l0) to `end` (l1).
struct Stick {
  Vector start;
  Vector end;

  Vector direction() const { return end - start; }
};

double stick_length(const Norm& norm, const Stick& l);

/// |l1 - m0| >= |l1 - l0| and |m1 - l0| >= |m1 - m0|, each with 1e-12 slack.
bool two_sticks_check(const Norm& norm, const Stick& l, const Stick& m);

bool equal_length(const Norm& norm, const Stick& l, const Stick& m, double tol = 1e-9);

/// (1-t) l0 + t l1. Any real t is accepted.
Vector point_at(const Stick& l, double t);

/// [l_a, l_b]
Stick sub_stick(const Stick& l, double a, double b);

Stick reversed(const Stick& l);

struct FlipChainReport {
  bool degenerate = false;  // t == s: the stage (v) sticks have zero length
  // Stages (i)..(v): two sticks + equal length for
  // [l0,l1],[m0,m1]  [l1,l0],[m1,m0]  [l1,lt],[m1,mt]  [lt,l1],[mt,m1]  [lt,ls],[mt,ms]
  bool stage[5] = {false, false, false, false, false};
  double flip_first = 0.0;   // |m_s - l_t| - |m_s - m_t|
  double flip_second = 0.0;  // |l_s - m_t| - |l_s - l_t|

  bool ok() const;
};

/// Throws PreconditionError unless (l, m) satisfy two sticks and equal length
/// and 0 <= s, t <= 1.
FlipChainReport flip_chain_verify(const Norm& norm, const Stick& l, const Stick& m, double s, double t);

// Euclidean estimates. The norm is always the Euclidean one.

/// <l1 - m1, l0 - m0>
double euclid_monotonicity(const Stick& l, const Stick& m);

/// max(0, (1-t)^2 |l0-m0|^2 + t^2 |l1-m1|^2 - |lt-mt|^2)
double euclid_interp_bound_residual(const Stick& l, const Stick& m, double t);

/// t |l1 - m1| / (2 |l_s - m_t|) for 0 < t <= s <= 1. Returns 0 when l1 = m1
/// and +inf when only the denominator vanishes. Unequal lengths throw
/// PreconditionError unless `require_equal_length` is false.
double euclid_lipschitz_ratio(const Stick& l, const Stick& m, double s, double t,
                              bool require_equal_length = true);

/// Empirical C = t |l1 - m1| / |l_t - m_t|^(q/p), after scaling both sticks to
/// unit length. `holder_radius` bounds |l1 - m1| in unit-length scale.
double holder_ratio(const Norm& norm, const Stick& l, const Stick& m, double t, double q, double p,
                    double holder_radius);

/// Index of the stick whose unit direction maximizes modulus(norm, e, radius);
/// the first within a relative 1e-9 of the best wins.
std::size_t select_special_stick(const Norm& norm, const std::vector<Stick>& sticks, double radius,
                                 const ModulusOptions& opts = {});

// Strip confinement

struct StripOptions {
  std::optional<double> kappa;  // default 4/(rho - 3 delta)
  double tol = 1e-9;
  ModulusOptions modulus;
};

struct StripReport {
  double delta = 0.0;
  double rho = 0.0;
  double kappa = 0.0;
  double lambda = 0.0;
  double k_const = 0.0;
  double bound = 0.0;  // k_const lambda^2 / (lambda - 2) kappa delta
  double scale = 1.0;  // common stick length the configuration was divided by
  Vector ybar;
  Vector normal_ybar;
  double projection = 0.0;  // <l1 - m1, N(ybar)>
  double promise_lhs = 0.0;
  double promise_rhs = 0.0;
  double axya = 0.0;        // <ebar, N(ybar)>
  double sigma_e = 0.0;     // sigma(e, kappa delta)
  double sigma_ebar = 0.0;  // sigma(ebar, kappa delta)
  Vector lstar;
  Vector lambdastar;
  double tstar = 0.0;
  double star_gap = 0.0;        // |l* - lambda*|, at most 4 delta
  double star_clearance = 0.0;  // min(|l1 - l*|, |l0 - l*|), at least 4/kappa
  bool strip_ok = false;
  bool promise_ok = false;
  bool axya_ok = false;
  bool star_ok = false;
  bool passed = false;
};

/// Checks the strip confinement of l1 - m1 for a unit-length two-sticks pair
/// meeting a small ball, with m the special stick. Each failed hypothesis
/// raises PreconditionError naming it: equal_length, two_sticks, delta,
/// rho, near, notinb, kappa, bmax, lambda, k_const, eta.
StripReport strip_experiment(const Norm& norm, const Stick& l, const Stick& m, const Vector& x0, double delta,
                             double rho, double lambda, double k_const, double big_r,
                             const StripOptions& opts = {});

/// KLambda^2/(Lambda-2) kappa delta
double strip_bound(double lambda, double k_const, double kappa, double delta);

/// Closest point of the segment to x in the given norm.
Vector closest_point_on_stick(const Norm& norm, const Stick& l, const Vector& x);

struct StripConfiguration {
  Stick l;
  Stick m;
  Vector x0;
};

struct StripSamplerOptions {
  double delta = 0.0;
  double rho = 0.3;
  double eta_max = 0.2;  // largest perturbation of the second direction
  double margin = 1e-3;
  int max_attempts = 1000;
};

/// Random unit-length two-sticks pair through the ball B_delta(0) with all
/// four endpoints outside B_rho(0). Returns nullopt if every attempt failed.
std::optional<StripConfiguration> sample_strip_configuration(const Norm& norm, const StripSamplerOptions& opts,
                                                             Rng& rng);

/// Largest delta with strip_bound(lambda, k, 4/(rho - 3 delta), delta) = target.
double strip_delta_for_bound(double lambda, double k_const, double rho, double target);

}  // namespace twosticks
