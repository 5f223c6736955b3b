#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twosticks/norm.hpp"

namespace twosticks {

// ---------------------------------------------------------------------------
// Modulus of geometric convexity
// ---------------------------------------------------------------------------

struct ModulusOptions {
  int starts = 32;             // deterministic low-discrepancy starting directions
  int max_iterations = 600;    // projected-ascent iterations per start
  double kkt_tol = 1e-6;       // relative residual of N(x+y) - N(x) = alpha N(y)
  double tie_tol = 1e-9;       // first start within this of the best value wins
  bool grid_fallback = true;   // dense sphere grid for dim <= 3 when ascent is not converged
};

/// sigma(x,t) = max_{|y| <= t} h(x, x+y), with the maximizing y (which lies
/// on the sphere |y| = t) and the KKT data at it.
struct ModulusResult {
  double sigma = 0.0;
  double t = 0.0;
  Vector maximizer_y;
  Vector normal_at_y;
  double kkt_residual = 0.0;  // |g - alpha N(y)|_inf / |g|_inf, g = N(x+y) - N(x)
  double kkt_alpha = 0.0;
  bool converged = false;
  bool grid_refined = false;
  bool best_effort = false;   // dim > 3: multi-start only, no grid certificate
  int best_start = -1;
};

/// Throws DomainError for x = 0 and InvalidInput for t <= 0.
ModulusResult modulus(const Norm& norm, const Vector& x, double t, const ModulusOptions& opts = {});

// ---------------------------------------------------------------------------
// Sampled constants
// ---------------------------------------------------------------------------

enum class SamplingMode { full, tangent };

const char* to_string(SamplingMode mode);

struct Witness {
  std::string quantity;  // which estimate this pair realizes
  Vector x;
  Vector y;
  double ratio = 0.0;
};

/// Empirical constants. Infima (lambda_hat, a_hat) and suprema (t_hat, k_hat,
/// b_hat) over the sampled set, each with the pair attaining it.
struct ConstantsReport {
  std::string norm;
  SamplingMode mode = SamplingMode::full;
  std::optional<double> lambda_hat;
  std::optional<double> r;
  std::optional<double> t_hat;
  std::optional<double> doubling_radius;
  std::optional<double> k_hat;
  std::optional<double> balanced_radius;
  std::optional<double> a_hat;
  std::optional<double> p;
  std::optional<double> b_hat;
  std::optional<double> q;
  int samples = 0;
  int informative = 0;  // samples whose denominator cleared the floor
  std::uint64_t seed = 0;
  std::vector<Witness> worst_witnesses;

  /// Copy the estimates of `other` that are set into this report.
  void merge(const ConstantsReport& other);
};

/// inf h(x,x+2y)/h(x,x+y) over |y| <= r|x|; tangent mode restricts to <y,N(x)> = 0.
ConstantsReport estimate_lambda(const Norm& norm, double r, SamplingMode mode, int samples,
                                std::uint64_t seed);

/// sup h(x,x+2y)/h(x,x+y) over |y| <= r|x|.
ConstantsReport estimate_doubling(const Norm& norm, double r, SamplingMode mode, int samples,
                                  std::uint64_t seed);

/// sup h(x,x+y)/h(x,x-y) over |y| <= bound |x|.
ConstantsReport estimate_balanced(const Norm& norm, double bound, SamplingMode mode, int samples,
                                  std::uint64_t seed);

/// A-hat = inf (2 - |e+f|)/|e-f|^p over unit e != f and
/// B-hat = sup (|x+y| + |x-y| - 2)/|y|^q over unit x, y != 0. Requires 1 < q <= p.
ConstantsReport estimate_uniform_constants(const Norm& norm, double p, double q, int samples,
                                           std::uint64_t seed);

/// Geometric convexity at (r, lambda) implies it at (2r, 3 - 2/lambda).
std::pair<double, double> extend_constants(double r, double lambda);

struct ExtendedConstants {
  double r = 0.0;
  double lambda = 0.0;
  int doublings = 0;
};

/// Apply `extend_constants` until the radius reaches `target_r`.
ExtendedConstants extend_to_radius(double r, double lambda, double target_r);

/// max(0, h(x,z) - lambda/(lambda-2) h(z,x)) for |z-x| <= 2r|x|, where
/// (r, lambda) are geometric-convexity constants of the norm. h(0,.) = 0.
double duality_residual(const Norm& norm, const Vector& x, const Vector& z, double lambda, double r);

// ---------------------------------------------------------------------------
// One-variable p-power remainder bounds
// ---------------------------------------------------------------------------

/// f(x,y) = |x+y|^p - |x|^p - p y |x|^(p-1) sign(x) >= 0.
double onev_f(double p, double x, double y);

struct OnevScan {
  double p = 0.0;
  double inf_double_ratio = 0.0;   // inf g(2z)/g(z)
  double z_at_inf = 0.0;
  double sup_double_ratio = 0.0;   // sup g(2z)/g(z)
  double z_at_sup = 0.0;
  double sup_balance_ratio = 0.0;  // sup g(z)/g(-z)
  double z_at_balance = 0.0;
  // g(2z)/g(z) at the grid points of smallest and largest |z|, per sign.
  double near_zero_ratio_neg = 0.0, near_zero_ratio_pos = 0.0;
  double near_infinity_ratio_neg = 0.0, near_infinity_ratio_pos = 0.0;
  std::size_t points = 0;
};

/// +/- `count`/2 log-spaced magnitudes in [zmin, zmax].
std::vector<double> onev_grid(std::size_t count = 100000, double zmin = 1e-6, double zmax = 1e6);

/// Scan of g(z) = |1+z|^p - 1 - p z over a grid excluding 0.
OnevScan onev_scan(double p, const std::vector<double>& z_grid);

// ---------------------------------------------------------------------------
// From tangent-plane constants to full constants
// ---------------------------------------------------------------------------

/// Lipschitz constant (T^2 - 1)/2 of the normalized tangent profile on [0,2].
double lipschitz_from_doubling(double t_const);

/// Largest |alpha| for which the doubling and balanced transfer bounds apply.
double transfer_alpha_window(double t_const);

/// Lower bound on h(x,x+2y)/h(x,x+y) for y = alpha x + eps x_perp, |x| = 1.
double convexity_transfer_bound(double lambda, double lipschitz, double alpha);
/// Upper bound on h(x,x+2y)/h(x,x+y).
double doubling_transfer_bound(double t_const, double lipschitz, double alpha);
/// Upper bound on h(x,x+y)/h(x,x-y).
double balanced_transfer_bound(double k_const, double lipschitz, double alpha);

struct TangentConstants {
  double lambda = 0.0;  // tangent geometric convexity ...
  double r = 0.0;       // ... valid for |y| <= r|x|
  double t_const = 0.0;  // tangent doubling
  double k_const = 0.0;  // tangent balanced
  double radius = 0.0;   // tangent radius over which t_const and k_const were measured
};

struct TransferReport {
  double kappa = 0.0;
  double lipschitz = 0.0;
  double convexity_radius = 0.0;  // sampled |y| <= min(kappa, (1-2kappa) r) / 2
  double alpha_window = 0.0;
  double full_lambda_bound = 0.0;  // worst case of the convexity bound over |alpha| <= kappa
  int convexity_checked = 0;
  int doubling_checked = 0;
  int balanced_checked = 0;
  int violations = 0;
  std::vector<Witness> violation_witnesses;
  double worst_convexity_margin = 0.0;  // min (ratio - bound), relative
  double worst_doubling_margin = 0.0;   // min (bound - ratio), relative
  double worst_balanced_margin = 0.0;
};

/// Samples full-space ratios and checks them against the bounds predicted
/// from tangent-plane constants. Throws InvalidInput for kappa outside
/// (0, 1/4] or when the admissible window for |y| is empty.
TransferReport transfer_check(const Norm& norm, const TangentConstants& tangent, double kappa,
                              int samples, std::uint64_t seed, double tol = 1e-9);

}  // namespace twosticks
