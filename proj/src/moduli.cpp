#include "twosticks/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "twosticks/errors.hpp"
#include "twosticks/gap.hpp"
#include "twosticks/random.hpp"
#include "twosticks/scalar.hpp"

namespace twosticks {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// modulus

struct AscentResult {
  Vector y;
  double value = 0.0;
  double kkt_residual = kInf;
  double kkt_alpha = 0.0;
};

class ModulusProblem {
 public:
  ModulusProblem(const Norm& norm, const Vector& x, double t)
      : norm_(norm), x_(x), nx_(normal_map(norm, x)), t_(t) {}

  double value(const Vector& y) const { return gap(norm_, x_, x_ + y); }

  Vector retract(const Vector& y) const { return y * (t_ / norm_(y)); }

  // g = N(x+y) - N(x), the gradient of y -> h(x, x+y). Zero when x+y = 0.
  Vector gradient(const Vector& y) const {
    const Vector s = x_ + y;
    if (norm_(s) < kZeroNorm) return Vector::Zero(y.size());
    return normal_map(norm_, s) - nx_;
  }

  void fill_kkt(AscentResult& r) const {
    const Vector g = gradient(r.y);
    const Vector n = normal_map(norm_, r.y);
    const double gmax = g.cwiseAbs().maxCoeff();
    r.kkt_alpha = g.dot(n) / n.dot(n);
    r.kkt_residual = gmax > 0.0 ? (g - r.kkt_alpha * n).cwiseAbs().maxCoeff() / gmax : kInf;
  }

  AscentResult ascend(const Vector& start, const ModulusOptions& opts) const {
    AscentResult r;
    r.y = retract(start);
    r.value = value(r.y);
    double len = 0.1 * t_;
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Vector g = gradient(r.y);
      const Vector n = normal_map(norm_, r.y);
      const Vector v = g - (g.dot(n) / n.dot(n)) * n;
      const double vnorm = v.norm();
      const double gnorm = g.norm();
      if (gnorm == 0.0 || vnorm <= 1e-3 * opts.kkt_tol * gnorm) break;
      const Vector dir = v / vnorm;
      bool moved = false;
      while (len > 1e-16 * t_) {
        const Vector cand = retract(r.y + len * dir);
        const double f = value(cand);
        if (f > r.value + 1e-4 * len * vnorm) {
          r.y = cand;
          r.value = f;
          len = std::min(2.0 * len, t_);
          moved = true;
          break;
        }
        len *= 0.5;
      }
      if (!moved) break;
    }
    fill_kkt(r);
    return r;
  }

  // Dense sphere grid, dim 2 or 3.
  Vector grid_best() const {
    const int n = static_cast<int>(x_.size());
    Vector best;
    double best_value = -kInf;
    auto consider = [&](const Vector& dir) {
      const Vector y = retract(dir);
      const double f = value(y);
      if (f > best_value) {
        best_value = f;
        best = y;
      }
    };
    if (n == 2) {
      constexpr int kSteps = 7200;
      for (int k = 0; k < kSteps; ++k) {
        const double a = 2.0 * std::numbers::pi * k / kSteps;
        consider(Vector{{std::cos(a), std::sin(a)}});
      }
    } else {
      constexpr int kPoints = 40000;
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < kPoints; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / kPoints;
        const double rad = std::sqrt(1.0 - z * z);
        const double a = golden * k;
        consider(Vector{{rad * std::cos(a), rad * std::sin(a), z}});
      }
    }
    return best;
  }

 private:
  const Norm& norm_;
  const Vector& x_;
  Vector nx_;
  double t_;
};

Vector start_direction(int k, int starts, int dim) {
  if (dim == 2) {
    const double a = 2.0 * std::numbers::pi * (k + 0.5) / starts;
    return Vector{{std::cos(a), std::sin(a)}};
  }
  Vector v = 2.0 * halton_point(static_cast<std::uint64_t>(k), dim).array() - 1.0;
  if (v.cwiseAbs().maxCoeff() == 0.0) v[0] = 1.0;
  return v;
}

bool kkt_ok(const AscentResult& r, const ModulusOptions& opts) {
  return r.kkt_residual <= opts.kkt_tol && r.kkt_alpha > 0.0;
}

// ---------------------------------------------------------------------------
// sampling helpers

Vector random_unit(const Norm& norm, Rng& rng) {
  for (;;) {
    const Vector v = gaussian_vector(rng, norm.dim());
    const double n = norm(v);
    if (n > 1e-8) return v / n;
  }
}

// Unit vector in the tangent plane {<v, N(x)> = 0} at the unit vector x.
Vector random_tangent_unit(const Norm& norm, const Vector& x, Rng& rng) {
  for (;;) {
    const TangentDecomposition dec = tangent_decompose(norm, x, gaussian_vector(rng, norm.dim()));
    if (dec.x_perp) return *dec.x_perp;
  }
}

// y with |y| = s: tangent mode uses a tangent direction; full mode rotates
// from x through a random tangent direction by an angle uniform in [0, pi],
// so near-parallel y are represented in every dimension.
Vector sample_offset(const Norm& norm, const Vector& x, SamplingMode mode, double s, Rng& rng) {
  if (norm.dim() == 1) {
    if (mode == SamplingMode::tangent) return Vector::Zero(1);
    const Vector dir = uniform(rng, 0.0, 1.0) < 0.5 ? Vector(x) : Vector(-x);
    return s * dir;
  }
  const Vector v = random_tangent_unit(norm, x, rng);
  Vector dir = v;
  if (mode == SamplingMode::full) {
    const double phi = uniform(rng, 0.0, std::numbers::pi);
    dir = std::cos(phi) * x + std::sin(phi) * v;
  }
  return dir * (s / norm(dir));
}

double ratio_floor(const Norm& norm, const Vector& x) { return 1e-12 * (1.0 + norm(x)); }

struct Extremum {
  bool seen = false;
  double value = 0.0;
  Vector x, y;

  void offer_min(double v, const Vector& xs, const Vector& ys) {
    if (!seen || v < value) set(v, xs, ys);
  }
  void offer_max(double v, const Vector& xs, const Vector& ys) {
    if (!seen || v > value) set(v, xs, ys);
  }
  void set(double v, const Vector& xs, const Vector& ys) {
    seen = true;
    value = v;
    x = xs;
    y = ys;
  }
  Witness witness(std::string quantity) const { return Witness{std::move(quantity), x, y, value}; }
};

enum class RatioKind { doubling_ratio, balance_ratio };

// Runs the common sampling loop; returns the extremum of the requested kind.
Extremum sample_ratios(const Norm& norm, double radius, SamplingMode mode, int samples,
                       std::uint64_t seed, RatioKind kind, bool want_min, int& informative) {
  if (!(radius > 0.0)) throw InvalidInput("sampling radius must be positive");
  if (samples < 1) throw InvalidInput("need at least one sample");
  Extremum ext;
  informative = 0;
  for (int i = 0; i < samples; ++i) {
    Rng rng = sample_stream(seed, static_cast<std::uint64_t>(i));
    const Vector x = random_unit(norm, rng);
    const double s = log_uniform(rng, 1e-4 * radius, radius);
    const Vector y = sample_offset(norm, x, mode, s, rng);
    double num = 0.0, den = 0.0;
    if (kind == RatioKind::doubling_ratio) {
      num = gap(norm, x, x + 2.0 * y);
      den = gap(norm, x, x + y);
    } else {
      num = gap(norm, x, x + y);
      den = gap(norm, x, x - y);
    }
    if (!(den > ratio_floor(norm, x))) continue;
    ++informative;
    const double ratio = num / den;
    if (want_min) {
      ext.offer_min(ratio, x, y);
    } else {
      ext.offer_max(ratio, x, y);
    }
  }
  if (!ext.seen) throw DegenerateEstimate("no informative samples: every denominator fell below the floor");
  return ext;
}

ConstantsReport base_report(const Norm& norm, SamplingMode mode, int samples, std::uint64_t seed) {
  ConstantsReport rep;
  rep.norm = norm.describe();
  rep.mode = mode;
  rep.samples = samples;
  rep.seed = seed;
  return rep;
}

template <typename T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

}  // namespace

// ---------------------------------------------------------------------------

ModulusResult modulus(const Norm& norm, const Vector& x, double t, const ModulusOptions& opts) {
  check_vector(norm, x, "x");
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInput("modulus radius t must be positive");
  if (norm(x) < kZeroNorm) throw DomainError("modulus is undefined at x = 0");
  if (opts.starts < 1) throw InvalidInput("modulus needs at least one start");

  const ModulusProblem problem(norm, x, t);
  const int dim = norm.dim();
  ModulusResult out;
  out.t = t;
  out.best_effort = dim > 3;

  std::vector<AscentResult> results;
  if (dim == 1) {
    for (double sign : {1.0, -1.0}) {
      AscentResult r;
      r.y = Vector::Constant(1, sign * t);
      r.value = problem.value(r.y);
      r.kkt_residual = 0.0;
      r.kkt_alpha = 1.0;
      results.push_back(r);
    }
  } else {
    results.reserve(static_cast<std::size_t>(opts.starts));
    for (int k = 0; k < opts.starts; ++k) results.push_back(problem.ascend(start_direction(k, opts.starts, dim), opts));
  }

  auto select = [&]() {
    double best = -kInf;
    for (const auto& r : results) best = std::max(best, r.value);
    const double cut = best - opts.tie_tol * std::max(std::abs(best), std::numeric_limits<double>::min());
    for (std::size_t k = 0; k < results.size(); ++k) {
      if (results[k].value >= cut) return static_cast<int>(k);
    }
    return 0;
  };

  int chosen = select();
  if (dim >= 2 && dim <= 3 && opts.grid_fallback && !kkt_ok(results[static_cast<std::size_t>(chosen)], opts)) {
    AscentResult refined = problem.ascend(problem.grid_best(), opts);
    if (refined.value > results[static_cast<std::size_t>(chosen)].value) {
      results.push_back(refined);
      chosen = static_cast<int>(results.size()) - 1;
      out.grid_refined = true;
    }
  }

  const AscentResult& best = results[static_cast<std::size_t>(chosen)];
  out.sigma = best.value;
  out.maximizer_y = best.y;
  out.normal_at_y = normal_map(norm, best.y);
  out.kkt_residual = best.kkt_residual;
  out.kkt_alpha = best.kkt_alpha;
  out.converged = dim == 1 || kkt_ok(best, opts);
  out.best_start = chosen;
  return out;
}

const char* to_string(SamplingMode mode) { return mode == SamplingMode::full ? "full" : "tangent"; }

void ConstantsReport::merge(const ConstantsReport& other) {
  take(lambda_hat, other.lambda_hat);
  take(r, other.r);
  take(t_hat, other.t_hat);
  take(doubling_radius, other.doubling_radius);
  take(k_hat, other.k_hat);
  take(balanced_radius, other.balanced_radius);
  take(a_hat, other.a_hat);
  take(p, other.p);
  take(b_hat, other.b_hat);
  take(q, other.q);
  samples = std::max(samples, other.samples);
  informative = std::max(informative, other.informative);
  worst_witnesses.insert(worst_witnesses.end(), other.worst_witnesses.begin(), other.worst_witnesses.end());
}

ConstantsReport estimate_lambda(const Norm& norm, double r, SamplingMode mode, int samples, std::uint64_t seed) {
  ConstantsReport rep = base_report(norm, mode, samples, seed);
  const Extremum e = sample_ratios(norm, r, mode, samples, seed, RatioKind::doubling_ratio, true, rep.informative);
  rep.lambda_hat = e.value;
  rep.r = r;
  rep.worst_witnesses.push_back(e.witness("lambda"));
  return rep;
}

ConstantsReport estimate_doubling(const Norm& norm, double r, SamplingMode mode, int samples, std::uint64_t seed) {
  ConstantsReport rep = base_report(norm, mode, samples, seed);
  const Extremum e = sample_ratios(norm, r, mode, samples, seed, RatioKind::doubling_ratio, false, rep.informative);
  rep.t_hat = e.value;
  rep.doubling_radius = r;
  rep.worst_witnesses.push_back(e.witness("doubling"));
  return rep;
}

ConstantsReport estimate_balanced(const Norm& norm, double bound, SamplingMode mode, int samples, std::uint64_t seed) {
  ConstantsReport rep = base_report(norm, mode, samples, seed);
  const Extremum e = sample_ratios(norm, bound, mode, samples, seed, RatioKind::balance_ratio, false, rep.informative);
  rep.k_hat = e.value;
  rep.balanced_radius = bound;
  rep.worst_witnesses.push_back(e.witness("balanced"));
  return rep;
}

ConstantsReport estimate_uniform_constants(const Norm& norm, double p, double q, int samples, std::uint64_t seed) {
  if (!(q > 1.0) || !(q <= p)) throw InvalidInput("uniform constants need 1 < q <= p");
  if (samples < 1) throw InvalidInput("need at least one sample");
  ConstantsReport rep = base_report(norm, SamplingMode::full, samples, seed);
  Extremum a_ext, b_ext;
  for (int i = 0; i < samples; ++i) {
    Rng rng = sample_stream(seed, static_cast<std::uint64_t>(i));
    const Vector e = random_unit(norm, rng);
    const Vector w = gaussian_vector(rng, norm.dim());
    const Vector shifted = e + log_uniform(rng, 1e-4, 2.0) * w / norm(w);
    const double ns = norm(shifted);
    if (ns > kZeroNorm) {
      const Vector f = shifted / ns;
      const double d = norm(Vector(e - f));
      if (d > 1e-12) {
        const Vector sum = e + f;
        const double nsum = norm(sum);
        // 2 - |e+f| through the triangle equality when |e+f| is near 2.
        const double num = nsum < 0.5 ? 2.0 - nsum
                                       : gap(norm, sum, e) + gap(norm, sum, f) + (norm(e) - 1.0) + (norm(f) - 1.0);
        if (num > 1e-7) a_ext.offer_min(num / std::pow(d, p), e, f);
      }
    }

    const Vector x = random_unit(norm, rng);
    const Vector v = gaussian_vector(rng, norm.dim());
    const double s = log_uniform(rng, 1e-4, 4.0);
    const Vector y = v * (s / norm(v));
    // |x+y| + |x-y| - 2 = h(x,x+y) + h(x,x-y) + 2(|x| - 1)
    const double num = gap(norm, x, x + y) + gap(norm, x, x - y) + 2.0 * (norm(x) - 1.0);
    b_ext.offer_max(num / std::pow(norm(y), q), x, y);
  }
  if (!a_ext.seen) throw DegenerateEstimate("no informative samples for the uniform convexity constant");
  rep.informative = samples;
  rep.a_hat = a_ext.value;
  rep.p = p;
  rep.b_hat = b_ext.value;
  rep.q = q;
  rep.worst_witnesses.push_back(a_ext.witness("uniform_convexity"));
  rep.worst_witnesses.push_back(b_ext.witness("uniform_smoothness"));
  return rep;
}

std::pair<double, double> extend_constants(double r, double lambda) {
  if (!(r > 0.0)) throw InvalidInput("extend_constants needs r > 0");
  if (!(lambda > 2.0)) throw InvalidInput("extend_constants needs lambda > 2");
  return {2.0 * r, 3.0 - 2.0 / lambda};
}

ExtendedConstants extend_to_radius(double r, double lambda, double target_r) {
  ExtendedConstants out{r, lambda, 0};
  while (out.r < target_r) {
    std::tie(out.r, out.lambda) = extend_constants(out.r, out.lambda);
    ++out.doublings;
  }
  return out;
}

double duality_residual(const Norm& norm, const Vector& x, const Vector& z, double lambda, double r) {
  if (!(lambda > 2.0)) throw InvalidInput("duality needs lambda > 2");
  if (!(r > 0.0)) throw InvalidInput("duality needs r > 0");
  check_vector(norm, x, "x");
  check_vector(norm, z, "z");
  const double reach = norm(Vector(z - x));
  if (reach > 2.0 * r * norm(x) * (1.0 + 1e-12)) {
    throw PreconditionError("duality_radius", "|z - x| exceeds 2 r |x|");
  }
  return std::max(0.0, gap(norm, x, z) - lambda / (lambda - 2.0) * gap(norm, z, x));
}

double onev_f(double p, double x, double y) {
  if (!(p > 1.0)) throw InvalidInput("onev_f needs p > 1");
  return linearization_remainder(p, x, y);
}

std::vector<double> onev_grid(std::size_t count, double zmin, double zmax) {
  if (count < 4 || !(zmin > 0.0) || !(zmax > zmin)) throw InvalidInput("bad onev grid");
  const std::size_t half = count / 2;
  std::vector<double> grid;
  grid.reserve(2 * half);
  const double lo = std::log(zmin), hi = std::log(zmax);
  for (std::size_t k = 0; k < half; ++k) {
    const double z = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(half - 1));
    grid.push_back(-z);
    grid.push_back(z);
  }
  return grid;
}

OnevScan onev_scan(double p, const std::vector<double>& z_grid) {
  if (!(p > 1.0)) throw InvalidInput("onev_scan needs p > 1");
  OnevScan s;
  s.p = p;
  s.inf_double_ratio = kInf;
  s.sup_double_ratio = -kInf;
  s.sup_balance_ratio = -kInf;
  double zmin_neg = kInf, zmin_pos = kInf, zmax_neg = 0.0, zmax_pos = 0.0;
  for (double z : z_grid) {
    if (z == 0.0) continue;
    ++s.points;
    const double g = power_remainder(p, z);
    const double dbl = power_remainder(p, 2.0 * z) / g;
    const double bal = g / power_remainder(p, -z);
    if (dbl < s.inf_double_ratio) {
      s.inf_double_ratio = dbl;
      s.z_at_inf = z;
    }
    if (dbl > s.sup_double_ratio) {
      s.sup_double_ratio = dbl;
      s.z_at_sup = z;
    }
    if (bal > s.sup_balance_ratio) {
      s.sup_balance_ratio = bal;
      s.z_at_balance = z;
    }
    const double az = std::abs(z);
    if (z < 0.0) {
      if (az < zmin_neg) zmin_neg = az, s.near_zero_ratio_neg = dbl;
      if (az > zmax_neg) zmax_neg = az, s.near_infinity_ratio_neg = dbl;
    } else {
      if (az < zmin_pos) zmin_pos = az, s.near_zero_ratio_pos = dbl;
      if (az > zmax_pos) zmax_pos = az, s.near_infinity_ratio_pos = dbl;
    }
  }
  if (s.points == 0) throw InvalidInput("onev grid has no nonzero points");
  return s;
}

// ---------------------------------------------------------------------------

double lipschitz_from_doubling(double t_const) { return (t_const * t_const - 1.0) / 2.0; }

double transfer_alpha_window(double t_const) {
  const double l = lipschitz_from_doubling(t_const);
  return l > 0.0 ? std::min(0.25, 1.0 / (2.0 * l)) : 0.25;
}

double convexity_transfer_bound(double lambda, double lipschitz, double alpha) {
  const double a = std::abs(alpha);
  return lambda * (1.0 + 2.0 * alpha) / (1.0 + alpha) * (1.0 - 4.0 * lipschitz * a) / (1.0 + 2.0 * lipschitz * a);
}

double doubling_transfer_bound(double t_const, double lipschitz, double alpha) {
  const double a = std::abs(alpha);
  return t_const * (1.0 + 2.0 * alpha) / (1.0 + alpha) * (1.0 + 4.0 * lipschitz * a) / (1.0 - 2.0 * lipschitz * a);
}

double balanced_transfer_bound(double k_const, double lipschitz, double alpha) {
  const double a = std::abs(alpha);
  return k_const * (1.0 + alpha) / (1.0 - alpha) * (1.0 + 2.0 * lipschitz * a) / (1.0 - 2.0 * lipschitz * a);
}

TransferReport transfer_check(const Norm& norm, const TangentConstants& tangent, double kappa, int samples,
                              std::uint64_t seed, double tol) {
  if (!(kappa > 0.0) || kappa > 0.25) throw InvalidInput("transfer_check needs 0 < kappa <= 1/4");
  if (!(tangent.lambda > 2.0) || !(tangent.r > 0.0) || !(tangent.t_const >= 1.0) || !(tangent.k_const > 0.0) ||
      !(tangent.radius > 0.0)) {
    throw InvalidInput("transfer_check needs tangent constants lambda > 2, r > 0, T >= 1, K > 0, radius > 0");
  }
  if (samples < 1) throw InvalidInput("need at least one sample");

  TransferReport rep;
  rep.kappa = kappa;
  rep.lipschitz = lipschitz_from_doubling(tangent.t_const);
  rep.convexity_radius = std::min(kappa, (1.0 - 2.0 * kappa) * tangent.r) / 2.0;
  if (!(rep.convexity_radius > 1e-12)) {
    throw InvalidInput("admissibility window for |y| is empty: kappa too small relative to the tangent radius");
  }
  rep.alpha_window = transfer_alpha_window(tangent.t_const);
  rep.full_lambda_bound = tangent.lambda * (1.0 - 2.0 * kappa) / (1.0 + kappa) * (1.0 - 4.0 * rep.lipschitz * kappa) /
                          (1.0 + 2.0 * rep.lipschitz * kappa);
  rep.worst_convexity_margin = kInf;
  rep.worst_doubling_margin = kInf;
  rep.worst_balanced_margin = kInf;

  auto violate = [&](const char* what, const Vector& x, const Vector& y, double ratio) {
    ++rep.violations;
    if (rep.violation_witnesses.size() < 16) rep.violation_witnesses.push_back(Witness{what, x, y, ratio});
  };

  const double eps_max = tangent.radius / 8.0;
  for (int i = 0; i < samples; ++i) {
    Rng rng = sample_stream(seed, static_cast<std::uint64_t>(i));
    const Vector x = random_unit(norm, rng);
    const double floor = ratio_floor(norm, x);

    // geometric convexity inside the admissible ball
    {
      const double s = log_uniform(rng, 1e-4 * rep.convexity_radius, rep.convexity_radius);
      const Vector y = sample_offset(norm, x, SamplingMode::full, s, rng);
      const double den = gap(norm, x, x + y);
      if (den > floor) {
        const double alpha = y.dot(normal_map(norm, x));
        const double ratio = gap(norm, x, x + 2.0 * y) / den;
        const double bound = convexity_transfer_bound(tangent.lambda, rep.lipschitz, alpha);
        ++rep.convexity_checked;
        rep.worst_convexity_margin = std::min(rep.worst_convexity_margin, (ratio - bound) / (1.0 + std::abs(bound)));
        if (ratio < bound - tol * (1.0 + std::abs(bound))) violate("convexity", x, y, ratio);
      }
    }

    // doubling and balance for |alpha| inside the window
    if (norm.dim() >= 2) {
      const double alpha = uniform(rng, -1.0, 1.0) * rep.alpha_window * (1.0 - 1e-9);
      const double eps = log_uniform(rng, 1e-4 * eps_max, eps_max);
      const Vector y = alpha * x + eps * random_tangent_unit(norm, x, rng);
      const double den = gap(norm, x, x + y);
      if (den > floor) {
        const double ratio = gap(norm, x, x + 2.0 * y) / den;
        const double bound = doubling_transfer_bound(tangent.t_const, rep.lipschitz, alpha);
        ++rep.doubling_checked;
        rep.worst_doubling_margin = std::min(rep.worst_doubling_margin, (bound - ratio) / (1.0 + std::abs(bound)));
        if (ratio > bound + tol * (1.0 + std::abs(bound))) violate("doubling", x, y, ratio);
      }
      const double den_b = gap(norm, x, x - y);
      if (den_b > floor) {
        const double ratio = gap(norm, x, x + y) / den_b;
        const double bound = balanced_transfer_bound(tangent.k_const, rep.lipschitz, alpha);
        ++rep.balanced_checked;
        rep.worst_balanced_margin = std::min(rep.worst_balanced_margin, (bound - ratio) / (1.0 + std::abs(bound)));
        if (ratio > bound + tol * (1.0 + std::abs(bound))) violate("balanced", x, y, ratio);
      }
    }
  }
  return rep;
}

}  // namespace twosticks
