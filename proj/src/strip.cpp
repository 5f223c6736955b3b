#include <algorithm>
#include <cmath>

#include "twosticks/errors.hpp"
#include "twosticks/gap.hpp"
#include "twosticks/sticks.hpp"

namespace twosticks {

namespace {

template <typename F>
double golden_min(F f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
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
  return fc <= fd ? c : d;
}

// Root of f on [lo, hi] given sign(f(lo)) != sign(f(hi)).
template <typename F>
double bisect(F f, double lo, double hi) {
  const bool lo_neg = f(lo) < 0.0;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    if ((f(mid) < 0.0) == lo_neg) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

double slack(double tol, double a, double b) { return tol * (1.0 + std::abs(a) + std::abs(b)); }

Vector random_in_ball(const Norm& norm, double radius, Rng& rng) {
  for (;;) {
    const Vector v = gaussian_vector(rng, norm.dim());
    const double n = norm(v);
    if (n < 1e-8) continue;
    return v * (radius * std::pow(uniform(rng, 0.0, 1.0), 1.0 / norm.dim()) / n);
  }
}

}  // namespace

double strip_bound(double lambda, double k_const, double kappa, double delta) {
  return k_const * lambda * lambda / (lambda - 2.0) * kappa * delta;
}

double strip_delta_for_bound(double lambda, double k_const, double rho, double target) {
  const double c = k_const * lambda * lambda / (lambda - 2.0);
  return target * rho / (4.0 * c + 3.0 * target);
}

Vector closest_point_on_stick(const Norm& norm, const Stick& l, const Vector& x) {
  const double t = golden_min([&](double s) { return norm(Vector(point_at(l, s) - x)); }, 0.0, 1.0);
  const double d0 = norm(Vector(l.start - x)), d1 = norm(Vector(l.end - x));
  const double dt = norm(Vector(point_at(l, t) - x));
  if (d0 <= dt && d0 <= d1) return l.start;
  if (d1 <= dt) return l.end;
  return point_at(l, t);
}

StripReport strip_experiment(const Norm& norm, const Stick& l_in, const Stick& m_in, const Vector& x0_in,
                             double delta_in, double rho_in, double lambda, double k_const, double big_r,
                             const StripOptions& opts) {
  check_vector(norm, x0_in, "x0");
  if (!equal_length(norm, l_in, m_in)) throw PreconditionError("equal_length", "sticks differ in length");
  const double len = stick_length(norm, l_in);
  if (len < 1e-12) throw PreconditionError("equal_length", "degenerate stick");

  // Scale the configuration so that both sticks have unit length.
  const Stick l{l_in.start / len, l_in.end / len};
  const Stick m{m_in.start / len, m_in.end / len};
  const Vector x0 = x0_in / len;
  const double delta = delta_in / len, rho = rho_in / len;

  if (!two_sticks_check(norm, l, m)) throw PreconditionError("two_sticks", "pair violates the two sticks condition");
  if (!(delta > 0.0 && delta < 0.25)) throw PreconditionError("delta", "need 0 < delta < 1/4");
  if (!(rho > 3.0 * delta)) throw PreconditionError("rho", "need rho > 3 delta");
  if (!(lambda > 2.0)) throw PreconditionError("lambda", "need lambda > 2");
  if (!(k_const >= 1.0)) throw PreconditionError("k_const", "need K >= 1");

  StripReport rep;
  rep.scale = len;
  rep.delta = delta;
  rep.rho = rho;
  rep.lambda = lambda;
  rep.k_const = k_const;
  rep.kappa = opts.kappa ? *opts.kappa : 4.0 / (rho - 3.0 * delta);
  if (rep.kappa < 4.0 / (rho - 3.0 * delta) * (1.0 - 1e-12)) throw PreconditionError("kappa", "need kappa >= 4/(rho - 3 delta)");

  rep.lambdastar = closest_point_on_stick(norm, m, x0);
  const Vector lnear = closest_point_on_stick(norm, l, x0);
  if (norm(Vector(rep.lambdastar - x0)) > delta * (1.0 + 1e-12) || norm(Vector(lnear - x0)) > delta * (1.0 + 1e-12)) {
    throw PreconditionError("near", "a stick misses the closed ball B_delta(x0)");
  }
  if (norm(Vector(l.start - x0)) <= rho || norm(Vector(l.end - x0)) <= rho) {
    throw PreconditionError("notinb", "an endpoint of l lies in B_rho(x0)");
  }

  const Vector e = l.direction();
  const Vector ebar = m.direction();
  const double radius = rep.kappa * delta;
  rep.sigma_e = modulus(norm, e, radius, opts.modulus).sigma;
  rep.sigma_ebar = modulus(norm, ebar, radius, opts.modulus).sigma;
  if (rep.sigma_e > rep.sigma_ebar + 1e-9 * std::abs(rep.sigma_ebar)) {
    throw PreconditionError("bmax", "sigma(e, kappa delta) exceeds sigma(ebar, kappa delta)");
  }

  rep.bound = strip_bound(lambda, k_const, rep.kappa, delta);
  const double ends = norm(Vector(l.end - m.end));
  if (ends > big_r * (1.0 + 1e-12)) throw PreconditionError("eta", "|l1 - m1| exceeds the balanced radius");
  if (rep.bound > 1.0) throw PreconditionError("eta", "strip width exceeds 1");

  // l* = l_t with <l_t - lambda*, N(e)> = 0; affine in t with slope <e, N(e)> = 1.
  rep.tstar = (rep.lambdastar - l.start).dot(normal_map(norm, e));
  rep.lstar = point_at(l, rep.tstar);
  rep.star_gap = norm(Vector(rep.lstar - rep.lambdastar));
  rep.star_clearance = std::min(norm(Vector(l.end - rep.lstar)), norm(Vector(l.start - rep.lstar)));
  rep.star_ok = rep.tstar >= 0.0 && rep.tstar <= 1.0 && rep.star_gap <= 4.0 * delta * (1.0 + 1e-9) &&
                4.0 / rep.kappa <= rep.star_clearance * (1.0 + 1e-9);

  const ModulusResult yb = modulus(norm, ebar, rep.bound, opts.modulus);
  rep.ybar = yb.maximizer_y;
  rep.normal_ybar = yb.normal_at_y;

  rep.projection = (l.end - m.end).dot(rep.normal_ybar);
  rep.promise_lhs = gap(norm, ebar, m.end - l.start) + gap(norm, ebar, l.end - m.start);
  rep.promise_rhs = lambda / (lambda - 2.0) * rep.sigma_ebar;
  rep.axya = ebar.dot(rep.normal_ybar);

  const double tol = opts.tol;
  rep.strip_ok = std::abs(rep.projection) <= rep.bound + slack(tol, rep.projection, rep.bound);
  rep.promise_ok = rep.promise_lhs <= rep.promise_rhs + slack(tol, rep.promise_lhs, rep.promise_rhs);
  rep.axya_ok = rep.axya <= slack(tol, rep.axya, 0.0) && rep.axya >= -rep.bound - slack(tol, rep.axya, rep.bound);
  rep.passed = rep.strip_ok && rep.promise_ok;
  return rep;
}

std::optional<StripConfiguration> sample_strip_configuration(const Norm& norm, const StripSamplerOptions& opts,
                                                             Rng& rng) {
  const double delta = opts.delta, rho = opts.rho;
  if (!(delta > 0.0) || !(rho > 3.0 * delta)) throw InvalidInput("sampler needs delta > 0 and rho > 3 delta");
  const double a_lo = rho + delta + opts.margin, a_hi = 1.0 - rho - delta - opts.margin;
  if (!(a_lo < a_hi)) throw InvalidInput("sampler needs 2 (rho + delta + margin) < 1");
  const Vector x0 = Vector::Zero(norm.dim());

  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    Vector e = gaussian_vector(rng, norm.dim());
    if (norm(e) < 1e-8) continue;
    e /= norm(e);
    Vector ebar = e;
    if (norm.dim() > 1) {
      const Vector w = gaussian_vector(rng, norm.dim());
      ebar = e + uniform(rng, 0.0, opts.eta_max) * w / norm(w);
    }
    if (norm(ebar) < 1e-8) continue;
    ebar /= norm(ebar);

    const Vector pl = random_in_ball(norm, delta, rng);
    const Vector pm = random_in_ball(norm, delta, rng);
    const double al = uniform(rng, a_lo, a_hi);
    const Stick l{pl - al * e, pl + (1.0 - al) * e};

    // m = [pm - a ebar, pm + (1-a) ebar]; two sticks holds for a1 <= a <= a2.
    const double ac = al - (pl - pm).dot(normal_map(norm, e));
    auto f1 = [&](double a) { return norm(Vector(l.end - pm + a * ebar)) - 1.0; };
    auto f2 = [&](double a) { return norm(Vector(pm + (1.0 - a) * ebar - l.start)) - 1.0; };
    const double lo = ac - 0.5, hi = ac + 0.5;
    if (!(f1(lo) < 0.0 && f1(hi) > 0.0 && f2(lo) > 0.0 && f2(hi) < 0.0)) continue;
    const double a1 = bisect(f1, lo, hi);
    const double a2 = bisect(f2, lo, hi);
    const double from = std::max(a1, a_lo), to = std::min(a2, a_hi);
    if (!(from <= to)) continue;
    const double a = uniform(rng, from, to);
    const Stick m{pm - a * ebar, pm + (1.0 - a) * ebar};

    if (!two_sticks_check(norm, l, m) || !equal_length(norm, l, m)) continue;
    if (norm(Vector(m.start - x0)) <= rho || norm(Vector(m.end - x0)) <= rho) continue;
    return StripConfiguration{l, m, x0};
  }
  return std::nullopt;
}

}  // namespace twosticks
