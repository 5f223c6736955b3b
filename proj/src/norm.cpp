#include "twosticks/norm.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "twosticks/errors.hpp"
#include "twosticks/random.hpp"

namespace twosticks {

namespace {

// Scaled power sum: max|x_i| * (sum (|x_i|/max)^p)^(1/p).
double scaled_p_norm(const Vector& x, double p) {
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  if (p == 2.0) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double r = x[i] / m;
      s += r * r;
    }
    return m * std::sqrt(s);
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

// Centered difference along coordinate i, dividing by the step actually
// represented in floating point.
double centered_difference(const Norm& norm, const Vector& x, Eigen::Index i, double step) {
  Vector plus = x, minus = x;
  plus[i] += step;
  minus[i] -= step;
  const double width = plus[i] - minus[i];
  return (norm(plus) - norm(minus)) / width;
}

}  // namespace

Norm::Norm(NormKind kind, int dim, double p, std::string name, std::shared_ptr<const Evaluator> eval)
    : kind_(kind), dim_(dim), p_(p), name_(std::move(name)), plugin_(std::move(eval)) {}

Norm Norm::euclidean(int dim) {
  if (dim < 1) throw InvalidInput("norm dimension must be >= 1");
  return Norm(NormKind::euclidean, dim, 2.0, "euclidean", nullptr);
}

Norm Norm::p_norm(double p, int dim) {
  if (dim < 1) throw InvalidInput("norm dimension must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("p-norm requires 1 < p < inf");
  return Norm(NormKind::p_norm, dim, p, "p_norm", nullptr);
}

Norm Norm::plugin(int dim, Evaluator eval, std::string name) {
  if (dim < 1) throw InvalidInput("norm dimension must be >= 1");
  if (!eval) throw InvalidInput("plugin norm needs an evaluator");
  return Norm(NormKind::plugin, dim, std::nan(""), std::move(name),
              std::make_shared<const Evaluator>(std::move(eval)));
}

std::optional<double> Norm::exponent() const {
  if (kind_ == NormKind::plugin) return std::nullopt;
  return p_;
}

std::string Norm::describe() const {
  switch (kind_) {
    case NormKind::euclidean:
      return "euclidean";
    case NormKind::p_norm:
      return fmt::format("p:{}", p_);
    case NormKind::plugin:
      break;
  }
  return name_;
}

double Norm::operator()(const Vector& x) const {
  if (kind_ == NormKind::plugin) return (*plugin_)(x);
  return scaled_p_norm(x, p_);
}

void check_vector(const Norm& norm, const Vector& x, const char* what) {
  if (x.size() != norm.dim()) {
    throw InvalidInput(std::string(what) + ": dimension " + std::to_string(x.size()) +
                       " does not match norm dimension " + std::to_string(norm.dim()));
  }
  if (!x.allFinite()) throw InvalidInput(std::string(what) + ": non-finite coordinate");
}

double eval_norm(const Norm& norm, const Vector& x) {
  check_vector(norm, x);
  return norm(x);
}

bool is_zero(const Norm& norm, const Vector& x) { return eval_norm(norm, x) < kZeroNorm; }

Vector normal_map(const Norm& norm, const Vector& x) {
  const double n = eval_norm(norm, x);
  if (n < kZeroNorm) throw DomainError("normal map is undefined at the origin");

  if (norm.kind() == NormKind::plugin) {
    // N is 0-homogeneous: differentiate at the unit vector with a fixed step,
    // then Richardson-extrapolate the O(h^2) centered difference.
    const Vector u = x / n;
    constexpr double h = 1e-3;
    Vector g(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double coarse = centered_difference(norm, u, i, h);
      const double fine = centered_difference(norm, u, i, h / 2);
      g[i] = (4.0 * fine - coarse) / 3.0;
    }
    return g;
  }

  const double p = *norm.exponent();
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = x[i] / n;
    g[i] = p == 2.0 ? r : std::copysign(std::pow(std::abs(r), p - 1.0), r);
  }
  return g;
}

TangentDecomposition tangent_decompose(const Norm& norm, const Vector& x, const Vector& y) {
  check_vector(norm, y, "y");
  const double nx = eval_norm(norm, x);
  if (std::abs(nx - 1.0) > 1e-7) throw DomainError("tangent_decompose requires a unit vector x");

  TangentDecomposition out;
  out.alpha = y.dot(normal_map(norm, x));
  const Vector rest = y - out.alpha * x;
  const double eps = norm(rest);
  if (eps > 1e-13 * (1.0 + norm(y))) {
    out.epsilon = eps;
    out.x_perp = rest / eps;
  }
  return out;
}

Vector finite_diff_gradient(const Norm& norm, const Vector& x, double step) {
  if (!(step > 0.0)) throw InvalidInput("finite-difference step must be positive");
  if (is_zero(norm, x)) throw DomainError("gradient of the norm is undefined at the origin");
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = centered_difference(norm, x, i, step);
  return g;
}

double NormValidationReport::worst() const {
  return std::max({homogeneity, symmetry, triangle_excess, euler, support_excess,
                   normal_homogeneity, normal_oddness});
}

NormValidationReport validate_norm(const Norm& norm, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidInput("validate_norm needs at least one sample");
  NormValidationReport rep;
  rep.samples = samples;
  rep.seed = seed;
  const int n = norm.dim();
  for (int s = 0; s < samples; ++s) {
    Rng rng = sample_stream(seed, static_cast<std::uint64_t>(s));
    const Vector x = gaussian_vector(rng, n) * log_uniform(rng, 1e-3, 1e3);
    const Vector y = gaussian_vector(rng, n) * log_uniform(rng, 1e-3, 1e3);
    const double t = uniform(rng, -10.0, 10.0);
    const double nx = norm(x), ny = norm(y);
    if (nx < kZeroNorm || ny < kZeroNorm || t == 0.0) continue;

    rep.homogeneity = std::max(rep.homogeneity, std::abs(norm(t * x) - std::abs(t) * nx) / (std::abs(t) * nx));
    rep.symmetry = std::max(rep.symmetry, std::abs(nx - norm(Vector(-x))) / nx);
    rep.triangle_excess = std::max(rep.triangle_excess, (norm(x + y) - nx - ny) / (nx + ny));

    const Vector nmap = normal_map(norm, x);
    rep.euler = std::max(rep.euler, std::abs(x.dot(nmap) - nx) / nx);
    rep.support_excess = std::max(rep.support_excess, (y.dot(nmap) - ny) / ny);
    const double tp = std::abs(t);
    rep.normal_homogeneity =
        std::max(rep.normal_homogeneity, (normal_map(norm, tp * x) - nmap).cwiseAbs().maxCoeff());
    rep.normal_oddness =
        std::max(rep.normal_oddness, (normal_map(norm, Vector(-x)) + nmap).cwiseAbs().maxCoeff());
  }
  return rep;
}

}  // namespace twosticks
