#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace twosticks {

using Vector = Eigen::VectorXd;

enum class NormKind { euclidean, p_norm, plugin };

/// A norm on R^dim: the Euclidean norm, a p-norm with 1 < p < inf, or a
/// user-supplied evaluator. Built-in norms have a closed-form normal map;
/// plug-in norms get a Richardson-extrapolated finite-difference gradient.
class Norm {
 public:
  using Evaluator = std::function<double(const Vector&)>;

  static Norm euclidean(int dim);
  static Norm p_norm(double p, int dim);
  /// The evaluator must be positively homogeneous, even, convex and C^1 off
  /// the origin. None of this can be certified; `validate_norm` samples it.
  static Norm plugin(int dim, Evaluator eval, std::string name = "plugin");

  NormKind kind() const { return kind_; }
  int dim() const { return dim_; }
  /// Exponent of a p-norm; 2 for the Euclidean norm; empty for plug-ins.
  std::optional<double> exponent() const;
  const std::string& name() const { return name_; }
  /// Short descriptor: "euclidean", "p:3", or the plug-in name.
  std::string describe() const;

  double operator()(const Vector& x) const;

 private:
  Norm(NormKind kind, int dim, double p, std::string name, std::shared_ptr<const Evaluator> eval);

  NormKind kind_;
  int dim_;
  double p_;
  std::string name_;
  std::shared_ptr<const Evaluator> plugin_;
};

// Norm values below this are treated as the zero vector.
inline constexpr double kZeroNorm = 1e-300;

/// Throws InvalidInput on dimension mismatch or non-finite coordinates.
void check_vector(const Norm& norm, const Vector& x, const char* what = "vector");

double eval_norm(const Norm& norm, const Vector& x);

bool is_zero(const Norm& norm, const Vector& x);

/// N(x), the gradient of the norm at x != 0. Throws DomainError at 0.
Vector normal_map(const Norm& norm, const Vector& x);

struct TangentDecomposition {
  double alpha = 0.0;
  double epsilon = 0.0;
  std::optional<Vector> x_perp;  // absent when y is a multiple of x
};

/// y = alpha x + epsilon x_perp with <x_perp, N(x)> = 0, |x_perp| = 1,
/// epsilon >= 0. Requires |x| = 1 to within 1e-7.
TangentDecomposition tangent_decompose(const Norm& norm, const Vector& x, const Vector& y);

/// Centered-difference gradient of the norm with absolute step `step`.
Vector finite_diff_gradient(const Norm& norm, const Vector& x, double step);

struct NormValidationReport {
  int samples = 0;
  std::uint64_t seed = 0;
  double homogeneity = 0.0;       // max | |tx| - |t||x| | / (|t||x|)
  double symmetry = 0.0;          // max | |x| - |-x| | / |x|
  double triangle_excess = 0.0;   // max (|x+y| - |x| - |y|)_+ / (|x| + |y|)
  double euler = 0.0;             // max | <x,N(x)> - |x| | / |x|
  double support_excess = 0.0;    // max (<y,N(x)> - |y|)_+ / |y|
  double normal_homogeneity = 0.0;  // max |N(tx) - N(x)|_inf, t > 0
  double normal_oddness = 0.0;      // max |N(-x) + N(x)|_inf

  double worst() const;
  bool ok(double tol) const { return worst() <= tol; }
};

NormValidationReport validate_norm(const Norm& norm, int samples, std::uint64_t seed);

}  // namespace twosticks
