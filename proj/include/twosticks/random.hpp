#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace twosticks {

using Rng = std::mt19937_64;

/// Independent stream for sample `index` of a run seeded with `seed`.
/// Streams depend only on (seed, index), so results do not depend on the
/// order in which samples are evaluated.
Rng sample_stream(std::uint64_t seed, std::uint64_t index);

Eigen::VectorXd gaussian_vector(Rng& rng, int dim);

double uniform(Rng& rng, double lo, double hi);

/// Log-uniform draw in [lo, hi], both > 0.
double log_uniform(Rng& rng, double lo, double hi);

/// Element `index` (0-based) of the Halton sequence in [0,1)^dim.
Eigen::VectorXd halton_point(std::uint64_t index, int dim);

}  // namespace twosticks
