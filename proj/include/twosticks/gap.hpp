#pragma once

#include "twosticks/norm.hpp"

namespace twosticks {

/// h(x,y) = |y| - <y, N(x)>: how far |.| at y lies above its linearization
/// at x. Nonnegative, zero exactly when y is a nonnegative multiple of x.
/// h(0, y) = 0 by convention (the lower-semicontinuous extension).
///
/// For built-in norms the value is computed from second-order remainders
/// rather than by subtracting two nearly equal numbers, so h(x, x+y) keeps
/// relative accuracy as |y| -> 0.
double gap(const Norm& norm, const Vector& x, const Vector& y);

/// | |x+y| - (|x| + |y| - h(x+y,x) - h(x+y,y)) |. Throws DomainError when x+y = 0.
double triangle_equality_residual(const Norm& norm, const Vector& x, const Vector& y);

/// | |y| - (|x| + h(x,y) + <y-x, N(x)>) |. Throws DomainError when x = 0.
double linearization_identity_residual(const Norm& norm, const Vector& x, const Vector& y);

}  // namespace twosticks
