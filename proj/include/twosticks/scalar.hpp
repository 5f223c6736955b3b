#pragma once

namespace twosticks {

/// Second-order remainder |1+z|^p - 1 - p z of the power map at 1.
///
/// Evaluated by the binomial series near z = 0, where the direct formula
/// cancels catastrophically, so the result keeps full relative accuracy for
/// |z| down to the underflow range. Valid for any real p (including 0<p<1).
double power_remainder(double p, double z);

}  // namespace twosticks

namespace twosticks {

/// |x+y|^p - |x|^p - p y |x|^(p-1) sign(x), accurate for |y| << |x|.
double linearization_remainder(double p, double x, double y);

}  // namespace twosticks
