#pragma once

namespace knudsen {

// Modified Bessel function of the first kind, order zero. Power series up to
// |y| = 15, asymptotic expansion beyond; even in y.
double bessel_i0(double y);

// exp(-|y|) * I0(y). Bounded on the whole axis, safe for log-space kernel
// evaluation at large incident speeds.
double bessel_i0_scaled(double y);

// log I0(y), never overflows.
double log_bessel_i0(double y);

}  // namespace knudsen
