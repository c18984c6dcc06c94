#pragma once

// Standard normal CDF built on a rational Chebyshev approximation of the
// complementary error function (Cody-style three-region scheme). Absolute
// error is far below the 1e-7 the sign-reliability predictions need; the
// test suite pins it against tabulated high-precision values.

namespace rewardlab {

// Complementary error function, |rel err| < 1e-15 on the real line.
double erfc_rational(double x);

// P(Z <= x) for Z ~ N(0, 1).
double normal_cdf(double x);

}  // namespace rewardlab
