#pragma once

// Reference computations for the test suites. Extended precision throughout and
// deliberately independent of the library's evaluation paths.

#include <complex>
#include <functional>

namespace oracle {

using cld = std::complex<long double>;

// Γ(z) from the recurrence shift to Re z >= 40 and the Stirling series there.
cld gamma(cld z);

// Ascending series for I_ν(r), summed in long double.
long double bessel_i_series(long double nu, long double r);

// Trapezoid rule for ∫₀^∞ e^{-r cosh t} cosh(λt) dt on a fixed step to t_max.
cld bessel_k_trapezoid(cld lambda, long double r, long double step, long double t_max);

// Adaptive Gauss–Kronrod (7/15) on [a, b].
long double integrate(const std::function<long double(long double)>& f, long double a, long double b,
                      long double tol = 1e-14L);

// ∫_a^∞ f via x = a + t/(1-t).
long double integrate_to_infinity(const std::function<long double(long double)>& f, long double a,
                                  long double tol = 1e-14L);

}  // namespace oracle
