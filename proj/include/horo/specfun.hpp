#pragma once

#include <complex>
#include <cstdint>

#include "horo/report.hpp"

namespace horo::specfun {

using Complex = std::complex<double>;

enum class BesselKind { first_kind_i, macdonald_k };

// Validated order of a modified Bessel function.
class BesselOrder {
public:
    static constexpr double default_max_real_part = 50.0;

    static BesselOrder first_kind(double nu);
    static BesselOrder macdonald(Complex lambda, double max_real_part = default_max_real_part);

    BesselKind kind() const { return kind_; }
    Complex value() const { return value_; }
    double real() const { return value_.real(); }

private:
    BesselOrder(BesselKind kind, Complex value) : kind_(kind), value_(value) {}
    BesselKind kind_;
    Complex value_;
};

/// Complex Gamma function. Throws PoleError near non-positive integers.
Complex gamma(Complex z);
double gamma(double x);

/// log Γ(z) on the principal branch of the Lanczos form (Re z >= 1/2 internally).
Complex log_gamma(Complex z);

double bessel_i(const BesselOrder& nu, double r);
double bessel_i(double nu, double r);
/// e^{-r} I_ν(r)
double bessel_i_scaled(double nu, double r);
/// e^{-x} I_ν(x) / x^ν for ν > -1, finite as x -> 0.
double bessel_i_scaled_over_power(double nu, double x);

Complex bessel_k(const BesselOrder& lambda, double r);
Complex bessel_k(Complex lambda, double r);
/// e^{r} K_λ(r)
Complex bessel_k_scaled(Complex lambda, double r);
/// r^λ K_λ(r), continuous at r = 0 for Re λ > 0.
Complex bessel_k_power(Complex lambda, double r);

// Evaluation regimes, exposed for overlap testing.
namespace detail {
double bessel_i_scaled_series(double nu, double r);
// Returns NaN when the asymptotic series does not reach full precision.
double bessel_i_scaled_asymptotic(double nu, double r);
double bessel_i_crossover(double nu);
}  // namespace detail

struct SeguraResult {
    double nu = 0.0;
    double r = 0.0;
    double i_ratio = 0.0;       // I_{ν+1/2}/I_{ν-1/2}
    double middle = 0.0;        // r / (ν + sqrt(ν² + r²))
    double k_ratio = 0.0;       // K_{ν-1/2}/K_{ν+1/2}
    bool strict_lower = false;  // i_ratio < middle
    bool rounding_tie = false;  // i_ratio == middle in binary64 (the gap is below one ulp)
    bool upper = false;         // middle <= k_ratio
    bool holds() const { return (strict_lower || rounding_tie) && upper; }
};

SeguraResult segura(double nu, double r);
Report segura_check(double nu, double r);
/// segura on ν linear in [0, 10] × r log-spaced in [1e-2, 1e2], `count` points per axis.
Report segura_grid(int count = 20);

/// Special values, Γ recurrence and reflection on random points of |Re z|, |Im z| <= 20, the I_ν regime
/// overlap, monotonicity of I and K, the r^s K_s limit and the Segura grid.
Report self_test(std::uint64_t seed = 1);

}  // namespace horo::specfun
