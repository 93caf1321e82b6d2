#pragma once

#include <complex>
#include <span>
#include <vector>

#include "horo/field.hpp"
#include "horo/report.hpp"

namespace horo::poisson {

using Complex = std::complex<double>;
using field::Field;
using field::GridPtr;

struct Params {
    Params(int n, Complex lambda);

    int n;
    Complex lambda;
    double rho() const { return 0.5 * n; }
    double s() const { return lambda.real(); }
};

// classical: kernel divided by c(λ), so that a^{λ-n/2}·φ_a -> f as a -> 0.
// unnormalized: the bare kernel a^{λ+n/2}(a²+|x|²)^{-(λ+n/2)}.
enum class Normalization { classical, unnormalized };
enum class Method { fft, quadrature };

inline constexpr double default_tube_margin = 0.95;

/// c(λ) = ∫ (1+|x|²)^{-(λ+n/2)} dx = π^{n/2} Γ(λ) / Γ(λ+n/2).
Complex c_function(const Params& p);

Complex poisson_kernel(std::span<const double> x, double a, const Params& p,
                       Normalization norm = Normalization::classical);
/// Complexified kernel at z = x + iy (principal branch). Throws BranchError when Re(a² + Σz_j²) <= 0.
Complex poisson_kernel(std::span<const Complex> z, double a, const Params& p,
                       Normalization norm = Normalization::classical);

/// Fourier multiplier of convolution with the kernel at level a, times e^{-y·ξ}, on the grid's
/// frequency lattice. `y` may be empty (y = 0).
std::vector<Complex> level_multiplier(const field::SpectralGrid& grid, double a, const Params& p,
                                      std::span<const double> y = {},
                                      Normalization norm = Normalization::classical);

/// φ_a = f * p_λ(·, a). The fft path multiplies f̂ by the Macdonald-function multiplier; the
/// quadrature path is a direct (aperiodic) Riemann sum against sampled kernel values.
Field poisson_transform(const Field& f, double a, const Params& p, Method method = Method::fft,
                        Normalization norm = Normalization::classical);

/// x ↦ φ_a(x + iy). Throws TubeViolation if |y| > margin·a.
Field tube_slice(const Field& f, double a, std::span<const double> y, const Params& p,
                 Method method = Method::fft, Normalization norm = Normalization::classical,
                 double margin = default_tube_margin);

/// δ_{λ,y}(x) = (1+(x+iy)²)^{-(λ+n/2)} / c(λ) sampled on the grid. Throws TubeViolation if |y| >= 1.
Field delta_kernel(const GridPtr& grid, std::span<const double> y, const Params& p);

/// Pointwise value of δ_{λ,y} at a real point x.
Complex delta_value(std::span<const double> x, std::span<const double> y, const Params& p);

/// ‖δ_{λ,y}‖₁ by exp-map trapezoid quadrature; tails beyond the integration range are below 1e-15
/// relative. For n >= 2 the integral is reduced to (x₁, |x'|) with y rotated onto e₁.
double delta_l1(std::span<const double> y, const Params& p);

/// ∫ δ_{λ,y}(x) dx (complex), same quadrature as delta_l1.
Complex delta_integral(std::span<const double> y, const Params& p);

/// I₁(s,γ) = ∫_ℝ (1 + x² + 2|x| y₁/γ)^{-s-1/2} dx with y₁ = sqrt(1-γ²).
double model_integral_i1(double s, double gamma);
/// γ^{-1} I₁(1/2, γ) in closed form; needs γ < 1/√2.
double model_integral_i1_half_closed(double gamma);

enum class DeltaRegime { bounded, logarithmic, power };

struct DeltaFit {
    DeltaRegime regime;
    double slope = 0.0;      // d log‖δ‖₁ / d log(1-|y|²) over the five smallest γ
    double intercept = 0.0;
    double residual = 0.0;   // RMS residual of the regime's regression
};

/// Evaluates ‖δ_{λ,y}‖₁ along y = sqrt(1-γ²) e₁ and classifies the growth as γ -> 0.
/// Throws FitError when the regression residual exceeds `max_residual`.
Report delta_asymptotics(const Params& p, std::vector<double> gammas, double max_residual = 0.05);

/// ψ_a = a^{λ-n/2} φ_a for the classical transform, compared with f along a decreasing ray.
/// Throws ResolutionError if min a < 4h.
Report boundary_value(const Field& f, const Params& p, const std::vector<double>& a_ray);

/// Relative L² residual of a²(Δφ + φ_aa) - (n-1) a φ_a - (λ² - n²/4) φ at level a, with a
/// spectral Laplacian and centered differences of step `da` in a.
double eigen_residual(const Field& f, double a, const Params& p, double da);

/// Residuals over successive grid refinements (M, 2M, ...), with da = h on each grid.
Report eigen_convergence(const std::vector<Field>& inputs, double a, const Params& p);

/// ‖φ_a‖₂ ≤ a^{n/2-s} c(s)/|c(λ)| ‖f‖₂ (classical) over the given levels.
Report young_bound(const Field& f, const Params& p, const std::vector<double>& levels);

/// ‖φ_{a,y}‖₂ ≤ |c(λ)| a^{n/2-s} ‖δ_{λ,y/a}‖₁ ‖f‖₂ for the unnormalized transform, with
/// y/a ∈ {0, 0.3, 0.6, 0.9}·u for each unit vector u in `directions`.
Report slice_bound(const Field& f, const Params& p, const std::vector<double>& levels,
                   const std::vector<std::vector<double>>& directions);

/// Dual-path comparison: relative L² distance between the fft and quadrature transforms.
Report dual_path(const Field& f, double a, const Params& p, std::span<const double> y = {});

}  // namespace horo::poisson
