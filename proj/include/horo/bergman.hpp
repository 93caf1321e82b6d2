#pragma once

#include <optional>
#include <span>
#include <vector>

#include "horo/field.hpp"
#include "horo/poisson.hpp"
#include "horo/report.hpp"

namespace horo::bergman {

using field::Field;
using poisson::Normalization;
using poisson::Params;

enum class Side { spatial, fourier };

struct WeightSpec {
    WeightSpec(double alpha, Params params, Side side = Side::spatial);

    double alpha;
    Params params;
    Side side;
    /// α + n/2 - 1, the order of the Bessel I factor.
    double beta() const { return alpha + 0.5 * params.n - 1.0; }
};

/// (2π)^{-n/2} / Γ(α) · (1 - |y|²/a²)_+^{α-1}; zero for |y| >= a.
double spatial_weight(std::span<const double> y, double a, const WeightSpec& w);

/// |ξ|^{2s} |K_λ(|ξ|)|² I_β(2|ξ|) / (2|ξ|)^β, with the analytic limit at ξ = 0.
double fourier_weight(double xi_norm, const WeightSpec& w);
/// Limit of fourier_weight at 0: |2^{λ-1}Γ(λ)|² 2^{-β} / Γ(β+1).
double fourier_weight_at_zero(const WeightSpec& w);
/// The reference closed form 2^{-α-n/2-2s-1} Γ(s)² / Γ(α+n/2) for w_s^α(0) (real λ).
double printed_weight_at_zero(const WeightSpec& w);

/// w(λ) = [∫_{|y|<1} 𝐰^α(y) dy]^{1/2} by Gauss–Jacobi quadrature in the radius.
double w_constant(const WeightSpec& w, int nodes = 32);
/// (2^{-n/2} / Γ(α + n/2))^{1/2}
double w_constant_closed(const WeightSpec& w);

/// c_{n,α,λ} with ∫_{T_a} |φ_a|² 𝐰_{λ,a}^α = c a^{2n-2s} ∫ |f̂|² w_λ^α(aξ) dξ:
/// 2^{α+1-2s}/|Γ(λ)|² for the classical transform, times |c(λ)|² for the unnormalized one.
double level_constant(const WeightSpec& w, Normalization norm = Normalization::classical);
/// The candidate 2^{α+2s+1}/Γ(s)² obtained by pairing the reference w_s^α(0) with w(λ)².
double candidate_level_constant(const WeightSpec& w);

enum class Method { tube_quadrature, fourier_side };

struct TubeOptions {
    int radial_nodes = 64;
    int sphere_resolution = 0;  // 0 selects the module default per dimension
};

struct BergmanEvaluation {
    double a = 0.0;
    double value = 0.0;  // squared norm
    Method method = Method::tube_quadrature;
};

/// Squared Bergman norm of φ_a on the tube T_a. Tube side: Parseval per slice, Gauss–Jacobi in the
/// radius of y and a sphere rule. Fourier side: c_{n,α,λ} a^{2n-2s} Σ |f̂|² w(a|ξ|) Δξⁿ, with the
/// constant taken from `constant` when given, else from level_constant.
BergmanEvaluation bergman_norm(const Field& f, double a, const WeightSpec& w, Method method,
                               Normalization norm = Normalization::classical, const TubeOptions& options = {},
                               std::optional<double> constant = std::nullopt);

/// ∫ |φ_a(x+iy)|² dx via Parseval; equals ‖tube_slice(f, a, y)‖₂².
double slice_energy(const Field& f, double a, std::span<const double> y, const Params& p,
                    Normalization norm = Normalization::classical);

/// Level isometry: one constant across all (f, a) pairs. Reports the median ratio tube/fourier-raw,
/// its relative spread, and comparisons with level_constant and the candidate closed form.
Report level_isometry(const std::vector<Field>& inputs, const std::vector<double>& levels, const WeightSpec& w,
                      double spread_tolerance, Normalization norm = Normalization::classical,
                      const TubeOptions& options = {});

/// Strict decrease of w_λ^α on a log grid, and the log-log slope over r ∈ [50, 200].
Report weight_law(const WeightSpec& w, int grid_points = 200, double r_min = 1e-3, double r_max = 200.0);

struct AdmissibilityResult {
    bool finite = false;
    double value = 0.0;                  // d(λ) estimate (partial sum when divergent)
    double shell_ratio = 0.0;            // ratio of the last two boundary shells
    std::vector<double> shells;          // ∫ over 1-ε_k < |y| < 1-ε_{k+1}
    std::vector<double> refinement;      // Jacobi sums at 8, 16, 32, 64, 128 nodes
    double refinement_growth = 0.0;      // last / first
};

/// d(λ) = ∫_{|y|<1} 𝐰^α(y) ‖δ_{λ,y}‖₁² dy. Finite iff boundary-shell integrals decay geometrically.
/// Throws QuadratureError if the last shell ratio is within 1e-3 of 1.
AdmissibilityResult admissibility_evaluate(const WeightSpec& w, int shells = 8);
Report admissibility(const WeightSpec& w, int shells = 8);

/// Bisection in α for the finite/divergent transition; stops when the bracket is narrower than `width`.
Report admissibility_threshold(const Params& p, double alpha_lo, double alpha_hi, double width = 0.05);

/// sup over a_grid of a^{s-n} ‖φ_a‖_B (unnormalized transform) with the full trace.
Report banach_norm(const Field& f, const WeightSpec& w, const std::vector<double>& a_grid,
                   const TubeOptions& options = {});

/// banach_norm(f)/‖f‖₂ over a family of inputs; asserts a coefficient of variation below `cv_tolerance`.
Report isometry_ratio(const std::vector<Field>& inputs, const WeightSpec& w, const std::vector<double>& a_grid,
                      double cv_tolerance = 1e-3, const TubeOptions& options = {});

/// a^{s-n} ‖φ_a‖_B / (w(λ)|c(λ)|) along a decreasing ray (unnormalized transform), compared with ‖f‖₂.
/// Throws ResolutionError if min a < 4h.
Report norm_limit(const Field& f, const WeightSpec& w, const std::vector<double>& a_ray,
                  const TubeOptions& options = {});

}  // namespace horo::bergman
