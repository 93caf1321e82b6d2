#pragma once

#include <filesystem>
#include <vector>

#include "horo/field.hpp"
#include "horo/poisson.hpp"
#include "horo/report.hpp"

namespace horo::extension {

using field::Complex;
using field::Field;
using poisson::Params;

struct ExtensionField {
    ExtensionField(std::vector<double> t_levels, std::vector<Field> slices, Params params);

    std::vector<double> t_levels;  // strictly decreasing
    std::vector<Field> slices;
    Params params;
};

/// m_λ(r) = r^λ K_λ(r) / (2^{λ-1} Γ(λ)), so m_λ(0) = 1.
Complex multiplier(double r, Complex lambda);

/// ψ̂(ξ, t) = f̂(ξ) m_λ(t|ξ|). Throws ResolutionError if a level is below 4h.
ExtensionField extend(const Field& f, const std::vector<double>& t_levels, const Params& p);
/// The same field built as t^{λ-n/2} times the classical Poisson transform at level t.
ExtensionField extend_via_poisson(const Field& f, const std::vector<double>& t_levels, const Params& p);

/// Agreement of the two constructions, relative L² per level.
Report dual_construction(const Field& f, const std::vector<double>& t_levels, const Params& p,
                         double tolerance = 1e-8);

enum class Coefficient { printed, alternative };

/// Coefficient of ∂_t: the reference form (1-λ/2)/t, or (1-2λ)/t.
Complex t_coefficient(Coefficient which, Complex lambda);

/// Max-norm of ψ_tt + (κ/t) ψ_t + Δψ at each interior level, centered differences in t and a
/// spectral Laplacian. Needs at least 5 levels with uniform spacing (StencilError otherwise).
std::vector<double> ode_residual(const ExtensionField& psi, Coefficient which);

/// Residual at t0 on the 5-point stencils t0 + k·dt, k = -2..2, for each dt; both coefficients side by
/// side. Asserts second order (|order - 2| <= 0.2) for the coefficient whose residual vanishes.
Report ode_convergence(const Field& f, const Params& p, double t0, const std::vector<double>& spacings);

/// ode_residual for both coefficients on the given levels.
Report ode_report(const ExtensionField& psi);

/// ‖ψ(·,t) - f‖₂ / ‖f‖₂ along the levels; asserts strict decrease over the final `tail` levels and,
/// when given, the final error below `final_tolerance`.
Report boundary_recovery(const Field& f, const Params& p, const std::vector<double>& t_levels, int tail = 4,
                         double final_tolerance = 0.0);

/// max |ψ(x,t) - 1| over the central region |x|_∞ <= `central` for every level.
Report constant_recovery(const Field& plateau, const Params& p, const std::vector<double>& t_levels, double central,
                         double tolerance);

/// One CSV per level (level_<k>.csv) and manifest.json with levels, params and per-level norms.
void write_extension(const ExtensionField& psi, const std::filesystem::path& dir);

}  // namespace horo::extension
