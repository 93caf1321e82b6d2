#include "horo/extension.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <unordered_map>

#include "horo/error.hpp"
#include "horo/specfun.hpp"

namespace horo::extension {

namespace {

json lambda_json(const Params& p) { return {p.lambda.real(), p.lambda.imag()}; }

void check_levels(const Field& f, const std::vector<double>& t_levels, const Params& p) {
    if (f.space() != field::Space::position) throw DomainError("extension input must be in position space");
    if (f.grid().dim() != p.n) throw GridMismatch("field dimension differs from n");
    if (t_levels.empty()) throw DomainError("t_levels must not be empty");
    for (std::size_t k = 0; k < t_levels.size(); ++k) {
        if (!(t_levels[k] > 0.0) || !std::isfinite(t_levels[k])) throw DomainError("t levels must be positive");
        if (k > 0 && !(t_levels[k] < t_levels[k - 1])) throw DomainError("t levels must be strictly decreasing");
    }
    const double h = f.grid().spacing();
    if (t_levels.back() < 4.0 * h)
        throw ResolutionError("smallest level " + format_number(t_levels.back()) + " is below 4h = " +
                              format_number(4.0 * h));
}

Field apply_factor(const Field& fhat, const std::vector<Complex>& m) {
    std::vector<Complex> v(fhat.values().begin(), fhat.values().end());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
    return field::inverse_fourier(Field(fhat.grid_ptr(), field::Space::frequency, std::move(v)));
}

std::vector<Complex> level_factor(const field::SpectralGrid& g, double t, Complex lambda) {
    std::unordered_map<std::int64_t, Complex> cache;
    std::vector<Complex> m(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::int64_t k2 = g.wavenumber_squared(i);
        auto it = cache.find(k2);
        if (it == cache.end())
            it = cache.emplace(k2, multiplier(t * g.frequency_spacing() * std::sqrt(static_cast<double>(k2)), lambda))
                     .first;
        m[i] = it->second;
    }
    return m;
}

Field laplacian(const Field& f) {
    const auto& g = f.grid();
    Field fhat = field::fourier(f);
    const double dxi2 = g.frequency_spacing() * g.frequency_spacing();
    std::vector<Complex> v(fhat.values().begin(), fhat.values().end());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= -dxi2 * static_cast<double>(g.wavenumber_squared(i));
    return field::inverse_fourier(Field(f.grid_ptr(), field::Space::frequency, std::move(v)));
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (auto v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

const char* coefficient_label(Coefficient which) {
    return which == Coefficient::printed ? "(1-λ/2)/t" : "(1-2λ)/t";
}

}  // namespace

ExtensionField::ExtensionField(std::vector<double> t_levels_, std::vector<Field> slices_, Params params_)
    : t_levels(std::move(t_levels_)), slices(std::move(slices_)), params(params_) {
    if (t_levels.size() != slices.size()) throw DomainError("one slice per level required");
    for (std::size_t k = 1; k < t_levels.size(); ++k) {
        if (!(t_levels[k] < t_levels[k - 1])) throw DomainError("t levels must be strictly decreasing");
        if (!field::same_grid(slices[k], slices[0])) throw GridMismatch("slices must share one grid");
    }
}

Complex multiplier(double r, Complex lambda) {
    if (!(r >= 0.0)) throw DomainError("multiplier needs r >= 0");
    return specfun::bessel_k_power(lambda, r) / (std::exp((lambda - 1.0) * std::log(2.0)) * specfun::gamma(lambda));
}

ExtensionField extend(const Field& f, const std::vector<double>& t_levels, const Params& p) {
    check_levels(f, t_levels, p);
    Field fhat = field::fourier(f);
    std::vector<Field> slices;
    for (double t : t_levels) slices.push_back(apply_factor(fhat, level_factor(f.grid(), t, p.lambda)));
    return ExtensionField(t_levels, std::move(slices), p);
}

ExtensionField extend_via_poisson(const Field& f, const std::vector<double>& t_levels, const Params& p) {
    check_levels(f, t_levels, p);
    std::vector<Field> slices;
    for (double t : t_levels)
        slices.push_back(poisson::poisson_transform(f, t, p).scaled(std::exp((p.lambda - p.rho()) * std::log(t))));
    return ExtensionField(t_levels, std::move(slices), p);
}

Report dual_construction(const Field& f, const std::vector<double>& t_levels, const Params& p, double tolerance) {
    ExtensionField a = extend(f, t_levels, p);
    ExtensionField b = extend_via_poisson(f, t_levels, p);
    Report rep("extension_dual_construction");
    rep.params = {{"n", p.n}, {"lambda", lambda_json(p)}, {"t_levels", t_levels}};
    auto& trace = rep.add_trace("dual_construction", {"t", "relative_l2"});
    double worst = 0.0;
    for (std::size_t k = 0; k < t_levels.size(); ++k) {
        double e = field::relative_l2_error(a.slices[k], b.slices[k]);
        worst = std::max(worst, e);
        trace.add_row({t_levels[k], e});
    }
    rep.values["max_relative_l2"] = worst;
    rep.check_at_most("spectral vs t^{λ-n/2}·Poisson", worst, tolerance);
    return rep;
}

Complex t_coefficient(Coefficient which, Complex lambda) {
    return which == Coefficient::printed ? 1.0 - lambda / 2.0 : 1.0 - 2.0 * lambda;
}

std::vector<double> ode_residual(const ExtensionField& psi, Coefficient which) {
    const auto& t = psi.t_levels;
    if (t.size() < 5) throw StencilError("ode_residual needs at least 5 levels");
    const double dt = t[0] - t[1];
    for (std::size_t k = 1; k < t.size(); ++k)
        if (std::abs((t[k - 1] - t[k]) - dt) > 1e-9 * dt)
            throw StencilError("t levels are not uniformly spaced");
    const Complex kappa = t_coefficient(which, psi.params.lambda);
    std::vector<double> out;
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        // Levels decrease with k, so slices[k-1] sits at t + dt.
        const Field& up = psi.slices[k - 1];
        const Field& mid = psi.slices[k];
        const Field& down = psi.slices[k + 1];
        Field lap = laplacian(mid);
        std::vector<Complex> r(mid.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            Complex d2 = (up[i] - 2.0 * mid[i] + down[i]) / (dt * dt);
            Complex d1 = (up[i] - down[i]) / (2.0 * dt);
            r[i] = d2 + kappa / t[k] * d1 + lap[i];
        }
        out.push_back(max_abs(Field(mid.grid_ptr(), field::Space::position, std::move(r))));
    }
    return out;
}

Report ode_convergence(const Field& f, const Params& p, double t0, const std::vector<double>& spacings) {
    if (spacings.size() < 2) throw DomainError("ode_convergence needs at least two spacings");
    Report rep("extension_ode_convergence");
    rep.params = {{"n", p.n}, {"lambda", lambda_json(p)}, {"t0", t0}, {"spacings", spacings}};
    auto& trace = rep.add_trace("ode_residual", {"dt", "residual_printed", "residual_alternative",
                                                 "order_printed", "order_alternative"});
    std::vector<double> printed, alternative, order_p, order_a;
    for (double dt : spacings) {
        if (!(dt > 0.0 && t0 - 2.0 * dt > 0.0)) throw DomainError("stencil must stay at t > 0");
        std::vector<double> levels;
        for (int k = 2; k >= -2; --k) levels.push_back(t0 + k * dt);
        ExtensionField psi = extend(f, levels, p);
        printed.push_back(ode_residual(psi, Coefficient::printed)[1]);
        alternative.push_back(ode_residual(psi, Coefficient::alternative)[1]);
    }
    for (std::size_t k = 0; k < spacings.size(); ++k) {
        double op = std::nan(""), oa = std::nan("");
        if (k > 0) {
            double step = std::log(spacings[k - 1] / spacings[k]);
            op = std::log(printed[k - 1] / printed[k]) / step;
            oa = std::log(alternative[k - 1] / alternative[k]) / step;
            order_p.push_back(op);
            order_a.push_back(oa);
        }
        trace.add_row({spacings[k], printed[k], alternative[k], op, oa});
    }
    rep.values["residual_printed"] = printed;
    rep.values["residual_alternative"] = alternative;
    rep.values["order_printed"] = order_p;
    rep.values["order_alternative"] = order_a;
    rep.values["printed_plateau"] = printed.back();
    rep.values["plateau_over_alternative"] = printed.back() / alternative.back();
    rep.values["finding"] = std::string("residual vanishes at second order for ") +
                            coefficient_label(Coefficient::alternative) + "; " +
                            coefficient_label(Coefficient::printed) + " levels off at " +
                            format_number(printed.back());
    for (std::size_t k = 0; k < order_a.size(); ++k)
        rep.check_abs("order (1-2λ)/t, step " + std::to_string(k + 1), order_a[k], 2.0, 0.2);
    return rep;
}

Report ode_report(const ExtensionField& psi) {
    Report rep("extension_ode_residual");
    rep.params = {{"n", psi.params.n}, {"lambda", lambda_json(psi.params)}, {"t_levels", psi.t_levels}};
    auto printed = ode_residual(psi, Coefficient::printed);
    auto alternative = ode_residual(psi, Coefficient::alternative);
    auto& trace = rep.add_trace("ode_residual", {"t", "residual_printed", "residual_alternative"});
    for (std::size_t k = 0; k < printed.size(); ++k)
        trace.add_row({psi.t_levels[k + 1], printed[k], alternative[k]});
    rep.values["residual_printed"] = printed;
    rep.values["residual_alternative"] = alternative;
    return rep;
}

Report boundary_recovery(const Field& f, const Params& p, const std::vector<double>& t_levels, int tail,
                         double final_tolerance) {
    if (tail < 2) throw DomainError("tail must be >= 2");
    ExtensionField psi = extend(f, t_levels, p);
    const double fnorm = field::norm(f);
    if (fnorm == 0.0) throw DomainError("boundary datum must be nonzero");
    Report rep("extension_boundary_recovery");
    rep.params = {{"n", p.n}, {"lambda", lambda_json(p)}, {"t_levels", t_levels}};
    auto& trace = rep.add_trace("boundary_recovery", {"t", "relative_error"});
    std::vector<double> errors;
    for (std::size_t k = 0; k < t_levels.size(); ++k) {
        errors.push_back(field::norm(psi.slices[k] - f) / fnorm);
        trace.add_row({t_levels[k], errors.back()});
    }
    rep.values["errors"] = errors;
    std::size_t last = std::min<std::size_t>(tail, errors.size());
    bool decreasing = true;
    for (std::size_t k = errors.size() - last + 1; k < errors.size(); ++k)
        decreasing = decreasing && errors[k] < errors[k - 1];
    rep.check_true("error strictly decreasing over the final " + std::to_string(last) + " levels", decreasing);
    if (final_tolerance > 0.0)
        rep.check_at_most("error at the smallest level", errors.back(), final_tolerance);
    return rep;
}

Report constant_recovery(const Field& plateau, const Params& p, const std::vector<double>& t_levels, double central,
                         double tolerance) {
    ExtensionField psi = extend(plateau, t_levels, p);
    Report rep("extension_constant_recovery");
    rep.params = {{"n", p.n}, {"lambda", lambda_json(p)}, {"t_levels", t_levels}, {"central", central}};
    auto& trace = rep.add_trace("constant_recovery", {"t", "max_deviation"});
    const auto& g = plateau.grid();
    double worst = 0.0;
    for (std::size_t k = 0; k < t_levels.size(); ++k) {
        double dev = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto x = g.position(i);
            bool inside = true;
            for (int d = 0; d < g.dim(); ++d) inside = inside && std::abs(x[d]) <= central;
            if (inside) dev = std::max(dev, std::abs(psi.slices[k][i] - 1.0));
        }
        worst = std::max(worst, dev);
        trace.add_row({t_levels[k], dev});
    }
    rep.values["max_deviation"] = worst;
    rep.check_at_most("max |ψ - 1| on the central region", worst, tolerance);
    return rep;
}

void write_extension(const ExtensionField& psi, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["params"] = {{"n", psi.params.n}, {"lambda", lambda_json(psi.params)}};
    manifest["levels"] = json::array();
    for (std::size_t k = 0; k < psi.t_levels.size(); ++k) {
        std::string name = "level_" + std::to_string(k) + ".csv";
        field::write_csv(psi.slices[k], dir / name);
        manifest["levels"].push_back({{"t", psi.t_levels[k]},
                                      {"file", name},
                                      {"l2_norm", field::norm(psi.slices[k])},
                                      {"max_norm", field::norm(psi.slices[k], field::NormKind::Linf)}});
    }
    std::ofstream out(dir / "manifest.json");
    if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
}

}  // namespace horo::extension
