#include "horo/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "horo/error.hpp"
#include "horo/quadrature.hpp"
#include "horo/specfun.hpp"

namespace horo::poisson {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double delta_step = 0.125;
constexpr double max_exp_u = 340.0;
constexpr double max_quadrature_work = 4e9;

double length(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

void check_vector(std::span<const double> v, int n, const char* what) {
    if (!v.empty() && static_cast<int>(v.size()) != n)
        throw DomainError(std::string(what) + " must have length n = " + std::to_string(n));
}

Complex mu(const Params& p) { return p.lambda + p.rho(); }

Complex normalizer(const Params& p, Normalization norm) {
    return norm == Normalization::classical ? 1.0 / c_function(p) : Complex(1.0);
}

// Kernel values on the difference lattice (i - j)h + iy, indexed by Σ_d (i_d - j_d + M - 1) D^{n-1-d}.
std::vector<Complex> difference_table(const field::SpectralGrid& g, double a, std::span<const double> y,
                                      const Params& p, Normalization norm) {
    const int n = g.dim();
    const int M = g.points();
    const int D = 2 * M - 1;
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= D;
    std::vector<Complex> table(total);
    std::vector<Complex> z(n);
    for (std::size_t t = 0; t < total; ++t) {
        std::size_t rest = t;
        for (int d = n - 1; d >= 0; --d) {
            int off = static_cast<int>(rest % D) - (M - 1);
            rest /= D;
            z[d] = Complex(off * g.spacing(), y.empty() ? 0.0 : y[d]);
        }
        table[t] = poisson_kernel(z, a, p, norm);
    }
    return table;
}

Field quadrature_transform(const Field& f, double a, std::span<const double> y, const Params& p,
                           Normalization norm) {
    const auto& g = f.grid();
    const int n = g.dim();
    const int M = g.points();
    const std::size_t D = 2 * M - 1;
    auto table = difference_table(g, a, y, p, norm);

    std::vector<std::size_t> offset_j(g.size()), offset_i(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto idx = g.unravel(k);
        std::size_t oj = 0, oi = 0;
        for (int d = 0; d < n; ++d) {
            oj = oj * D + idx[d];
            oi = oi * D + idx[d] + M - 1;
        }
        offset_j[k] = oj;
        offset_i[k] = oi;
    }
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < g.size(); ++j)
        if (f[j] != Complex(0.0)) support.push_back(j);
    if (static_cast<double>(support.size()) * g.size() > max_quadrature_work)
        throw DomainError("quadrature path: support × grid size exceeds " + format_number(max_quadrature_work));

    const double cell = std::pow(g.spacing(), n);
    std::vector<Complex> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        Complex acc = 0.0;
        for (std::size_t j : support) acc += f[j] * table[offset_i[i] - offset_j[j]];
        out[i] = acc * cell;
    }
    return Field(f.grid_ptr(), field::Space::position, std::move(out));
}

double dot(std::span<const double> y, const std::array<double, 3>& xi, int n) {
    double s = 0.0;
    for (int d = 0; d < n && !y.empty(); ++d) s += y[d] * xi[d];
    return s;
}

// Integrates g(δ) over ℝⁿ for δ = δ_{λ,y}, reduced to the (x₁, |x'|) half-plane with y on e₁.
template <typename T, typename G>
T integrate_delta(std::span<const double> y, const Params& p, G g) {
    check_vector(y, p.n, "y");
    const double ylen = length(y);
    if (!(ylen < 1.0)) throw TubeViolation("|y| must be < 1 for the delta kernel");
    const Complex m = mu(p);
    const Complex inv_c = 1.0 / c_function(p);
    const double gamma2 = 1.0 - ylen * ylen;
    const double u_lo = std::log(gamma2) - 42.0;
    const double u_hi = std::min(max_exp_u, 2.0 + 42.0 / (2.0 * p.s()));
    const int count = static_cast<int>(std::ceil((u_hi - u_lo) / delta_step));
    const double h = (u_hi - u_lo) / count;

    auto value = [&](double x1, double r) {
        Complex z(x1, ylen);
        Complex w = 1.0 + z * z + r * r;
        return g(inv_c * std::exp(-m * std::log(w)));
    };

    T total{};
    if (p.n == 1) {
        for (int k = 0; k <= count; ++k) {
            double x = std::exp(u_lo + k * h);
            double wt = (k == 0 || k == count) ? 0.5 : 1.0;
            total += (wt * x) * (value(x, 0.0) + value(-x, 0.0));
        }
        return total * h;
    }
    const double shell = quad::sphere_area(p.n - 1);
    std::vector<double> radii(count + 1), rweights(count + 1);
    for (int k = 0; k <= count; ++k) {
        radii[k] = std::exp(u_lo + k * h);
        double wt = (k == 0 || k == count) ? 0.5 : 1.0;
        rweights[k] = wt * h * radii[k] * std::pow(radii[k], p.n - 2) * shell;
    }
    for (int k = 0; k <= count; ++k) {
        double x = std::exp(u_lo + k * h);
        double wt = (k == 0 || k == count) ? 0.5 : 1.0;
        T inner{};
        for (int j = 0; j <= count; ++j) inner += rweights[j] * (value(x, radii[j]) + value(-x, radii[j]));
        total += (wt * h * x) * inner;
    }
    return total;
}

}  // namespace

Params::Params(int n_, Complex lambda_) : n(n_), lambda(lambda_) {
    if (n < 1 || n > 3) throw DomainError("dimension n must be 1, 2 or 3");
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) throw DomainError("lambda must be finite");
    if (!(lambda.real() > 0.0)) throw DomainError("Re lambda must be > 0");
}

Complex c_function(const Params& p) {
    return std::pow(pi, p.rho()) * specfun::gamma(p.lambda) / specfun::gamma(mu(p));
}

Complex poisson_kernel(std::span<const double> x, double a, const Params& p, Normalization norm) {
    check_vector(x, p.n, "x");
    if (!(a > 0.0)) throw DomainError("level a must be > 0");
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    const Complex m = mu(p);
    return normalizer(p, norm) * std::exp(m * std::log(a) - m * std::log(a * a + r2));
}

Complex poisson_kernel(std::span<const Complex> z, double a, const Params& p, Normalization norm) {
    if (static_cast<int>(z.size()) != p.n) throw DomainError("z must have length n");
    if (!(a > 0.0)) throw DomainError("level a must be > 0");
    Complex w = a * a;
    for (Complex c : z) w += c * c;
    if (!(w.real() > 0.0)) throw BranchError("a² + z² leaves the right half-plane");
    const Complex m = mu(p);
    return normalizer(p, norm) * std::exp(m * std::log(a) - m * std::log(w));
}

std::vector<Complex> level_multiplier(const field::SpectralGrid& grid, double a, const Params& p,
                                      std::span<const double> y, Normalization norm) {
    if (grid.dim() != p.n) throw GridMismatch("grid dimension differs from n");
    if (!(a > 0.0)) throw DomainError("level a must be > 0");
    check_vector(y, p.n, "y");
    const int n = p.n;
    const Complex lambda = p.lambda;
    // Unitary transform of the kernel, (2π)^{-n/2} a^{λ+n/2} (2π)^{n/2} 2^{1-λ-n/2}/Γ(λ+n/2)
    // · a^{-2λ} (a|ξ|)^λ K_λ(a|ξ|), times the convolution factor (2π)^{n/2}.
    const double two_pi_half = std::pow(2.0 * pi, 0.5 * n);
    const Complex kernel_hat = (1.0 / two_pi_half) * std::exp(mu(p) * std::log(a)) * two_pi_half *
                               std::exp((1.0 - lambda - 0.5 * n) * std::log(2.0)) / specfun::gamma(mu(p)) *
                               std::exp(-2.0 * lambda * std::log(a));
    const Complex constant = two_pi_half * kernel_hat * normalizer(p, norm);

    std::unordered_map<std::int64_t, Complex> scaled;  // e^{r} r^λ K_λ(r) by wavenumber²
    auto radial = [&](std::int64_t k2, double r) {
        auto it = scaled.find(k2);
        if (it != scaled.end()) return it->second;
        Complex v = r == 0.0 ? specfun::bessel_k_power(lambda, 0.0)
                             : std::exp(lambda * std::log(r)) * specfun::bessel_k_scaled(lambda, r);
        scaled.emplace(k2, v);
        return v;
    };

    const double dxi = grid.frequency_spacing();
    std::vector<Complex> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::int64_t k2 = grid.wavenumber_squared(i);
        double r = a * dxi * std::sqrt(static_cast<double>(k2));
        double exponent = -r - dot(y, grid.wavevector(i), n);
        if (exponent + p.s() * std::log(std::max(r, 1.0)) < -760.0) continue;
        out[i] = constant * radial(k2, r) * std::exp(exponent);
    }
    return out;
}

Field poisson_transform(const Field& f, double a, const Params& p, Method method, Normalization norm) {
    return tube_slice(f, a, {}, p, method, norm, 1.0);
}

Field tube_slice(const Field& f, double a, std::span<const double> y, const Params& p, Method method,
                 Normalization norm, double margin) {
    if (f.space() != field::Space::position) throw DomainError("transform input must be in position space");
    if (f.grid().dim() != p.n) throw GridMismatch("field dimension differs from n");
    if (!(a > 0.0)) throw DomainError("level a must be > 0");
    check_vector(y, p.n, "y");
    if (length(y) > margin * a)
        throw TubeViolation("|y| = " + std::to_string(length(y)) + " exceeds " + std::to_string(margin) + "·a");
    if (method == Method::quadrature) return quadrature_transform(f, a, y, p, norm);
    Field fhat = field::fourier(f);
    auto m = level_multiplier(f.grid(), a, p, y, norm);
    std::vector<Complex> v(fhat.values().begin(), fhat.values().end());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
    return field::inverse_fourier(Field(f.grid_ptr(), field::Space::frequency, std::move(v)));
}

Complex delta_value(std::span<const double> x, std::span<const double> y, const Params& p) {
    check_vector(x, p.n, "x");
    check_vector(y, p.n, "y");
    if (!(length(y) < 1.0)) throw TubeViolation("|y| must be < 1 for the delta kernel");
    Complex w = 1.0;
    for (int d = 0; d < p.n; ++d) {
        Complex z(x[d], y.empty() ? 0.0 : y[d]);
        w += z * z;
    }
    return std::exp(-mu(p) * std::log(w)) / c_function(p);
}

Field delta_kernel(const GridPtr& grid, std::span<const double> y, const Params& p) {
    if (grid->dim() != p.n) throw GridMismatch("grid dimension differs from n");
    check_vector(y, p.n, "y");
    if (!(length(y) < 1.0)) throw TubeViolation("|y| must be < 1 for the delta kernel");
    return Field::sample(grid, [&](std::span<const double> x) { return delta_value(x, y, p); });
}

double delta_l1(std::span<const double> y, const Params& p) {
    return integrate_delta<double>(y, p, [](Complex v) { return std::abs(v); });
}

Complex delta_integral(std::span<const double> y, const Params& p) {
    return integrate_delta<Complex>(y, p, [](Complex v) { return v; });
}

double model_integral_i1(double s, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
    if (!(s > 0.0)) throw DomainError("s must be > 0");
    const double b = std::sqrt(1.0 - gamma * gamma) / gamma;
    const double u_lo = std::log(gamma) - 42.0;
    const double u_hi = std::min(max_exp_u, 2.0 + 42.0 / (2.0 * s));
    return 2.0 * quad::exp_trapezoid(
                     [&](double x) { return std::exp((-s - 0.5) * std::log1p(x * x + 2.0 * b * x)); }, u_lo, u_hi,
                     delta_step);
}

double model_integral_i1_half_closed(double gamma) {
    if (!(gamma > 0.0 && gamma < std::sqrt(0.5))) throw DomainError("closed form needs 0 < gamma < 1/sqrt(2)");
    const double y1 = std::sqrt(1.0 - gamma * gamma);
    const double d = std::sqrt(y1 * y1 - gamma * gamma);
    // y₁ - d = γ²/(y₁ + d) avoids cancellation for small γ.
    return -std::log(gamma * gamma / ((y1 + d) * (y1 + d))) / d;
}

Report delta_asymptotics(const Params& p, std::vector<double> gammas, double max_residual) {
    if (gammas.size() < 5) throw DomainError("delta_asymptotics needs at least 5 gamma values");
    for (double g : gammas)
        if (!(g > 0.0 && g < 1.0)) throw DomainError("gamma values must lie in (0, 1)");
    std::sort(gammas.begin(), gammas.end(), std::greater<>());

    const double s = p.s();
    DeltaRegime regime = std::abs(s - 0.5) < 1e-12 ? DeltaRegime::logarithmic
                         : s < 0.5                 ? DeltaRegime::bounded
                                                   : DeltaRegime::power;
    Report rep("delta_asymptotics");
    rep.params = {{"n", p.n}, {"lambda", {p.lambda.real(), p.lambda.imag()}}, {"gammas", gammas}};
    auto& trace = rep.add_trace("delta_l1", {"gamma", "one_minus_y2", "l1", "l1_over_abs_log"});

    std::vector<double> l1, logx;
    for (double g : gammas) {
        std::vector<double> y(p.n, 0.0);
        y[0] = std::sqrt(1.0 - g * g);
        double v = delta_l1(y, p);
        double lx = std::log(g * g);
        l1.push_back(v);
        logx.push_back(lx);
        trace.add_row({g, g * g, v, v / std::abs(lx)});
    }

    // Least squares on the five smallest gammas.
    auto fit = [&](auto xf, auto yf) {
        const std::size_t k0 = gammas.size() - 5;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t k = k0; k < gammas.size(); ++k) {
            double x = xf(k), yv = yf(k);
            sx += x; sy += yv; sxx += x * x; sxy += x * yv;
        }
        double slope = (5 * sxy - sx * sy) / (5 * sxx - sx * sx);
        double icpt = (sy - slope * sx) / 5;
        double ss = 0;
        for (std::size_t k = k0; k < gammas.size(); ++k) {
            double e = yf(k) - (icpt + slope * xf(k));
            ss += e * e;
        }
        return DeltaFit{regime, slope, icpt, std::sqrt(ss / 5)};
    };

    DeltaFit result = fit([&](std::size_t k) { return logx[k]; }, [&](std::size_t k) { return std::log(l1[k]); });
    const char* regime_name = "power";
    if (regime == DeltaRegime::logarithmic) {
        regime_name = "logarithmic";
        // l1 ≈ A + B |log(1-|y|²)|; residual relative to the mean.
        DeltaFit lin = fit([&](std::size_t k) { return std::abs(logx[k]); }, [&](std::size_t k) { return l1[k]; });
        double mean = 0.0;
        for (std::size_t k = gammas.size() - 5; k < gammas.size(); ++k) mean += l1[k] / 5;
        result.residual = lin.residual / mean;
        rep.values["log_coefficient"] = lin.slope;
        rep.values["log_offset"] = lin.intercept;
    } else if (regime == DeltaRegime::bounded) {
        regime_name = "bounded";
    }
    rep.values["regime"] = regime_name;
    rep.values["slope"] = result.slope;
    rep.values["intercept"] = result.intercept;
    rep.values["fit_residual"] = result.residual;
    rep.values["l1"] = l1;
    if (result.residual > max_residual)
        throw FitError("regression residual " + format_number(result.residual) + " exceeds " +
                       format_number(max_residual));

    auto& l1_min = *std::min_element(l1.begin(), l1.end());
    auto& l1_max = *std::max_element(l1.begin(), l1.end());
    switch (regime) {
        case DeltaRegime::power:
            rep.check_abs("slope = -(s - 1/2)", result.slope, -(s - 0.5), 0.05);
            break;
        case DeltaRegime::bounded:
            rep.check_at_most("max/min of l1", l1_max / l1_min, 3.0);
            break;
        case DeltaRegime::logarithmic: {
            std::size_t last = gammas.size() - 1;
            double r0 = l1[last - 2] / std::abs(logx[last - 2]);
            double r1 = l1[last - 1] / std::abs(logx[last - 1]);
            double r2 = l1[last] / std::abs(logx[last]);
            double spread = (std::max({r0, r1, r2}) - std::min({r0, r1, r2})) / r2;
            rep.values["ratio_spread_last3"] = spread;
            rep.check_at_most("l1/|log(1-|y|²)| spread over the last 3 gammas", spread, 0.1);
            auto& closed = rep.add_trace("i1_half", {"gamma", "quadrature", "closed_form"});
            for (double g : gammas) {
                if (!(g < std::sqrt(0.5))) continue;
                double q = model_integral_i1(0.5, g) / g;
                double c = model_integral_i1_half_closed(g);
                closed.add_row({g, q, c});
                rep.check_close("gamma^-1 I1(1/2, " + format_number(g) + ")", q, c, 1e-8);
            }
            break;
        }
    }
    for (double v : l1)
        if (p.lambda.imag() == 0.0) rep.check_at_least("l1 >= 1", v, 1.0 - 1e-12);
    return rep;
}

Report boundary_value(const Field& f, const Params& p, const std::vector<double>& a_ray) {
    if (a_ray.empty()) throw DomainError("a_ray must not be empty");
    for (std::size_t k = 1; k < a_ray.size(); ++k)
        if (!(a_ray[k] < a_ray[k - 1])) throw DomainError("a_ray must be strictly decreasing");
    const double h = f.grid().spacing();
    if (a_ray.back() < 4.0 * h)
        throw ResolutionError("smallest level " + format_number(a_ray.back()) + " is below 4h = " +
                              format_number(4.0 * h));
    Report rep("boundary_value");
    rep.params = {{"n", p.n}, {"lambda", {p.lambda.real(), p.lambda.imag()}}, {"a_ray", a_ray}};
    auto& trace = rep.add_trace("boundary_value", {"a", "relative_error"});
    const double fnorm = field::norm(f);
    std::vector<double> errors;
    for (double a : a_ray) {
        Field phi = poisson_transform(f, a, p);
        Field psi = phi.scaled(std::exp((p.lambda - p.rho()) * std::log(a)));
        double err = field::norm(psi - f) / fnorm;
        errors.push_back(err);
        trace.add_row({a, err});
    }
    rep.values["errors"] = errors;
    std::size_t tail = std::min<std::size_t>(5, errors.size());
    bool decreasing = true;
    for (std::size_t k = errors.size() - tail + 1; k < errors.size(); ++k) decreasing = decreasing && errors[k] < errors[k - 1];
    rep.check_true("error decreasing over the final " + std::to_string(tail) + " levels", decreasing);
    return rep;
}

double eigen_residual(const Field& f, double a, const Params& p, double da) {
    if (!(da > 0.0 && da < a)) throw DomainError("eigen_residual needs 0 < da < a");
    const auto& g = f.grid();
    Field fhat = field::fourier(f);
    auto at_level = [&](double level, bool laplacian) {
        auto m = level_multiplier(g, level, p);
        std::vector<Complex> v(fhat.values().begin(), fhat.values().end());
        const double dxi2 = g.frequency_spacing() * g.frequency_spacing();
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] *= m[i];
            if (laplacian) v[i] *= -dxi2 * static_cast<double>(g.wavenumber_squared(i));
        }
        return field::inverse_fourier(Field(f.grid_ptr(), field::Space::frequency, std::move(v)));
    };
    Field phi = at_level(a, false);
    Field lap = at_level(a, true);
    Field up = at_level(a + da, false);
    Field down = at_level(a - da, false);
    const Complex eig = p.lambda * p.lambda - p.rho() * p.rho();
    std::vector<Complex> r(g.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        Complex d2 = (up[i] - 2.0 * phi[i] + down[i]) / (da * da);
        Complex d1 = (up[i] - down[i]) / (2.0 * da);
        r[i] = a * a * (lap[i] + d2) - (p.n - 1.0) * a * d1 - eig * phi[i];
    }
    return field::norm(Field(f.grid_ptr(), field::Space::position, std::move(r))) / field::norm(phi);
}

Report eigen_convergence(const std::vector<Field>& inputs, double a, const Params& p) {
    if (inputs.size() < 2) throw DomainError("eigen_convergence needs at least two grids");
    Report rep("eigen_convergence");
    rep.params = {{"n", p.n}, {"lambda", {p.lambda.real(), p.lambda.imag()}}, {"a", a}};
    auto& trace = rep.add_trace("eigen_residual", {"h", "residual", "observed_order"});
    double prev_h = 0.0, prev_r = 0.0;
    std::vector<double> orders;
    for (const Field& f : inputs) {
        double h = f.grid().spacing();
        double r = eigen_residual(f, a, p, h);
        double order = prev_r > 0.0 ? std::log(prev_r / r) / std::log(prev_h / h) : std::nan("");
        if (prev_r > 0.0) orders.push_back(order);
        trace.add_row({h, r, order});
        prev_h = h;
        prev_r = r;
    }
    rep.values["orders"] = orders;
    rep.values["final_residual"] = prev_r;
    for (std::size_t k = 0; k < orders.size(); ++k)
        rep.check_abs("observed order " + std::to_string(k + 1), orders[k], 2.0, 0.2);
    return rep;
}

Report young_bound(const Field& f, const Params& p, const std::vector<double>& levels) {
    Report rep("young_bound");
    rep.params = {{"n", p.n}, {"lambda", {p.lambda.real(), p.lambda.imag()}}, {"levels", levels}};
    auto& trace = rep.add_trace("young_bound", {"a", "norm", "bound"});
    const double fnorm = field::norm(f);
    const double ratio = c_function(Params(p.n, p.s())).real() / std::abs(c_function(p));
    for (double a : levels) {
        double v = field::norm(poisson_transform(f, a, p));
        double bound = std::pow(a, p.rho() - p.s()) * ratio * fnorm;
        trace.add_row({a, v, bound});
        rep.check_at_most("a=" + format_number(a), v, bound * (1.0 + 1e-10));
    }
    return rep;
}

Report slice_bound(const Field& f, const Params& p, const std::vector<double>& levels,
                   const std::vector<std::vector<double>>& directions) {
    Report rep("slice_bound");
    rep.params = {{"n", p.n}, {"lambda", {p.lambda.real(), p.lambda.imag()}}, {"levels", levels}};
    auto& trace = rep.add_trace("slice_bound", {"a", "t", "direction", "norm", "bound"});
    const double fnorm = field::norm(f);
    const double cabs = std::abs(c_function(p));
    for (double a : levels) {
        for (std::size_t d = 0; d < directions.size(); ++d) {
            const auto& u = directions[d];
            check_vector(u, p.n, "direction");
            double ulen = length(u);
            for (double t : {0.0, 0.3, 0.6, 0.9}) {
                std::vector<double> y(p.n), yrel(p.n);
                for (int k = 0; k < p.n; ++k) {
                    yrel[k] = t * u[k] / ulen;
                    y[k] = a * yrel[k];
                }
                double v = field::norm(tube_slice(f, a, y, p, Method::fft, Normalization::unnormalized));
                double bound = cabs * std::pow(a, p.rho() - p.s()) * delta_l1(yrel, p) * fnorm;
                trace.add_row({a, t, static_cast<double>(d), v, bound});
                rep.check_at_most("a=" + format_number(a) + " t=" + format_number(t) + " dir=" + std::to_string(d), v,
                                  bound * (1.0 + 1e-10));
            }
        }
    }
    return rep;
}

Report dual_path(const Field& f, double a, const Params& p, std::span<const double> y) {
    Report rep("dual_path");
    rep.params = {{"n", p.n}, {"lambda", {p.lambda.real(), p.lambda.imag()}}, {"a", a},
                  {"y", std::vector<double>(y.begin(), y.end())}};
    Field spectral = tube_slice(f, a, y, p, Method::fft);
    Field direct = tube_slice(f, a, y, p, Method::quadrature);
    double err = field::relative_l2_error(spectral, direct);
    rep.values["relative_l2"] = err;
    rep.check_at_most("fft vs quadrature relative L2", err, 1e-6);
    return rep;
}

}  // namespace horo::poisson
