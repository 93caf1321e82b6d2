#include "horo/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

#include "horo/error.hpp"
#include "horo/quadrature.hpp"
#include "horo/specfun.hpp"

namespace horo::bergman {

namespace {

using Complex = std::complex<double>;
constexpr double pi = std::numbers::pi;

json lambda_json(const Params& p) { return {p.lambda.real(), p.lambda.imag()}; }

json weight_json(const WeightSpec& w) {
    return {{"n", w.params.n}, {"lambda", lambda_json(w.params)}, {"alpha", w.alpha}};
}

double spatial_prefactor(const WeightSpec& w) {
    return std::pow(2.0 * pi, -0.5 * w.params.n) / std::tgamma(w.alpha);
}

// Nodes and weights for ∫₀¹ (1-ρ²)^{α-1} ρ^{n-1} g(ρ) dρ ≈ Σ weight·g(node).
struct RadialRule {
    std::vector<double> rho;
    std::vector<double> weight;
};

RadialRule radial_rule(double alpha, int n, int count) {
    quad::Rule r = quad::gauss_jacobi(count, alpha - 1.0, n - 1.0);
    const double pre = std::pow(2.0, -(alpha - 1.0) - (n - 1.0) - 1.0);
    RadialRule out;
    for (std::size_t j = 0; j < r.size(); ++j) {
        double x = r.nodes[j];
        out.rho.push_back(0.5 * (1.0 + x));
        out.weight.push_back(pre * r.weights[j] * std::pow(0.5 * (3.0 + x), alpha - 1.0));
    }
    return out;
}

// |f̂|² on the frequency lattice, restricted to the entries that are not exactly zero.
struct Spectrum {
    field::GridPtr grid;
    std::vector<std::size_t> index;
    std::vector<double> power;
    double cell = 0.0;  // Δξⁿ
};

Spectrum spectrum_of(const Field& f) {
    if (f.space() != field::Space::position) throw DomainError("Bergman norms take position-space fields");
    Field fhat = field::fourier(f);
    Spectrum s;
    s.grid = f.grid_ptr();
    s.cell = std::pow(f.grid().frequency_spacing(), f.grid().dim());
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        double pw = std::norm(fhat[i]);
        if (pw > 0.0) {
            s.index.push_back(i);
            s.power.push_back(pw);
        }
    }
    return s;
}

// Squared-norm integrand over the tube, ∫_{|y|<a} 𝐰_{λ,a}(y) S(y) dy with S(y) = Σ |f̂ M_a|² e^{-2y·ξ} Δξⁿ.
double tube_value(const Spectrum& sp, double a, const WeightSpec& w, Normalization norm, const TubeOptions& opt) {
    const auto& g = *sp.grid;
    const int n = g.dim();
    auto m = poisson::level_multiplier(g, a, w.params, {}, norm);

    // Active terms: log(|f̂|²|M|²) + 2a|ξ|₁ bounds the largest possible contribution.
    std::vector<double> logamp, bound;
    std::vector<std::array<int, 3>> cell_index;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sp.index.size(); ++k) {
        std::size_t i = sp.index[k];
        double m2 = std::norm(m[i]);
        if (m2 == 0.0) continue;
        auto v = g.wavevector(i);
        double r = std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2]);
        double la = std::log(sp.power[k]) + std::log(m2);
        logamp.push_back(la);
        cell_index.push_back(g.unravel(i));
        bound.push_back(la + 2.0 * a * r);
        best = std::max(best, bound.back());
    }
    // Amplitudes e^{bound-best} <= 1 and axis factors e^{-2y_dξ_d - 2a|ξ_d|} <= 1, so nothing overflows.
    std::vector<double> amp;
    std::vector<std::array<int, 3>> idx;
    for (std::size_t k = 0; k < logamp.size(); ++k) {
        if (bound[k] < best - 80.0) continue;
        amp.push_back(std::exp(bound[k] - best));
        idx.push_back(cell_index[k]);
    }

    RadialRule rr = radial_rule(w.alpha, n, opt.radial_nodes);
    auto sphere = quad::sphere_rule(n, opt.sphere_resolution);
    const int M = g.points();
    std::vector<double> table(static_cast<std::size_t>(n) * M, 1.0);
    double total = 0.0;
    for (std::size_t j = 0; j < rr.rho.size(); ++j) {
        double shell = 0.0;
        for (const auto& node : sphere) {
            for (int d = 0; d < n; ++d) {
                double yd = a * rr.rho[j] * node.direction[d];
                for (int q = 0; q < M; ++q) {
                    double xq = g.frequency(q);
                    table[d * M + q] = std::exp(-2.0 * yd * xq - 2.0 * a * std::abs(xq));
                }
            }
            double s = 0.0;
            if (n == 1) {
                for (std::size_t k = 0; k < amp.size(); ++k) s += amp[k] * table[idx[k][0]];
            } else if (n == 2) {
                for (std::size_t k = 0; k < amp.size(); ++k) s += amp[k] * table[idx[k][0]] * table[M + idx[k][1]];
            } else {
                for (std::size_t k = 0; k < amp.size(); ++k)
                    s += amp[k] * table[idx[k][0]] * table[M + idx[k][1]] * table[2 * M + idx[k][2]];
            }
            shell += node.weight * s;
        }
        total += rr.weight[j] * shell;
    }
    total *= std::exp(best);
    return spatial_prefactor(w) * std::pow(a, n) * total * sp.cell;
}

// a^{2n-2s} Σ |f̂|² w(a|ξ|) Δξⁿ
double fourier_raw(const Spectrum& sp, double a, const WeightSpec& w) {
    const auto& g = *sp.grid;
    const int n = g.dim();
    std::unordered_map<std::int64_t, double> cache;
    double sum = 0.0;
    for (std::size_t k = 0; k < sp.index.size(); ++k) {
        std::int64_t k2 = g.wavenumber_squared(sp.index[k]);
        auto it = cache.find(k2);
        double wv;
        if (it != cache.end()) {
            wv = it->second;
        } else {
            wv = fourier_weight(a * g.frequency_spacing() * std::sqrt(static_cast<double>(k2)), w);
            cache.emplace(k2, wv);
        }
        sum += sp.power[k] * wv;
    }
    return std::pow(a, 2.0 * n - 2.0 * w.params.s()) * sum * sp.cell;
}

double delta_l1_radius(double rho, const Params& p) {
    std::vector<double> y(p.n, 0.0);
    y[0] = rho;
    return poisson::delta_l1(y, p);
}

bool admissible_for_monotonicity(const WeightSpec& w) {
    return w.alpha > std::max(2.0 * w.params.s() - 0.5 * (w.params.n + 1), 0.0);
}

void check_level(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("level a must be positive and finite");
}

}  // namespace

WeightSpec::WeightSpec(double alpha_, Params params_, Side side_) : alpha(alpha_), params(params_), side(side_) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be > 0");
}

double spatial_weight(std::span<const double> y, double a, const WeightSpec& w) {
    check_level(a);
    if (static_cast<int>(y.size()) != w.params.n) throw DomainError("y must have length n");
    double q = 0.0;
    for (double c : y) q += c * c;
    double t = 1.0 - q / (a * a);
    if (t <= 0.0) return 0.0;
    return spatial_prefactor(w) * std::pow(t, w.alpha - 1.0);
}

double fourier_weight(double xi_norm, const WeightSpec& w) {
    if (!(xi_norm >= 0.0)) throw DomainError("|xi| must be >= 0");
    if (xi_norm == 0.0) return fourier_weight_at_zero(w);
    const Complex lambda = w.params.lambda;
    // |r^λ K_λ(r)|² = e^{-2r} |e^{r} r^λ K_λ(r)|², paired with e^{-2r} I_β(2r)(2r)^{-β} scaled by e^{+2r}.
    Complex scaled_k = std::exp(lambda * std::log(xi_norm)) * specfun::bessel_k_scaled(lambda, xi_norm);
    return std::norm(scaled_k) * specfun::bessel_i_scaled_over_power(w.beta(), 2.0 * xi_norm);
}

double fourier_weight_at_zero(const WeightSpec& w) {
    Complex k0 = specfun::bessel_k_power(w.params.lambda, 0.0);
    return std::norm(k0) * std::pow(2.0, -w.beta()) / std::tgamma(w.beta() + 1.0);
}

double printed_weight_at_zero(const WeightSpec& w) {
    const double s = w.params.s();
    const double n = w.params.n;
    double g = std::tgamma(s);
    return std::pow(2.0, -w.alpha - 0.5 * n - 2.0 * s - 1.0) * g * g / std::tgamma(w.alpha + 0.5 * n);
}

double w_constant(const WeightSpec& w, int nodes) {
    RadialRule rr = radial_rule(w.alpha, w.params.n, nodes);
    double sum = 0.0;
    for (double wt : rr.weight) sum += wt;
    return std::sqrt(spatial_prefactor(w) * quad::sphere_area(w.params.n) * sum);
}

double w_constant_closed(const WeightSpec& w) {
    return std::sqrt(std::pow(2.0, -0.5 * w.params.n) / std::tgamma(w.alpha + 0.5 * w.params.n));
}

double level_constant(const WeightSpec& w, Normalization norm) {
    double c = std::pow(2.0, w.alpha + 1.0 - 2.0 * w.params.s()) / std::norm(specfun::gamma(w.params.lambda));
    if (norm == Normalization::unnormalized) c *= std::norm(poisson::c_function(w.params));
    return c;
}

double candidate_level_constant(const WeightSpec& w) {
    double g = std::tgamma(w.params.s());
    return std::pow(2.0, w.alpha + 2.0 * w.params.s() + 1.0) / (g * g);
}

double slice_energy(const Field& f, double a, std::span<const double> y, const Params& p, Normalization norm) {
    check_level(a);
    Field fhat = field::fourier(f);
    auto m = poisson::level_multiplier(f.grid(), a, p, y, norm);
    double s = 0.0;
    for (std::size_t i = 0; i < fhat.size(); ++i) s += std::norm(fhat[i] * m[i]);
    return s * std::pow(f.grid().frequency_spacing(), f.grid().dim());
}

BergmanEvaluation bergman_norm(const Field& f, double a, const WeightSpec& w, Method method, Normalization norm,
                               const TubeOptions& options, std::optional<double> constant) {
    check_level(a);
    if (f.grid().dim() != w.params.n) throw GridMismatch("field dimension differs from n");
    Spectrum sp = spectrum_of(f);
    BergmanEvaluation out;
    out.a = a;
    out.method = method;
    if (sp.index.empty()) return out;
    if (method == Method::tube_quadrature) {
        out.value = tube_value(sp, a, w, norm, options);
    } else {
        out.value = constant.value_or(level_constant(w, norm)) * fourier_raw(sp, a, w);
    }
    if (!std::isfinite(out.value)) throw QuadratureError("Bergman norm evaluation is not finite");
    return out;
}

Report level_isometry(const std::vector<Field>& inputs, const std::vector<double>& levels, const WeightSpec& w,
                      double spread_tolerance, Normalization norm, const TubeOptions& options) {
    if (inputs.empty() || levels.empty()) throw DomainError("level_isometry needs inputs and levels");
    Report rep("level_isometry");
    rep.params = weight_json(w);
    rep.params["levels"] = levels;
    rep.params["normalization"] = norm == Normalization::classical ? "classical" : "unnormalized";
    rep.params["radial_nodes"] = options.radial_nodes;

    struct Pair {
        std::size_t input;
        double a, tube, raw;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        Spectrum sp = spectrum_of(inputs[i]);
        for (double a : levels) {
            check_level(a);
            pairs.push_back({i, a, tube_value(sp, a, w, norm, options), fourier_raw(sp, a, w)});
        }
    }
    std::vector<double> ratios;
    for (const auto& pr : pairs) ratios.push_back(pr.tube / pr.raw);
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted.size() % 2 ? sorted[sorted.size() / 2]
                                      : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    double spread = (sorted.back() - sorted.front()) / median;

    auto& trace = rep.add_trace("level_isometry", {"a", "value", "reference", "deviation"});
    double worst = 0.0;
    for (const auto& pr : pairs) {
        double ref = median * pr.raw;
        double dev = std::abs(pr.tube - ref) / pr.tube;
        worst = std::max(worst, dev);
        trace.add_row({pr.a, pr.tube, ref, dev});
    }
    const double closed = level_constant(w, norm);
    const double w0 = fourier_weight_at_zero(w);
    const double wl = w_constant_closed(w);
    const double target = norm == Normalization::classical ? wl * wl
                                                            : wl * wl * std::norm(poisson::c_function(w.params));
    rep.values["constant"] = median;
    rep.values["ratio_spread"] = spread;
    rep.values["max_deviation"] = worst;
    rep.values["constant_closed_form"] = closed;
    rep.values["constant_candidate"] = candidate_level_constant(w);
    rep.values["constant_over_candidate"] = median / candidate_level_constant(w);
    rep.values["ratios"] = ratios;
    rep.check_at_most("relative spread of tube/fourier ratio", spread, spread_tolerance);
    rep.check_at_most("max |tube - c fourier| / tube", worst, spread_tolerance);
    rep.check_close("c·w(0) = w(λ)²" + std::string(norm == Normalization::classical ? "" : "|c(λ)|²"),
                    median * w0, target, 1e-6, "a -> 0 limit of the level isometry against the norm limit");
    return rep;
}

Report weight_law(const WeightSpec& w, int grid_points, double r_min, double r_max) {
    if (grid_points < 2 || !(r_min > 0.0) || !(r_max > r_min)) throw DomainError("weight_law needs a valid log grid");
    Report rep("weight_law");
    rep.params = weight_json(w);
    rep.params["grid_points"] = grid_points;
    rep.params["r_range"] = {r_min, r_max};
    auto& trace = rep.add_trace("fourier_weight", {"r", "w"});
    std::vector<double> rs, ws;
    for (int k = 0; k < grid_points; ++k) {
        double r = r_min * std::pow(r_max / r_min, static_cast<double>(k) / (grid_points - 1));
        rs.push_back(r);
        ws.push_back(fourier_weight(r, w));
        trace.add_row({r, ws.back()});
    }
    bool positive = true, decreasing = true;
    double first_increase = std::nan("");
    for (std::size_t k = 0; k < ws.size(); ++k) {
        positive = positive && ws[k] > 0.0;
        if (k > 0 && !(ws[k] < ws[k - 1])) {
            if (decreasing) first_increase = rs[k];
            decreasing = false;
        }
    }
    double w0 = fourier_weight_at_zero(w);
    decreasing = decreasing && w0 > ws.front();

    // Tail slope on [50, 200] by least squares in log-log.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = 32;
    for (int k = 0; k < m; ++k) {
        double r = 50.0 * std::pow(4.0, static_cast<double>(k) / (m - 1));
        double x = std::log(r), y = std::log(fourier_weight(r, w));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double n = w.params.n;
    const double expected = -(w.alpha + 0.5 * (n + 1.0) - 2.0 * w.params.s());

    rep.values["w0"] = w0;
    rep.values["w0_printed"] = printed_weight_at_zero(w);
    rep.values["w0_over_printed"] = w0 / printed_weight_at_zero(w);
    rep.values["tail_slope"] = slope;
    rep.values["tail_slope_expected"] = expected;
    rep.values["strictly_decreasing"] = decreasing;
    if (!decreasing) rep.values["first_increase_r"] = first_increase;

    // The leading correction is O(r^{2s}), so probe where r^{2s} <= 1e-9.
    const double r0 = std::min(1e-9, std::pow(1e-9, 0.5 / w.params.s()));
    rep.check_close("w(r) -> w(0) as r -> 0", fourier_weight(r0, w), w0, 1e-6);
    rep.check_true("w positive on the grid", positive);
    rep.check_abs("tail log-log slope", slope, expected, 0.05);
    if (admissible_for_monotonicity(w))
        rep.check_true("strictly decreasing on the grid", decreasing);
    return rep;
}

AdmissibilityResult admissibility_evaluate(const WeightSpec& w, int shells) {
    if (shells < 3) throw DomainError("admissibility needs at least 3 shells");
    const Params& p = w.params;
    const double alpha = w.alpha;
    const double scale = spatial_prefactor(w) * quad::sphere_area(p.n);
    auto integrand = [&](double rho) {
        double d = delta_l1_radius(rho, p);
        return std::pow((1.0 - rho) * (1.0 + rho), alpha - 1.0) * std::pow(rho, p.n - 1) * d * d;
    };

    AdmissibilityResult out;
    // Bulk 0 <= ρ <= 0.9.
    quad::Rule gl = quad::gauss_legendre(32);
    double bulk = 0.0;
    for (std::size_t j = 0; j < gl.size(); ++j) bulk += 0.45 * gl.weights[j] * integrand(0.45 * (1.0 + gl.nodes[j]));
    // Shells 1-10^{-k} <= ρ <= 1-10^{-k-1}, Gauss–Legendre in t = log(1-ρ).
    quad::Rule gs = quad::gauss_legendre(16);
    for (int k = 1; k <= shells; ++k) {
        double t_hi = -k * std::log(10.0), t_lo = -(k + 1) * std::log(10.0);
        double half = 0.5 * (t_hi - t_lo), mid = 0.5 * (t_hi + t_lo);
        double v = 0.0;
        for (std::size_t j = 0; j < gs.size(); ++j) {
            double t = mid + half * gs.nodes[j];
            double e = std::exp(t);
            v += half * gs.weights[j] * e * integrand(1.0 - e);
        }
        out.shells.push_back(scale * v);
    }
    double last = out.shells[shells - 1], prev = out.shells[shells - 2];
    out.shell_ratio = last / prev;
    out.finite = out.shell_ratio < 1.0;
    double sum = scale * bulk;
    for (double v : out.shells) sum += v;
    if (out.finite) sum += last * out.shell_ratio / (1.0 - out.shell_ratio);
    out.value = sum;

    for (int count : {8, 16, 32, 64, 128}) {
        RadialRule rr = radial_rule(alpha, p.n, count);
        double v = 0.0;
        for (std::size_t j = 0; j < rr.rho.size(); ++j) {
            double d = delta_l1_radius(rr.rho[j], p);
            v += rr.weight[j] * d * d;
        }
        out.refinement.push_back(spatial_prefactor(w) * quad::sphere_area(p.n) * v);
    }
    out.refinement_growth = out.refinement.back() / out.refinement.front();
    if (std::abs(out.shell_ratio - 1.0) < 1e-3)
        throw QuadratureError("boundary shells neither grow nor decay (ratio " + format_number(out.shell_ratio) + ")");
    return out;
}

Report admissibility(const WeightSpec& w, int shells) {
    AdmissibilityResult r = admissibility_evaluate(w, shells);
    Report rep("admissibility");
    rep.params = weight_json(w);
    rep.params["shells"] = shells;
    rep.values["finite"] = r.finite;
    rep.values["d_lambda"] = r.value;
    rep.values["shell_ratio"] = r.shell_ratio;
    rep.values["shells"] = r.shells;
    rep.values["refinement"] = r.refinement;
    rep.values["refinement_growth"] = r.refinement_growth;
    rep.values["threshold"] = std::max(2.0 * w.params.s() - 1.0, 0.0);
    auto& trace = rep.add_trace("admissibility_shells", {"epsilon", "shell_integral"});
    for (std::size_t k = 0; k < r.shells.size(); ++k) trace.add_row({std::pow(10.0, -(k + 1.0)), r.shells[k]});
    if (r.finite) {
        double wl = w_constant_closed(w);
        if (w.params.lambda.imag() == 0.0)
            rep.check_at_least("d(λ) >= w(λ)²", r.value, wl * wl * (1.0 - 1e-10), "‖δ‖₁ >= 1 for real λ");
    }
    return rep;
}

Report admissibility_threshold(const Params& p, double alpha_lo, double alpha_hi, double width) {
    if (!(alpha_lo > 0.0 && alpha_hi > alpha_lo)) throw DomainError("need 0 < alpha_lo < alpha_hi");
    Report rep("admissibility_threshold");
    rep.params = {{"n", p.n}, {"lambda", lambda_json(p)}, {"bracket", {alpha_lo, alpha_hi}}, {"width", width}};
    auto& trace = rep.add_trace("bisection", {"alpha", "finite", "shell_ratio"});
    auto probe = [&](double alpha, bool& ambiguous) {
        ambiguous = false;
        try {
            auto r = admissibility_evaluate(WeightSpec(alpha, p));
            trace.add_row({alpha, r.finite ? 1.0 : 0.0, r.shell_ratio});
            return r.finite;
        } catch (const QuadratureError&) {
            ambiguous = true;
            trace.add_row({alpha, std::nan(""), 1.0});
            return false;
        }
    };
    bool amb = false;
    double lo = alpha_lo, hi = alpha_hi;
    if (!probe(hi, amb)) throw DomainError("upper alpha bracket is not admissible");
    double threshold;
    if (probe(lo, amb)) {
        threshold = lo;
        rep.values["note"] = "finite at the lower bracket; the transition lies at or below it";
    } else {
        while (hi - lo > width) {
            double mid = 0.5 * (lo + hi);
            bool finite = probe(mid, amb);
            if (amb) {
                lo = hi = mid;
                break;
            }
            (finite ? hi : lo) = mid;
        }
        threshold = 0.5 * (lo + hi);
    }
    const double expected = std::max(2.0 * p.s() - 1.0, 0.0);
    rep.values["threshold"] = threshold;
    rep.values["bracket"] = {lo, hi};
    rep.values["expected"] = expected;
    rep.check_abs("threshold = max{2s-1, 0}", threshold, expected, 0.1);
    return rep;
}

Report banach_norm(const Field& f, const WeightSpec& w, const std::vector<double>& a_grid,
                   const TubeOptions& options) {
    if (a_grid.size() < 2) throw DomainError("a_grid needs at least two levels");
    auto [mn, mx] = std::minmax_element(a_grid.begin(), a_grid.end());
    if (*mx / *mn < 100.0) throw DomainError("a_grid must span at least two decades");
    std::vector<double> levels = a_grid;
    std::sort(levels.begin(), levels.end());

    const Params& p = w.params;
    Spectrum sp = spectrum_of(f);
    Report rep("banach_norm");
    rep.params = weight_json(w);
    rep.params["a_grid"] = levels;
    rep.params["normalization"] = "unnormalized";
    auto& trace = rep.add_trace("banach_trace", {"a", "value"});
    double sup = 0.0, arg = levels.front();
    std::vector<double> values;
    for (double a : levels) {
        check_level(a);
        double v = sp.index.empty() ? 0.0
                                    : std::pow(a, p.s() - p.n) *
                                          std::sqrt(tube_value(sp, a, w, Normalization::unnormalized, options));
        values.push_back(v);
        trace.add_row({a, v});
        if (v > sup) {
            sup = v;
            arg = a;
        }
    }
    rep.values["sup"] = sup;
    rep.values["argmax_a"] = arg;
    rep.values["sup_at_smallest_a"] = arg == levels.front();
    if (p.lambda.imag() == 0.0 && admissible_for_monotonicity(w)) {
        bool nonincreasing = true;
        for (std::size_t k = 1; k < values.size(); ++k)
            nonincreasing = nonincreasing && values[k] <= values[k - 1] * (1.0 + 1e-12);
        rep.check_true("trace non-increasing in a", nonincreasing);
    }
    return rep;
}

Report isometry_ratio(const std::vector<Field>& inputs, const WeightSpec& w, const std::vector<double>& a_grid,
                      double cv_tolerance, const TubeOptions& options) {
    if (inputs.size() < 2) throw DomainError("isometry_ratio needs at least two inputs");
    Report rep("isometry_ratio");
    rep.params = weight_json(w);
    rep.params["a_grid"] = a_grid;
    rep.params["inputs"] = inputs.size();
    std::vector<std::vector<double>> rows;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        Report b = banach_norm(inputs[i], w, a_grid, options);
        double sup = b.values["sup"].get<double>();
        double l2 = field::norm(inputs[i]);
        ratios.push_back(sup / l2);
        rows.push_back({static_cast<double>(i), sup, l2, sup / l2});
        rep.absorb(b, "input " + std::to_string(i) + ": ");
    }
    auto& trace = rep.add_trace("isometry_ratio", {"input", "banach_norm", "l2_norm", "ratio"});
    for (auto& row : rows) trace.add_row(std::move(row));
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= ratios.size();
    double var = 0.0;
    for (double r : ratios) var += (r - mean) * (r - mean);
    double cv = std::sqrt(var / (ratios.size() - 1)) / mean;
    double reference = w_constant_closed(w) * std::abs(poisson::c_function(w.params));
    rep.values["ratios"] = ratios;
    rep.values["mean_ratio"] = mean;
    rep.values["coefficient_of_variation"] = cv;
    rep.values["w_lambda_times_abs_c"] = reference;
    rep.values["mean_over_reference"] = mean / reference;
    rep.check_at_most("coefficient of variation of banach/L2", cv, cv_tolerance);
    return rep;
}

Report norm_limit(const Field& f, const WeightSpec& w, const std::vector<double>& a_ray, const TubeOptions& options) {
    if (a_ray.size() < 2) throw DomainError("a_ray needs at least two levels");
    for (std::size_t k = 1; k < a_ray.size(); ++k)
        if (!(a_ray[k] < a_ray[k - 1])) throw DomainError("a_ray must be strictly decreasing");
    const double h = f.grid().spacing();
    if (a_ray.back() < 4.0 * h)
        throw ResolutionError("smallest level " + format_number(a_ray.back()) + " is below 4h = " +
                              format_number(4.0 * h));
    const Params& p = w.params;
    Spectrum sp = spectrum_of(f);
    const double fnorm = field::norm(f);
    const double scale = w_constant_closed(w) * std::abs(poisson::c_function(p));

    Report rep("norm_limit");
    rep.params = weight_json(w);
    rep.params["a_ray"] = a_ray;
    rep.params["normalization"] = "unnormalized";
    auto& trace = rep.add_trace("norm_limit", {"a", "value", "reference", "deviation"});
    std::vector<double> values, deviations;
    for (double a : a_ray) {
        double v = std::pow(a, p.s() - p.n) * std::sqrt(tube_value(sp, a, w, Normalization::unnormalized, options)) /
                   scale;
        double dev = std::abs(v - fnorm) / fnorm;
        values.push_back(v);
        deviations.push_back(dev);
        trace.add_row({a, v, fnorm, dev});
    }
    rep.values["trace"] = values;
    rep.values["deviations"] = deviations;
    rep.values["l2_norm"] = fnorm;
    const std::size_t tail = std::min<std::size_t>(5, deviations.size());
    bool decreasing = true;
    for (std::size_t k = deviations.size() - tail + 1; k < deviations.size(); ++k)
        decreasing = decreasing && deviations[k] < deviations[k - 1];
    rep.check_true("deviation decreasing over the final " + std::to_string(tail) + " levels", decreasing);

    double sup = *std::max_element(values.begin(), values.end());
    rep.values["sup"] = sup;
    rep.values["sup_minus_l2"] = sup - fnorm;
    if (p.lambda.imag() == 0.0) {
        bool monotone = true;
        for (std::size_t k = 1; k < values.size(); ++k) monotone = monotone && values[k] >= values[k - 1] * (1.0 - 1e-12);
        rep.check_true("trace non-decreasing as a decreases (sup is the a -> 0 limit)", monotone);
        rep.check_at_most("sup over the ray <= ‖f‖₂", sup, fnorm * (1.0 + 1e-10));
    }
    return rep;
}

}  // namespace horo::bergman
