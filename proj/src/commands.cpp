#include "horo/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include "horo/bergman.hpp"
#include "horo/crown.hpp"
#include "horo/error.hpp"
#include "horo/extension.hpp"
#include "horo/poisson.hpp"
#include "horo/specfun.hpp"

namespace horo::commands {

namespace {

using config::Command;
using config::RunConfig;
using field::Field;

std::vector<double> logspace(double from, double to, int count) {
    std::vector<double> v;
    for (int k = 0; k < count; ++k) v.push_back(from * std::pow(to / from, static_cast<double>(k) / (count - 1)));
    return v;
}

std::vector<double> list_or(const json& options, const char* key, std::vector<double> fallback) {
    return options.contains(key) ? options[key].get<std::vector<double>>() : fallback;
}

template <class T>
T value_or(const json& options, const char* key, T fallback) {
    return options.contains(key) ? options[key].get<T>() : fallback;
}

poisson::Normalization normalization(const json& options) {
    return value_or<std::string>(options, "normalization", "classical") == "unnormalized"
               ? poisson::Normalization::unnormalized
               : poisson::Normalization::classical;
}

json describe(const config::InputSpec& spec) {
    if (spec.from_file()) return {{"path", spec.path.string()}};
    json j = spec.arguments;
    j["builtin"] = spec.builtin;
    return j;
}

std::vector<Field> inputs(const RunConfig& cfg) {
    std::vector<Field> out;
    for (const auto& spec : cfg.inputs) out.push_back(config::build_input(spec, cfg.params->n, cfg.grid, cfg.seed));
    return out;
}

bergman::WeightSpec weight(const RunConfig& cfg) { return bergman::WeightSpec(*cfg.alpha, *cfg.params); }

// Finest level allowed on the input's grid.
double finest(const Field& f) { return 4.0 * f.grid().spacing(); }

// Runs `body` once per input, tagging each report with the input it came from.
template <class Body>
void per_input(const RunConfig& cfg, std::vector<Report>& out, Body body) {
    auto fields = inputs(cfg);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        for (Report& r : body(fields[i])) {
            r.params["input"] = describe(cfg.inputs[i]);
            out.push_back(std::move(r));
        }
    }
}

std::vector<Report> transform(const RunConfig& cfg) {
    const auto& p = *cfg.params;
    auto levels = list_or(cfg.options, "levels", {1.0, 0.5, 0.25});
    auto method = value_or<std::string>(cfg.options, "method", "fft") == "quadrature" ? poisson::Method::quadrature
                                                                                      : poisson::Method::fft;
    auto norm = normalization(cfg.options);
    bool dual = value_or(cfg.options, "dual_path", false);
    std::vector<Report> out;
    per_input(cfg, out, [&](const Field& f) {
        std::vector<Report> reports;
        Report rep("transform");
        rep.params = {{"n", p.n},
                      {"lambda", {p.lambda.real(), p.lambda.imag()}},
                      {"levels", levels},
                      {"method", method == poisson::Method::fft ? "fft" : "quadrature"},
                      {"normalization", norm == poisson::Normalization::classical ? "classical" : "unnormalized"}};
        auto& trace = rep.add_trace("transform", {"a", "l2_norm", "linf_norm"});
        for (double a : levels) {
            Field phi = poisson::poisson_transform(f, a, p, method, norm);
            double l2 = field::norm(phi), linf = field::norm(phi, field::NormKind::Linf);
            trace.add_row({a, l2, linf});
            rep.check_true("finite transform at a=" + format_number(a), std::isfinite(l2));
        }
        reports.push_back(std::move(rep));
        if (norm == poisson::Normalization::classical) reports.push_back(poisson::young_bound(f, p, levels));
        if (dual)
            for (double a : levels) reports.push_back(poisson::dual_path(f, a, p));
        return reports;
    });
    return out;
}

std::vector<Report> slice(const RunConfig& cfg) {
    const auto& p = *cfg.params;
    auto levels = list_or(cfg.options, "levels", {1.0});
    std::vector<std::vector<double>> directions;
    if (cfg.options.contains("directions")) {
        directions = cfg.options["directions"].get<std::vector<std::vector<double>>>();
    } else {
        std::vector<double> e1(p.n, 0.0);
        e1[0] = 1.0;
        directions.push_back(e1);
    }
    std::vector<Report> out;
    per_input(cfg, out, [&](const Field& f) { return std::vector<Report>{poisson::slice_bound(f, p, levels, directions)}; });
    return out;
}

std::vector<Report> delta_asymptotics(const RunConfig& cfg) {
    auto gammas = list_or(cfg.options, "gammas", logspace(0.5, 1e-3, 12));
    return {poisson::delta_asymptotics(*cfg.params, gammas, value_or(cfg.options, "max_residual", 0.05))};
}

std::vector<Report> admissibility(const RunConfig& cfg) {
    std::vector<Report> out;
    if (cfg.alpha) out.push_back(bergman::admissibility(weight(cfg), value_or(cfg.options, "shells", 8)));
    if (cfg.options.contains("threshold")) {
        const json& t = cfg.options["threshold"];
        out.push_back(bergman::admissibility_threshold(*cfg.params, t["alpha_lo"].get<double>(),
                                                       t["alpha_hi"].get<double>(), value_or(t, "width", 0.05)));
    }
    return out;
}

std::vector<Report> isometry(const RunConfig& cfg) {
    auto fields = inputs(cfg);
    Report r = bergman::level_isometry(fields, list_or(cfg.options, "levels", {0.25, 0.5, 1.0, 2.0, 4.0}), weight(cfg),
                                       value_or(cfg.options, "spread_tolerance", 1e-5), normalization(cfg.options));
    json described = json::array();
    for (const auto& spec : cfg.inputs) described.push_back(describe(spec));
    r.params["inputs"] = described;
    return {r};
}

std::vector<Report> banach_norm(const RunConfig& cfg) {
    auto a_grid = list_or(cfg.options, "a_grid", logspace(1e-4, 1.0, 9));
    auto fields = inputs(cfg);
    if (fields.size() == 1) {
        Report r = bergman::banach_norm(fields[0], weight(cfg), a_grid);
        r.params["input"] = describe(cfg.inputs[0]);
        return {r};
    }
    Report r = bergman::isometry_ratio(fields, weight(cfg), a_grid, value_or(cfg.options, "cv_tolerance", 1e-3));
    json described = json::array();
    for (const auto& spec : cfg.inputs) described.push_back(describe(spec));
    r.params["inputs"] = described;
    return {r};
}

std::vector<Report> norm_limit(const RunConfig& cfg) {
    std::vector<Report> out;
    per_input(cfg, out, [&](const Field& f) {
        auto ray = list_or(cfg.options, "a_ray", logspace(1.0, finest(f), 8));
        return std::vector<Report>{bergman::norm_limit(f, weight(cfg), ray)};
    });
    return out;
}

std::vector<Report> extension_run(const RunConfig& cfg) {
    const auto& p = *cfg.params;
    std::vector<Report> out;
    std::size_t index = 0;
    per_input(cfg, out, [&](const Field& f) {
        auto levels = list_or(cfg.options, "t_levels", logspace(1.0, finest(f), 10));
        std::vector<Report> reports;
        reports.push_back(extension::boundary_recovery(f, p, levels, value_or(cfg.options, "tail", 4),
                                                       value_or(cfg.options, "final_tolerance", 0.0)));
        reports.push_back(extension::ode_convergence(f, p, value_or(cfg.options, "ode_t0", 0.5),
                                                     list_or(cfg.options, "ode_spacings", {0.08, 0.04, 0.02, 0.01})));
        if (value_or(cfg.options, "write_levels", false))
            extension::write_extension(extension::extend(f, levels, p),
                                       cfg.output_dir / ("extension_" + std::to_string(index)));
        ++index;
        return reports;
    });
    return out;
}

std::vector<Report> crown_probe(const RunConfig& cfg) {
    crown::MatrixR y;
    if (cfg.options.contains("Y")) {
        const json& m = cfg.options["Y"];
        int n = static_cast<int>(m.size());
        y = crown::MatrixR::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) y(i, j) = m[i][j].get<double>();
    } else {
        const json& e = cfg.options["entry"];
        y = crown::UpperNilpotent::unit(cfg.options["n"].get<int>(), e[0].get<int>(), e[1].get<int>(),
                                        e[2].get<double>())
                .Y;
    }
    crown::UpperNilpotent Y(y);
    std::vector<Report> out;
    out.push_back(crown::tube_probe(Y, value_or(cfg.options, "samples", 512), value_or(cfg.options, "radius", 5.0),
                                    cfg.seed));
    if (cfg.options.contains("invariance_trials"))
        out.push_back(crown::invariance(Y.n(), cfg.options["invariance_trials"].get<int>(), cfg.seed));
    if (cfg.options.contains("iwasawa_trials"))
        out.push_back(crown::iwasawa_diagonal(Y.n(), cfg.options["iwasawa_trials"].get<int>(), cfg.seed));
    return out;
}

std::vector<Report> dispatch(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::transform: return transform(cfg);
        case Command::slice: return slice(cfg);
        case Command::delta_asymptotics: return delta_asymptotics(cfg);
        case Command::admissibility: return admissibility(cfg);
        case Command::isometry: return isometry(cfg);
        case Command::banach_norm: return banach_norm(cfg);
        case Command::norm_limit: return norm_limit(cfg);
        case Command::extension: return extension_run(cfg);
        case Command::crown_probe: return crown_probe(cfg);
        case Command::specfun_selftest: return {specfun::self_test(cfg.seed)};
    }
    throw std::logic_error("unhandled command");
}

std::string file_stem(const std::string& name) {
    std::string out;
    for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

}  // namespace

std::vector<Report> execute(const RunConfig& cfg) {
    try {
        return dispatch(cfg);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        Report r(config::command_name(cfg.command));
        r.check_true("error", false, e.what());
        return {r};
    }
}

RunResult run(const RunConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.output_dir);
    std::vector<Report> reports = execute(cfg);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    RunResult result;
    bool pass = true;
    json list = json::array();
    json trace_files = json::array();
    std::set<std::string> used;
    for (const Report& r : reports) {
        pass = pass && r.passed();
        list.push_back(r.to_json());
        for (const Trace& t : r.traces()) {
            std::string stem = "trace_" + file_stem(t.name);
            std::string name = stem + ".csv";
            for (int k = 2; used.contains(name); ++k) name = stem + "_" + std::to_string(k) + ".csv";
            used.insert(name);
            t.write_csv(cfg.output_dir / name);
            trace_files.push_back(name);
            result.files.push_back(cfg.output_dir / name);
        }
    }
    result.document = {{"command", config::command_name(cfg.command)},
                       {"config", cfg.source},
                       {"seed", cfg.seed},
                       {"reports", list},
                       {"traces", trace_files},
                       {"pass", pass},
                       {"wall_time_s", wall}};
    std::ofstream out(cfg.output_dir / "report.json");
    out << result.document.dump(2) << '\n';
    result.files.push_back(cfg.output_dir / "report.json");
    result.exit_code = pass ? 0 : 1;
    return result;
}

}  // namespace horo::commands
