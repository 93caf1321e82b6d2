#include "horo/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "horo/error.hpp"
#include "horo/testfunctions.hpp"

namespace horo::config {

namespace {

const std::map<Command, std::set<std::string>>& allowed_options() {
    static const std::map<Command, std::set<std::string>> table{
        {Command::transform, {"levels", "method", "normalization", "dual_path"}},
        {Command::slice, {"levels", "directions"}},
        {Command::delta_asymptotics, {"gammas", "max_residual"}},
        {Command::admissibility, {"shells", "threshold"}},
        {Command::isometry, {"levels", "spread_tolerance", "normalization"}},
        {Command::banach_norm, {"a_grid", "cv_tolerance"}},
        {Command::norm_limit, {"a_ray"}},
        {Command::extension, {"t_levels", "tail", "final_tolerance", "ode_t0", "ode_spacings", "write_levels"}},
        {Command::crown_probe, {"n", "Y", "entry", "samples", "radius", "invariance_trials", "iwasawa_trials"}},
        {Command::specfun_selftest, {}},
    };
    return table;
}

bool needs_params(Command c) { return c != Command::crown_probe && c != Command::specfun_selftest; }

bool needs_weight(Command c, const json& options) {
    switch (c) {
        case Command::isometry:
        case Command::banach_norm:
        case Command::norm_limit:
            return true;
        case Command::admissibility:
            return !options.contains("threshold");
        default:
            return false;
    }
}

bool needs_input(Command c) {
    switch (c) {
        case Command::transform:
        case Command::slice:
        case Command::isometry:
        case Command::banach_norm:
        case Command::norm_limit:
        case Command::extension:
            return true;
        default:
            return false;
    }
}

const std::map<std::string, std::set<std::string>>& builtin_arguments() {
    static const std::map<std::string, std::set<std::string>> table{
        {"gaussian", {"width"}},
        {"bump", {"radius"}},
        {"plateau", {"half_width", "taper"}},
        {"random-bandlimited", {"cutoff", "seed", "packets"}},
        {"constant", {"value"}},
    };
    return table;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

std::string join(const std::set<std::string>& items) { return join(std::vector<std::string>(items.begin(), items.end()), ", "); }

class Checker {
public:
    std::vector<std::string> errors;

    void fail(const std::string& field, const std::string& message) { errors.push_back(field + ": " + message); }

    std::optional<double> positive(const json& j, const std::string& field) {
        if (!j.is_number()) return fail(field, "expected a number"), std::nullopt;
        double v = j.get<double>();
        if (!(v > 0.0) || !std::isfinite(v)) return fail(field, "must be a finite number > 0"), std::nullopt;
        return v;
    }

    void positive_list(const json& j, const std::string& field, bool below_one = false) {
        if (!j.is_array() || j.empty()) return fail(field, "expected a non-empty array of numbers");
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto v = positive(j[i], field + "[" + std::to_string(i) + "]");
            if (v && below_one && *v >= 1.0) fail(field + "[" + std::to_string(i) + "]", "must be < 1");
        }
    }

    void integer_at_least(const json& j, const std::string& field, long long lo) {
        if (!j.is_number_integer()) return fail(field, "expected an integer");
        if (j.get<long long>() < lo) fail(field, "must be >= " + std::to_string(lo));
    }

    void one_of(const json& j, const std::string& field, const std::set<std::string>& choices) {
        if (!j.is_string() || !choices.contains(j.get<std::string>())) fail(field, "expected one of " + join(choices));
    }

    void boolean(const json& j, const std::string& field) {
        if (!j.is_boolean()) fail(field, "expected true or false");
    }
};

std::optional<poisson::Params> check_params(const json& j, Checker& ck) {
    if (!j.is_object()) return ck.fail("params", "expected an object with n and lambda"), std::nullopt;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "n" && it.key() != "lambda") ck.fail("params." + it.key(), "unknown field");
    std::optional<int> n;
    if (!j.contains("n")) {
        ck.fail("params.n", "required");
    } else if (!j["n"].is_number_integer() || j["n"].get<int>() < 1 || j["n"].get<int>() > 3) {
        ck.fail("params.n", "expected an integer in {1, 2, 3}");
    } else {
        n = j["n"].get<int>();
    }
    std::optional<poisson::Complex> lambda;
    if (!j.contains("lambda")) {
        ck.fail("params.lambda", "required");
    } else {
        const json& l = j["lambda"];
        if (l.is_number()) {
            lambda = poisson::Complex(l.get<double>(), 0.0);
        } else if (l.is_array() && l.size() == 2 && l[0].is_number() && l[1].is_number()) {
            lambda = poisson::Complex(l[0].get<double>(), l[1].get<double>());
        } else {
            ck.fail("params.lambda", "expected a number or [re, im]");
        }
        if (lambda && !(lambda->real() > 0.0)) {
            ck.fail("params.lambda", "Re λ > 0 is required (got Re λ = " + std::to_string(lambda->real()) + ")");
            lambda.reset();
        }
        if (lambda && !(std::isfinite(lambda->real()) && std::isfinite(lambda->imag()))) {
            ck.fail("params.lambda", "must be finite");
            lambda.reset();
        }
    }
    if (n && lambda) return poisson::Params(*n, *lambda);
    return std::nullopt;
}

std::optional<InputSpec> check_input(const json& j, const std::string& field, Checker& ck) {
    if (!j.is_object()) return ck.fail(field, "expected an object with builtin or path"), std::nullopt;
    InputSpec spec;
    bool has_builtin = j.contains("builtin"), has_path = j.contains("path");
    if (has_builtin == has_path) return ck.fail(field, "exactly one of builtin or path is required"), std::nullopt;
    if (has_path) {
        if (!j["path"].is_string() || j["path"].get<std::string>().empty())
            return ck.fail(field + ".path", "expected a non-empty string"), std::nullopt;
        if (j.size() != 1) ck.fail(field, "a Field dump takes no other fields");
        spec.path = j["path"].get<std::string>();
        return spec;
    }
    if (!j["builtin"].is_string() || !builtin_arguments().contains(j["builtin"].get<std::string>())) {
        std::set<std::string> names;
        for (const auto& [name, args] : builtin_arguments()) names.insert(name);
        return ck.fail(field + ".builtin", "expected one of " + join(names)), std::nullopt;
    }
    spec.builtin = j["builtin"].get<std::string>();
    const auto& allowed = builtin_arguments().at(spec.builtin);
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "builtin") continue;
        std::string sub = field + "." + it.key();
        if (!allowed.contains(it.key())) {
            ck.fail(sub, "unknown argument for " + spec.builtin + " (allowed: " + join(allowed) + ")");
        } else if (it.key() == "seed") {
            ck.integer_at_least(it.value(), sub, 0);
        } else if (it.key() == "packets") {
            ck.integer_at_least(it.value(), sub, 1);
        } else if (it.key() == "value") {
            if (!it.value().is_number()) ck.fail(sub, "expected a number");
        } else {
            ck.positive(it.value(), sub);
        }
        spec.arguments[it.key()] = it.value();
    }
    return spec;
}

void check_options(Command c, const json& options, std::optional<int> n, Checker& ck) {
    const auto& allowed = allowed_options().at(c);
    for (auto it = options.begin(); it != options.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        std::string field = "options." + key;
        if (!allowed.contains(key)) {
            ck.fail(field, "unknown option for " + command_name(c) +
                               (allowed.empty() ? " (it takes none)" : " (allowed: " + join(allowed) + ")"));
            continue;
        }
        if (key == "levels" || key == "a_grid" || key == "a_ray" || key == "t_levels" || key == "ode_spacings") {
            ck.positive_list(v, field);
        } else if (key == "gammas") {
            ck.positive_list(v, field, true);
        } else if (key == "max_residual" || key == "spread_tolerance" || key == "cv_tolerance" || key == "ode_t0" ||
                   key == "radius") {
            ck.positive(v, field);
        } else if (key == "final_tolerance") {
            if (!v.is_number() || v.get<double>() < 0.0) ck.fail(field, "expected a number >= 0");
        } else if (key == "method") {
            ck.one_of(v, field, {"fft", "quadrature"});
        } else if (key == "normalization") {
            ck.one_of(v, field, {"classical", "unnormalized"});
        } else if (key == "dual_path" || key == "write_levels") {
            ck.boolean(v, field);
        } else if (key == "shells") {
            ck.integer_at_least(v, field, 3);
        } else if (key == "tail") {
            ck.integer_at_least(v, field, 2);
        } else if (key == "samples" || key == "invariance_trials" || key == "iwasawa_trials") {
            ck.integer_at_least(v, field, 1);
        } else if (key == "n") {
            if (!v.is_number_integer() || v.get<int>() < 2 || v.get<int>() > 4)
                ck.fail(field, "expected an integer in {2, 3, 4}");
        } else if (key == "directions") {
            if (!v.is_array() || v.empty()) {
                ck.fail(field, "expected a non-empty array of vectors");
                continue;
            }
            for (std::size_t i = 0; i < v.size(); ++i) {
                const json& d = v[i];
                bool ok = d.is_array() && (!n || static_cast<int>(d.size()) == *n) &&
                          std::all_of(d.begin(), d.end(), [](const json& x) { return x.is_number(); });
                if (!ok) ck.fail(field + "[" + std::to_string(i) + "]", "expected a numeric vector of length n");
            }
        } else if (key == "threshold") {
            if (!v.is_object() || !v.contains("alpha_lo") || !v.contains("alpha_hi")) {
                ck.fail(field, "expected an object with alpha_lo, alpha_hi and optional width");
                continue;
            }
            for (auto t = v.begin(); t != v.end(); ++t) {
                if (t.key() == "alpha_lo" || t.key() == "alpha_hi" || t.key() == "width")
                    ck.positive(t.value(), field + "." + t.key());
                else
                    ck.fail(field + "." + t.key(), "unknown field");
            }
            if (v["alpha_lo"].is_number() && v["alpha_hi"].is_number() &&
                v["alpha_lo"].get<double>() >= v["alpha_hi"].get<double>())
                ck.fail(field, "alpha_lo must be below alpha_hi");
        } else if (key == "Y") {
            bool ok = v.is_array() && v.size() >= 2 && v.size() <= 4;
            for (std::size_t i = 0; ok && i < v.size(); ++i) {
                ok = v[i].is_array() && v[i].size() == v.size() &&
                     std::all_of(v[i].begin(), v[i].end(), [](const json& x) { return x.is_number(); });
                for (std::size_t j = 0; ok && j <= i; ++j) ok = v[i][j].get<double>() == 0.0;
            }
            if (!ok) ck.fail(field, "expected a strictly upper triangular square matrix of size 2 to 4");
        } else if (key == "entry") {
            bool ok = v.is_array() && v.size() == 3 && v[0].is_number_integer() && v[1].is_number_integer() &&
                      v[2].is_number() && v[0].get<int>() >= 0 && v[0].get<int>() < v[1].get<int>();
            if (!ok) ck.fail(field, "expected [i, j, value] with 0 <= i < j (0-based)");
        }
    }
    if (c == Command::crown_probe) {
        bool has_y = options.contains("Y"), has_entry = options.contains("entry");
        if (has_y == has_entry) ck.fail("options", "crown-probe needs exactly one of Y or entry");
        if (has_entry && !options.contains("n")) ck.fail("options.n", "required with entry");
        if (has_entry && options.contains("n") && options["n"].is_number_integer() && options["entry"].is_array() &&
            options["entry"].size() == 3 && options["entry"][1].is_number_integer() &&
            options["entry"][1].get<int>() >= options["n"].get<int>())
            ck.fail("options.entry", "index out of range for n");
    }
}

std::string position_of(const std::string_view text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"transform", "slice",       "delta-asymptotics", "admissibility",
                                                "isometry",  "banach-norm", "norm-limit",        "extension",
                                                "crown-probe", "specfun-selftest"};
    return names;
}

std::string command_name(Command c) { return command_names().at(static_cast<std::size_t>(c)); }

Validation validate(std::string_view text) {
    Validation result;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        auto colon = what.rfind(": ");
        result.errors.push_back(position_of(text, e.byte) + ": " +
                                (colon == std::string::npos ? what : what.substr(colon + 2)));
        return result;
    }
    Checker ck;
    if (!doc.is_object()) {
        ck.fail("(root)", "expected a JSON object");
        result.errors = ck.errors;
        return result;
    }
    static const std::set<std::string> top{"command", "params", "weight", "grid", "input", "output_dir", "seed", "options"};
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!top.contains(it.key())) ck.fail(it.key(), "unknown field (allowed: " + join(top) + ")");

    RunConfig cfg;
    cfg.source = doc;
    std::optional<Command> command;
    const auto& names = command_names();
    if (!doc.contains("command")) {
        ck.fail("command", "required; valid commands: " + join(names, ", "));
    } else {
        auto it = doc["command"].is_string() ? std::find(names.begin(), names.end(), doc["command"].get<std::string>())
                                             : names.end();
        if (it == names.end())
            ck.fail("command", "unknown command; valid commands: " + join(names, ", "));
        else
            command = static_cast<Command>(it - names.begin());
    }

    if (doc.contains("params")) cfg.params = check_params(doc["params"], ck);
    if (doc.contains("weight")) {
        const json& w = doc["weight"];
        if (!w.is_object() || !w.contains("alpha")) {
            ck.fail("weight", "expected an object with alpha");
        } else {
            for (auto it = w.begin(); it != w.end(); ++it)
                if (it.key() != "alpha") ck.fail("weight." + it.key(), "unknown field");
            cfg.alpha = ck.positive(w["alpha"], "weight.alpha");
        }
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        if (!g.is_object()) {
            ck.fail("grid", "expected an object with extent and points");
        } else {
            for (auto it = g.begin(); it != g.end(); ++it) {
                if (it.key() == "extent") {
                    if (auto v = ck.positive(it.value(), "grid.extent")) cfg.grid.extent = *v;
                } else if (it.key() == "points") {
                    const json& p = it.value();
                    if (!p.is_number_integer() || p.get<long long>() < 8 || p.get<long long>() % 2 != 0)
                        ck.fail("grid.points", "expected an even integer >= 8");
                    else
                        cfg.grid.points = p.get<int>();
                } else {
                    ck.fail("grid." + it.key(), "unknown field");
                }
            }
        }
    }
    if (doc.contains("input")) {
        const json& in = doc["input"];
        if (in.is_array()) {
            if (in.empty()) ck.fail("input", "expected at least one input");
            for (std::size_t i = 0; i < in.size(); ++i)
                if (auto spec = check_input(in[i], "input[" + std::to_string(i) + "]", ck)) cfg.inputs.push_back(*spec);
        } else if (auto spec = check_input(in, "input", ck)) {
            cfg.inputs.push_back(*spec);
        }
    }
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty())
            ck.fail("output_dir", "expected a non-empty string");
        else
            cfg.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned())
            ck.fail("seed", "expected a non-negative integer");
        else
            cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("options")) {
        if (!doc["options"].is_object()) ck.fail("options", "expected an object");
        else cfg.options = doc["options"];
    }

    if (command) {
        cfg.command = *command;
        if (needs_params(*command) && !doc.contains("params")) ck.fail("params", "required by " + command_name(*command));
        if (needs_weight(*command, cfg.options) && !doc.contains("weight"))
            ck.fail("weight", "required by " + command_name(*command));
        if (needs_input(*command) && !doc.contains("input")) ck.fail("input", "required by " + command_name(*command));
        if (cfg.options.is_object()) {
            std::optional<int> n;
            if (cfg.params) n = cfg.params->n;
            check_options(*command, cfg.options, n, ck);
        }
    }

    result.errors = ck.errors;
    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

RunConfig parse(std::string_view text) {
    Validation v = validate(text);
    if (!v.config) throw ConfigError(join(v.errors, "\n"));
    return *v.config;
}

RunConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

field::Field build_input(const InputSpec& spec, int dim, const GridSettings& grid, std::uint64_t seed) {
    if (spec.from_file()) {
        if (!std::filesystem::exists(spec.path)) throw ConfigError("input.path: no such file " + spec.path.string());
        field::Field f = field::read_binary(spec.path);
        if (f.grid().dim() != dim)
            throw ConfigError("input.path: Field dump has dimension " + std::to_string(f.grid().dim()) +
                              " but params.n is " + std::to_string(dim));
        return f;
    }
    const json& a = spec.arguments;
    auto arg = [&](const char* key, double fallback) { return a.contains(key) ? a[key].get<double>() : fallback; };
    auto g = field::SpectralGrid::create(dim, grid.extent, grid.points);
    if (spec.builtin == "gaussian") return testfn::gaussian(g, arg("width", 1.0));
    if (spec.builtin == "bump") return testfn::bump(g, arg("radius", 4.0));
    if (spec.builtin == "plateau") return testfn::plateau(g, arg("half_width", 0.5 * grid.extent), arg("taper", 2.0));
    if (spec.builtin == "constant") return testfn::constant(g, arg("value", 1.0));
    std::uint64_t s = a.contains("seed") ? a["seed"].get<std::uint64_t>() : seed;
    int packets = a.contains("packets") ? a["packets"].get<int>() : 6;
    return testfn::random_bandlimited(g, arg("cutoff", 1.0), s, packets);
}

}  // namespace horo::config
