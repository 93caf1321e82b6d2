#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "horo/field.hpp"
#include "horo/poisson.hpp"
#include "horo/report.hpp"

namespace horo::config {

enum class Command {
    transform,
    slice,
    delta_asymptotics,
    admissibility,
    isometry,
    banach_norm,
    norm_limit,
    extension,
    crown_probe,
    specfun_selftest,
};

/// Command names as written in configs, in enum order.
const std::vector<std::string>& command_names();
std::string command_name(Command c);

struct GridSettings {
    double extent = 16.0;
    int points = 1024;
};

/// A builtin test function (gaussian, bump, plateau, random-bandlimited, constant) or a Field dump.
struct InputSpec {
    std::string builtin;
    json arguments = json::object();  // width, radius, half_width, taper, cutoff, seed, value
    std::filesystem::path path;

    bool from_file() const { return !path.empty(); }
};

struct RunConfig {
    Command command = Command::specfun_selftest;
    std::optional<poisson::Params> params;
    std::optional<double> alpha;
    GridSettings grid;
    std::vector<InputSpec> inputs;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 1;
    json options = json::object();  // command-specific settings
    json source = json::object();   // the parsed document, echoed into report.json
};

struct Validation {
    std::optional<RunConfig> config;
    std::vector<std::string> errors;  // "field: message" or "line L, column C: message"
};

Validation validate(std::string_view text);
/// validate, throwing ConfigError with every message joined by newlines.
RunConfig parse(std::string_view text);
RunConfig load(const std::filesystem::path& path);

/// Samples a builtin on the configured grid, or reads a Field dump (whose dimension must be `dim`).
/// random-bandlimited uses the run seed unless the input names its own.
field::Field build_input(const InputSpec& spec, int dim, const GridSettings& grid, std::uint64_t seed);

}  // namespace horo::config
