#pragma once

#include <filesystem>
#include <vector>

#include "horo/config.hpp"
#include "horo/report.hpp"

namespace horo::commands {

/// Runs the configured verifier. Numerical errors become a failed "error" assertion in the returned
/// report; ConfigError propagates.
std::vector<Report> execute(const config::RunConfig& cfg);

struct RunResult {
    int exit_code = 0;  // 0 iff every assertion passed
    json document;      // contents of report.json
    std::vector<std::filesystem::path> files;
};

/// execute, then write report.json and one trace_<name>.csv per trace into cfg.output_dir.
RunResult run(const config::RunConfig& cfg);

}  // namespace horo::commands
