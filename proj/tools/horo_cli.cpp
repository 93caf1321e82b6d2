#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "horo/commands.hpp"
#include "horo/config.hpp"
#include "horo/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"horo: numerical checks for Poisson transforms and weighted Bergman norms on tubes"};
    std::string config_path, output;
    std::uint64_t seed = 0;
    bool list = false;
    auto* config_opt = app.add_option("--config", config_path, "JSON run configuration");
    auto* output_opt = app.add_option("--output", output, "Output directory (overrides config and OUTPUT_DIR)");
    auto* seed_opt = app.add_option("--seed", seed, "Seed (overrides the config)");
    app.add_flag("--list-commands", list, "Print the available commands and exit");
    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const auto& name : horo::config::command_names()) std::cout << name << '\n';
        return 0;
    }
    if (!*config_opt) {
        std::cerr << "error: --config is required\n";
        return 2;
    }
    try {
        horo::config::RunConfig cfg = horo::config::load(config_path);
        if (const char* env = std::getenv("OUTPUT_DIR"); env && *env) cfg.output_dir = env;
        if (*output_opt) cfg.output_dir = output;
        if (*seed_opt) cfg.seed = seed;
        auto result = horo::commands::run(cfg);
        for (const auto& report : result.document["reports"])
            for (const auto& a : report["assertions"])
                if (!a["pass"].get<bool>())
                    std::cout << "FAIL " << report["operation"].get<std::string>() << ": "
                              << a["name"].get<std::string>()
                              << (a.contains("note") ? " (" + a["note"].get<std::string>() + ")" : "") << '\n';
        std::cout << (result.exit_code == 0 ? "PASS " : "FAIL ") << result.document["command"].get<std::string>()
                  << " -> " << cfg.output_dir.string() << " (" << result.document["wall_time_s"].get<double>()
                  << " s)\n";
        return result.exit_code;
    } catch (const horo::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
