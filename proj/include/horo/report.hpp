#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace horo {

using json = nlohmann::json;

enum class Comparison { relative, absolute, at_most, at_least, flag };

struct Assertion {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    Comparison comparison = Comparison::relative;
    bool pass = false;
    std::string note;
};

// Tabular trace, written as CSV with 17 significant digits.
struct Trace {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
    std::string to_csv() const;
    void write_csv(const std::filesystem::path& path) const;
};

class Report {
public:
    explicit Report(std::string operation);

    const std::string& operation() const { return operation_; }

    json params = json::object();
    json values = json::object();

    const Assertion& check_close(std::string name, double value, double reference, double rel_tol,
                                 std::string note = {});
    const Assertion& check_abs(std::string name, double value, double reference, double abs_tol,
                               std::string note = {});
    const Assertion& check_at_most(std::string name, double value, double bound, std::string note = {});
    const Assertion& check_at_least(std::string name, double value, double bound, std::string note = {});
    const Assertion& check_true(std::string name, bool condition, std::string note = {});

    // Merges another report's assertions under a name prefix.
    void absorb(const Report& other, const std::string& prefix);

    Trace& add_trace(std::string name, std::vector<std::string> columns);

    const std::vector<Assertion>& assertions() const { return assertions_; }
    const std::vector<Trace>& traces() const { return traces_; }
    const Trace* find_trace(const std::string& name) const;
    const Assertion* find(const std::string& name) const;

    bool passed() const;
    json to_json() const;

private:
    std::string operation_;
    std::vector<Assertion> assertions_;
    std::vector<Trace> traces_;
};

std::string format_number(double v);

}  // namespace horo
