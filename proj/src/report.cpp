#include "horo/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "horo/error.hpp"

namespace horo {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void Trace::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw Error("trace '" + name + "': row has " + std::to_string(row.size()) + " entries, expected " +
                    std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string Trace::to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
    return os.str();
}

void Trace::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_csv();
}

Report::Report(std::string operation) : operation_(std::move(operation)) {}

namespace {

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

const char* comparison_name(Comparison c) {
    switch (c) {
        case Comparison::relative: return "relative";
        case Comparison::absolute: return "absolute";
        case Comparison::at_most: return "at_most";
        case Comparison::at_least: return "at_least";
        case Comparison::flag: return "flag";
    }
    return "?";
}

}  // namespace

const Assertion& Report::check_close(std::string name, double value, double reference, double rel_tol,
                                     std::string note) {
    double scale = std::abs(reference);
    double err = scale > 0 ? std::abs(value - reference) / scale : std::abs(value);
    assertions_.push_back({std::move(name), value, reference, rel_tol, Comparison::relative,
                           std::isfinite(err) && err <= rel_tol, std::move(note)});
    return assertions_.back();
}

const Assertion& Report::check_abs(std::string name, double value, double reference, double abs_tol,
                                   std::string note) {
    double err = std::abs(value - reference);
    assertions_.push_back({std::move(name), value, reference, abs_tol, Comparison::absolute,
                           std::isfinite(err) && err <= abs_tol, std::move(note)});
    return assertions_.back();
}

const Assertion& Report::check_at_most(std::string name, double value, double bound, std::string note) {
    assertions_.push_back({std::move(name), value, bound, 0.0, Comparison::at_most,
                           std::isfinite(value) && value <= bound, std::move(note)});
    return assertions_.back();
}

const Assertion& Report::check_at_least(std::string name, double value, double bound, std::string note) {
    assertions_.push_back({std::move(name), value, bound, 0.0, Comparison::at_least,
                           std::isfinite(value) && value >= bound, std::move(note)});
    return assertions_.back();
}

const Assertion& Report::check_true(std::string name, bool condition, std::string note) {
    assertions_.push_back({std::move(name), condition ? 1.0 : 0.0, 1.0, 0.0, Comparison::flag, condition,
                           std::move(note)});
    return assertions_.back();
}

void Report::absorb(const Report& other, const std::string& prefix) {
    for (auto a : other.assertions_) {
        a.name = prefix + "." + a.name;
        assertions_.push_back(std::move(a));
    }
    for (auto t : other.traces_) {
        t.name = prefix + "_" + t.name;
        traces_.push_back(std::move(t));
    }
    values[prefix] = other.values;
}

Trace& Report::add_trace(std::string name, std::vector<std::string> columns) {
    traces_.push_back(Trace{std::move(name), std::move(columns), {}});
    return traces_.back();
}

const Trace* Report::find_trace(const std::string& name) const {
    for (const auto& t : traces_)
        if (t.name == name) return &t;
    return nullptr;
}

const Assertion* Report::find(const std::string& name) const {
    for (const auto& a : assertions_)
        if (a.name == name) return &a;
    return nullptr;
}

bool Report::passed() const {
    for (const auto& a : assertions_)
        if (!a.pass) return false;
    return true;
}

json Report::to_json() const {
    json j;
    j["operation"] = operation_;
    j["params"] = params;
    j["values"] = values;
    json reference = json::object();
    json tolerance = json::object();
    json list = json::array();
    for (const auto& a : assertions_) {
        reference[a.name] = finite_or_null(a.reference);
        tolerance[a.name] = finite_or_null(a.tolerance);
        json entry{{"name", a.name},
                   {"value", finite_or_null(a.value)},
                   {"reference", finite_or_null(a.reference)},
                   {"tolerance", finite_or_null(a.tolerance)},
                   {"comparison", comparison_name(a.comparison)},
                   {"pass", a.pass}};
        if (!a.note.empty()) entry["note"] = a.note;
        list.push_back(std::move(entry));
    }
    j["reference"] = reference;
    j["tolerance"] = tolerance;
    j["assertions"] = list;
    j["pass"] = passed();
    return j;
}

}  // namespace horo
