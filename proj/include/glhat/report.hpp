#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace glhat {

// Machine-readable verdict report (schema glhat-report/v1). Entry order is
// deterministic; wall_ms is the only field allowed to vary between runs.
struct ReportEntry {
    std::string id;
    std::string anchor;
    std::string instance;
    std::string verdict;  // "holds" | "fails" | "error"
    std::string counterexample;
    double wall_ms = 0.0;
};

struct Report {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::vector<ReportEntry> entries;

    int total() const { return static_cast<int>(entries.size()); }
    int passed() const;
    int failed() const;
    int errors() const;
    bool all_passed() const { return passed() == total(); }
};

nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

// Human-readable table with one line per entry.
std::string to_text(const Report& report);

}  // namespace glhat
