#include "glhat/report.hpp"

#include "glhat/version.hpp"

#include <iomanip>
#include <sstream>

namespace glhat {

int Report::passed() const {
    int k = 0;
    for (const auto& e : entries) k += e.verdict == "holds";
    return k;
}

int Report::failed() const {
    int k = 0;
    for (const auto& e : entries) k += e.verdict == "fails";
    return k;
}

int Report::errors() const {
    int k = 0;
    for (const auto& e : entries) k += e.verdict == "error";
    return k;
}

nlohmann::json to_json(const Report& report) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["tool"] = "glhat";
    j["version"] = kVersion;
    j["command"] = report.command;
    j["config"] = report.config;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : report.entries) {
        nlohmann::json je;
        je["id"] = e.id;
        je["anchor"] = e.anchor;
        je["instance"] = e.instance;
        je["verdict"] = e.verdict;
        je["counterexample"] = e.counterexample;
        je["wall_ms"] = e.wall_ms;
        j["entries"].push_back(je);
    }
    j["summary"] = {{"total", report.total()},
                    {"passed", report.passed()},
                    {"failed", report.failed()},
                    {"errors", report.errors()}};
    return j;
}

Report report_from_json(const nlohmann::json& j) {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config");
    for (const auto& je : j.at("entries")) {
        ReportEntry e;
        e.id = je.at("id").get<std::string>();
        e.anchor = je.at("anchor").get<std::string>();
        e.instance = je.at("instance").get<std::string>();
        e.verdict = je.at("verdict").get<std::string>();
        e.counterexample = je.at("counterexample").get<std::string>();
        e.wall_ms = je.at("wall_ms").get<double>();
        r.entries.push_back(std::move(e));
    }
    return r;
}

std::string to_text(const Report& report) {
    std::ostringstream os;
    os << "glhat " << kVersion << " -- " << report.command << "\n";
    for (const auto& e : report.entries) {
        os << std::left << std::setw(7)
           << (e.verdict == "holds" ? "ok" : e.verdict == "fails" ? "FAIL" : "ERROR") << " "
           << e.id;
        if (!e.instance.empty()) os << "[" << e.instance << "]";
        if (!e.anchor.empty()) os << "  (" << e.anchor << ")";
        if (!e.counterexample.empty()) os << "\n        " << e.counterexample;
        os << "\n";
    }
    os << "summary: " << report.passed() << "/" << report.total() << " passed";
    if (report.failed()) os << ", " << report.failed() << " failed";
    if (report.errors()) os << ", " << report.errors() << " errors";
    os << "\n";
    return os.str();
}

}  // namespace glhat
