#pragma once

// Machine-readable check reports. Everything except the "timing" object is
// a deterministic function of the inputs.

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace ncglue {

using json = nlohmann::json;

inline constexpr int report_schema_version = 1;

enum class Verdict { pass, fail, inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct Report {
    std::string check;
    Verdict verdict = Verdict::pass;
    std::string summary;
    json dimensions = json::object();
    json witness = json::object();
    json details = json::object();
    std::string started;
    double runtime_s = 0;

    // Conjunction of named sub-checks; one failing sub-check fails the report.
    void require(const std::string& name, bool ok) {
        details["checks"][name] = ok;
        if (!ok) verdict = Verdict::fail;
    }
    // One-sided membership that could not be certified.
    void inconclusive(const std::string& name) {
        details["checks"][name] = "inconclusive";
        if (verdict == Verdict::pass) verdict = Verdict::inconclusive;
    }

    json to_json(bool timing = true) const {
        json j;
        j["schema_version"] = report_schema_version;
        j["check"] = check;
        j["verdict"] = to_string(verdict);
        j["summary"] = summary;
        j["dimensions"] = dimensions;
        j["witness"] = witness;
        j["details"] = details;
        if (timing) j["timing"] = {{"started", started}, {"runtime_s", runtime_s}};
        return j;
    }

    std::string line() const {
        std::ostringstream os;
        std::string v = to_string(verdict);
        for (auto& c : v) c = (char)std::toupper((unsigned char)c);
        os << std::left << std::setw(13) << v << check;
        if (!summary.empty()) os << ": " << summary;
        os << std::fixed << std::setprecision(2) << " (" << runtime_s << " s)";
        return os.str();
    }
};

inline std::string utc_timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

// Runs body on a fresh report and stamps it; exceptions become failures.
inline Report timed_report(const std::string& check, const std::function<void(Report&)>& body) {
    Report r;
    r.check = check;
    r.started = utc_timestamp();
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.verdict = Verdict::fail;
        r.summary = std::string("error: ") + e.what();
        r.details["error"] = e.what();
    }
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline json reports_json(const std::vector<Report>& reports, bool timing = true) {
    json out;
    out["schema_version"] = report_schema_version;
    out["reports"] = json::array();
    bool any_fail = false;
    for (const auto& r : reports) {
        out["reports"].push_back(r.to_json(timing));
        any_fail = any_fail || r.verdict == Verdict::fail;
    }
    out["verdict"] = any_fail ? "fail" : "pass";
    return out;
}

inline bool any_failed(const std::vector<Report>& reports) {
    for (const auto& r : reports)
        if (r.verdict == Verdict::fail) return true;
    return false;
}

} // namespace ncglue
