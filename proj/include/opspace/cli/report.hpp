#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/version.hpp>

#include "json.hpp"
#include "opspace/version.hpp"

namespace opspace::cli {

using Json = nlohmann::ordered_json;

struct Record {
    std::string key;  // canonical case key; records are sorted by it
    Json inputs = Json::object();
    std::optional<double> oracle;
    double value = 0.0;
    std::string kind = "exact";  // exact / upper / lower
    std::optional<double> relative_gap;
    double tolerance = 0.0;
    bool pass = false;
    std::string claim;
    Json details = Json::object();

    Json to_json() const {
        Json j;
        j["case"] = key;
        j["inputs"] = inputs;
        j["oracle"] = oracle ? Json(*oracle) : Json(nullptr);
        j["estimate"] = {{"value", value}, {"kind", kind}};
        j["relative_gap"] = relative_gap ? Json(*relative_gap) : Json(nullptr);
        j["tolerance"] = tolerance;
        j["pass"] = pass;
        j["claim"] = claim;
        if (!details.empty()) j["details"] = details;
        return j;
    }
};

inline Json versions() {
    return {{"opspace", OPSPACE_VERSION},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000)},
            {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR)},
#if defined(__VERSION__)
            {"compiler", __VERSION__}
#else
            {"compiler", "unknown"}
#endif
    };
}

/// Command, config echo and per-case records. `body()` is deterministic for a
/// fixed config; wall clock and versions live in `meta` only.
class Report {
public:
    Report(std::string command, Json config) : command_(std::move(command)), config_(std::move(config)) {}

    void add(Record r) { records_.push_back(std::move(r)); }
    void note(std::string text) { notes_.push_back(std::move(text)); }
    void set_wall_clock(double seconds) { wall_clock_ = seconds; }

    const std::vector<Record>& records() const { return records_; }
    const std::string& command() const { return command_; }

    bool all_pass() const {
        return std::all_of(records_.begin(), records_.end(), [](const Record& r) { return r.pass; });
    }
    std::size_t passed() const {
        return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const Record& r) { return r.pass; }));
    }

    Json body() const {
        std::vector<const Record*> sorted;
        for (const auto& r : records_) sorted.push_back(&r);
        std::stable_sort(sorted.begin(), sorted.end(), [](const Record* a, const Record* b) { return a->key < b->key; });
        Json recs = Json::array();
        for (const auto* r : sorted) recs.push_back(r->to_json());
        Json j;
        j["command"] = command_;
        j["config"] = config_;
        j["records"] = recs;
        j["summary"] = {{"records", records_.size()}, {"passed", passed()}, {"pass", all_pass()}};
        if (!notes_.empty()) j["notes"] = notes_;
        return j;
    }

    Json full() const {
        Json j = body();
        j["meta"] = {{"wall_clock_seconds", wall_clock_}, {"versions", versions()}};
        return j;
    }

private:
    std::string command_;
    Json config_;
    std::vector<Record> records_;
    std::vector<std::string> notes_;
    double wall_clock_ = 0.0;
};

} // namespace opspace::cli
