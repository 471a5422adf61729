#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dinv/combinatorics.hpp"
#include "dinv/geometry.hpp"

namespace dinv {

/// One check outcome; the JSON/CSV projection of every CLI computation.
/// Invariant: passed <=> margin >= -tolerance.
struct ReportRecord {
    std::string check;
    std::string name;  // catalog or spec name
    std::vector<double> point;
    std::vector<int> tuple;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool passed = true;
    double tolerance = 0.0;
    bool certified = false;
    int restarts = 0;
    std::uint64_t seed = 0;
    std::optional<std::string> timestamp;
};

nlohmann::json to_json(const ReportRecord& r);
ReportRecord record_from_json(const nlohmann::json& j);

std::string reports_to_json(const std::vector<ReportRecord>& records);
std::string reports_to_csv(const std::vector<ReportRecord>& records);
std::vector<ReportRecord> reports_from_json(const std::string& text);

}  // namespace dinv
