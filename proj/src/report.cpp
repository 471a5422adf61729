#include "dinv/report.hpp"

#include <sstream>

namespace dinv {

nlohmann::json to_json(const ReportRecord& r) {
    nlohmann::json j{{"check", r.check},
                     {"name", r.name},
                     {"point", r.point},
                     {"tuple", r.tuple},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"margin", r.margin},
                     {"passed", r.passed},
                     {"tolerance", r.tolerance},
                     {"certified", r.certified},
                     {"restarts", r.restarts},
                     {"seed", r.seed}};
    if (r.timestamp) j["timestamp"] = *r.timestamp;
    return j;
}

ReportRecord record_from_json(const nlohmann::json& j) {
    ReportRecord r;
    r.check = j.at("check").get<std::string>();
    r.name = j.at("name").get<std::string>();
    r.point = j.at("point").get<std::vector<double>>();
    r.tuple = j.at("tuple").get<std::vector<int>>();
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.margin = j.at("margin").get<double>();
    r.passed = j.at("passed").get<bool>();
    r.tolerance = j.at("tolerance").get<double>();
    r.certified = j.at("certified").get<bool>();
    r.restarts = j.at("restarts").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
    return r;
}

std::string reports_to_json(const std::vector<ReportRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

std::vector<ReportRecord> reports_from_json(const std::string& text) {
    nlohmann::json arr = nlohmann::json::parse(text);
    std::vector<ReportRecord> out;
    for (const auto& j : arr) out.push_back(record_from_json(j));
    return out;
}

namespace {

std::string join_num(const std::vector<double>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ';';
        os << nlohmann::json(v[i]).dump();
    }
    return os.str();
}

std::string join_int(const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ';';
        os << v[i];
    }
    return os.str();
}

}  // namespace

std::string reports_to_csv(const std::vector<ReportRecord>& records) {
    std::ostringstream os;
    os << "check,name,point,tuple,lhs,rhs,margin,passed,tolerance,certified,restarts,seed,timestamp\n";
    for (const auto& r : records) {
        os << r.check << ',' << r.name << ",\"" << join_num(r.point) << "\",\"" << join_int(r.tuple)
           << "\"," << nlohmann::json(r.lhs).dump() << ',' << nlohmann::json(r.rhs).dump() << ','
           << nlohmann::json(r.margin).dump() << ',' << (r.passed ? "true" : "false") << ','
           << nlohmann::json(r.tolerance).dump() << ',' << (r.certified ? "true" : "false") << ','
           << r.restarts << ',' << r.seed << ',' << (r.timestamp ? *r.timestamp : "") << '\n';
    }
    return os.str();
}

}  // namespace dinv
