#pragma once

#include <string>

#include <json.hpp>

#include "dinv/applications.hpp"

namespace dinv {

class SpecError : public std::runtime_error {
public:
    SpecError(const std::string& field, const std::string& message)
        : std::runtime_error("spec error at " + field + ": " + message), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Validated spec file: structural checks (dimensions, expression parses,
/// nonempty domain boxes) run before any numerics.
struct SpecDocument {
    std::string name;
    RecordKind kind = RecordKind::Metric;
    ManifoldRecord record;
};

SpecDocument parse_spec(const nlohmann::json& j);
SpecDocument load_spec(const std::string& path);

}  // namespace dinv
