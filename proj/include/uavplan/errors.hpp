#pragma once

#include <stdexcept>
#include <string>

namespace uavplan {

enum class Errc {
    invalid_split,
    infeasible_split,
    degenerate_geometry,
    unreachable_bs,
    inconsistent_distribution,
    invalid_shortfall,
    malformed_scenario,
    scenario_explosion,
    constraint_violation,
    dimension_mismatch,
    oracle_too_large,
    placement,
    infeasible_point,
    parse,
    validation,
};

/// Library-wide error carrying a machine-checkable code plus a human message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::invalid_split: return "invalid-split";
        case Errc::infeasible_split: return "infeasible-split";
        case Errc::degenerate_geometry: return "degenerate-geometry";
        case Errc::unreachable_bs: return "unreachable-bs";
        case Errc::inconsistent_distribution: return "inconsistent-distribution";
        case Errc::invalid_shortfall: return "invalid-shortfall";
        case Errc::malformed_scenario: return "malformed-scenario";
        case Errc::scenario_explosion: return "scenario-explosion";
        case Errc::constraint_violation: return "constraint-violation";
        case Errc::dimension_mismatch: return "dimension-mismatch";
        case Errc::oracle_too_large: return "oracle-too-large";
        case Errc::placement: return "placement";
        case Errc::infeasible_point: return "infeasible-point";
        case Errc::parse: return "parse";
        case Errc::validation: return "validation";
    }
    return "unknown";
}

// Validation failures (bad config, malformed inputs) map to exit code 2,
// everything that is structurally infeasible or over a cap maps to 3.
inline int exit_code_for(Errc c) {
    switch (c) {
        case Errc::parse:
        case Errc::validation:
        case Errc::inconsistent_distribution:
        case Errc::invalid_shortfall:
        case Errc::malformed_scenario:
        case Errc::dimension_mismatch:
        case Errc::invalid_split:
            return 2;
        default:
            return 3;
    }
}

} // namespace uavplan
