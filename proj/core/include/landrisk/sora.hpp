#pragma once

#include <string>
#include <string_view>

#include "landrisk/types.hpp"

namespace landrisk::sora {

enum class Visibility { VLOS, BVLOS };

enum class Environment { ControlledGround, SparselyPopulated, Populated, GatheringOfPeople };

struct OperationalScenario {
    Visibility visibility = Visibility::VLOS;
    Environment environment = Environment::ControlledGround;
};

/// Intrinsic Ground Risk Class for a UAV of at most 1 m characteristic
/// dimension. Values come from the SORA scenario table: {1,2,3,4,5,7,8};
/// 6 is never produced. VLOS and BVLOS over controlled ground share one row.
struct GroundRiskClass {
    int value = 1;

    friend bool operator==(const GroundRiskClass&, const GroundRiskClass&) = default;
};

GroundRiskClass grc_lookup(OperationalScenario s);

/// Human-readable scenario wording matching the GRC table rows.
std::string scenario_description(OperationalScenario s);

/// Definition string for a risk level 0..5, stored verbatim from the
/// source table (original orthography preserved). Throws outside [0,5].
std::string_view risk_level_description(RiskLevel level);

std::string_view to_string(Visibility v);
std::string_view to_string(Environment e);
Visibility visibility_from_string(std::string_view s);
Environment environment_from_string(std::string_view s);

}  // namespace landrisk::sora
