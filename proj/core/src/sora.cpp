#include "landrisk/sora.hpp"

#include <array>

namespace landrisk::sora {

GroundRiskClass grc_lookup(OperationalScenario s) {
    switch (s.environment) {
        case Environment::ControlledGround:
            return {1};  // shared row for VLOS and BVLOS
        case Environment::SparselyPopulated:
            return {s.visibility == Visibility::VLOS ? 2 : 3};
        case Environment::Populated:
            return {s.visibility == Visibility::VLOS ? 4 : 5};
        case Environment::GatheringOfPeople:
            return {s.visibility == Visibility::VLOS ? 7 : 8};
    }
    throw Error("grc_lookup: invalid environment");
}

std::string scenario_description(OperationalScenario s) {
    switch (s.environment) {
        case Environment::ControlledGround:
            return "VLOS/BVLOS over controlled ground area";
        case Environment::SparselyPopulated:
            return std::string(to_string(s.visibility)) + " in sparsely populated environment";
        case Environment::Populated:
            return std::string(to_string(s.visibility)) + " in populated environment";
        case Environment::GatheringOfPeople:
            return std::string(to_string(s.visibility)) + " over gathering of people";
    }
    throw Error("scenario_description: invalid environment");
}

std::string_view risk_level_description(RiskLevel level) {
    static const std::array<std::string_view, kRiskLevels> kDefinitions = {
        "Ideal landing zones, including grass, dirt, gravel, and predefined markers.",
        "Low level of material damage or damage to the UAV itself.",
        "Moderate risk of loosing or damaging the UAV, along with low risk of material damage.",
        "This level includes important material damage, the imminent risk of losing or critically "
        "damaging the drone, and the moderate risk of indirectly hurting people. It includes the "
        "classes water, tree, window, wall, among others.",
        "This level comprises indirect risk of hurting people, direct risk of hurting fauna, and "
        "conflicting regions where there is uncertainty about the presence of people in the area.",
        "This level represents the maximum risk and considers the direct risk of hurting people.",
    };
    if (int(level) >= kRiskLevels)
        throw Error("risk_level_description: level " + std::to_string(int(level)) + " outside [0,5]");
    return kDefinitions[level];
}

std::string_view to_string(Visibility v) { return v == Visibility::VLOS ? "VLOS" : "BVLOS"; }

std::string_view to_string(Environment e) {
    switch (e) {
        case Environment::ControlledGround:
            return "controlled_ground";
        case Environment::SparselyPopulated:
            return "sparsely_populated";
        case Environment::Populated:
            return "populated";
        case Environment::GatheringOfPeople:
            return "gathering_of_people";
    }
    throw Error("to_string: invalid environment");
}

Visibility visibility_from_string(std::string_view s) {
    if (s == "vlos" || s == "VLOS")
        return Visibility::VLOS;
    if (s == "bvlos" || s == "BVLOS")
        return Visibility::BVLOS;
    throw Error("unknown visibility \"" + std::string(s) + "\" (expected vlos or bvlos)");
}

Environment environment_from_string(std::string_view s) {
    if (s == "controlled_ground" || s == "controlled")
        return Environment::ControlledGround;
    if (s == "sparsely_populated" || s == "sparse")
        return Environment::SparselyPopulated;
    if (s == "populated")
        return Environment::Populated;
    if (s == "gathering_of_people" || s == "gathering")
        return Environment::GatheringOfPeople;
    throw Error("unknown environment \"" + std::string(s) +
                "\" (expected controlled_ground, sparsely_populated, populated or gathering_of_people)");
}

}  // namespace landrisk::sora
