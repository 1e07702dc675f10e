#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "landrisk/morphology.hpp"
#include "landrisk/types.hpp"

namespace landrisk {

/// A ranked safe-landing proposal. The clearance disk is the open disk of
/// clearance_radius around the pixel center: every pixel whose center lies
/// strictly inside it is at or below the query threshold, and the disk
/// does not cross the image boundary (the nearest unsafe pixel center or
/// border point lies exactly on the rim). Zone statistics cover the
/// pixels whose centers lie strictly inside the disk.
struct SlzCandidate {
    int center_x = 0;
    int center_y = 0;
    double clearance_radius = 0;     // px, Euclidean
    RiskLevel max_risk_in_zone = 0;
    double mean_risk_in_zone = 0;
    std::uint64_t area = 0;          // pixels strictly inside the disk

    friend bool operator==(const SlzCandidate&, const SlzCandidate&) = default;
};

/// Extracts at most k candidates: per connected safe region, the clearance
/// maximum (ties prefer the pixel nearest the image center, then row-major
/// order), ranked by clearance descending, then mean zone risk ascending,
/// then row-major center order. Returns an empty list when no pixel is at
/// or below the threshold. Deterministic: identical inputs give
/// byte-identical candidate lists.
std::vector<SlzCandidate> select_slz(const RiskMap& risk, RiskLevel threshold, int k);

nlohmann::json slz_to_json(const std::vector<SlzCandidate>& candidates, RiskLevel threshold, int k,
                           const DilationPolicy& policy);

}  // namespace landrisk
