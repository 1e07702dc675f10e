#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "landrisk/types.hpp"

namespace landrisk {

/// Safety dilation radii in pixels, one per risk level, applied with a
/// Chebyshev (square) structuring element. The square ball is a superset
/// of the Euclidean one, so dilation errs on the safe side.
struct DilationPolicy {
    std::array<int, kRiskLevels> radius_per_level{};

    bool is_identity() const {
        for (const int r : radius_per_level)
            if (r != 0)
                return false;
        return true;
    }
};

/// out(x) = max(risk(x), max over levels L present within Chebyshev
/// distance radius_per_level[L] of x). Pointwise monotone: the output is
/// never below the input.
RiskMap dilate_risk(const RiskMap& risk, const DilationPolicy& policy);

/// Squared clearance per pixel: the exact squared Euclidean distance from
/// the pixel center (x+0.5, y+0.5) to the nearest center of a pixel with
/// risk > threshold, or to the image rectangle boundary, whichever is
/// nearer. Center-to-center squared distances are integers and border
/// distances are half-integers, so every value is exact in a double.
/// Pixels above the threshold get 0.
std::vector<double> clearance_squared(const RiskMap& risk, RiskLevel threshold);

/// Euclidean clearance field: sqrt of clearance_squared, per pixel.
DistanceMap distance_to_risk(const RiskMap& risk, RiskLevel threshold);

struct Region {
    std::int32_t id = 0;
    std::uint64_t area = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;  // inclusive bounding box
    int first_x = 0, first_y = 0;                    // row-major first pixel
};

/// 4-connected components of the safe set {risk <= threshold}.
/// `region_of` holds the region id per pixel, -1 outside the safe set;
/// regions are numbered 0.. in row-major order of their first pixel.
struct RegionLabeling {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> region_of;
    std::vector<Region> regions;
};

RegionLabeling connected_regions(const RiskMap& risk, RiskLevel threshold);

}  // namespace landrisk
