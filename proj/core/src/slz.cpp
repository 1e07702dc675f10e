#include "landrisk/slz.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace landrisk {

namespace {

// Zone statistics over pixel centers strictly inside the disk. Membership
// compares integer center-to-center squares against the exact squared
// clearance, so there is no rounding at the rim.
void fill_zone_stats(const RiskMap& risk, double clearance_sq, SlzCandidate& c) {
    const int reach = int(std::ceil(std::sqrt(clearance_sq)));
    const int x0 = std::max(0, c.center_x - reach);
    const int x1 = std::min(risk.width - 1, c.center_x + reach);
    const int y0 = std::max(0, c.center_y - reach);
    const int y1 = std::min(risk.height - 1, c.center_y + reach);

    std::uint64_t risk_sum = 0;
    for (int y = y0; y <= y1; ++y) {
        const double dy = double(y) - double(c.center_y);
        for (int x = x0; x <= x1; ++x) {
            const double dx = double(x) - double(c.center_x);
            if (dx * dx + dy * dy >= clearance_sq)
                continue;
            const RiskLevel r = risk.at(x, y);
            c.max_risk_in_zone = std::max(c.max_risk_in_zone, r);
            risk_sum += r;
            ++c.area;
        }
    }
    c.mean_risk_in_zone = c.area > 0 ? double(risk_sum) / double(c.area) : 0.0;
}

}  // namespace

std::vector<SlzCandidate> select_slz(const RiskMap& risk, RiskLevel threshold, int k) {
    if (k < 1)
        throw Error("select_slz: k must be at least 1");

    const RegionLabeling labeling = connected_regions(risk, threshold);
    if (labeling.regions.empty())
        return {};

    const std::vector<double> sq = clearance_squared(risk, threshold);

    // Per region, the pixel maximizing clearance; among tied maxima the
    // one nearest the image center wins (row-major first as a final tie
    // break, which the row-major scan order provides for free).
    struct Peak {
        double sq = -1.0;
        double center_dist_sq = 0.0;
        int x = 0, y = 0;
    };
    const double cx = double(risk.width) / 2.0;
    const double cy = double(risk.height) / 2.0;
    std::vector<Peak> peaks(labeling.regions.size());
    for (int y = 0; y < risk.height; ++y) {
        for (int x = 0; x < risk.width; ++x) {
            const std::size_t i = risk.index(x, y);
            const std::int32_t region = labeling.region_of[i];
            if (region < 0)
                continue;
            const double dx = (double(x) + 0.5) - cx;
            const double dy = (double(y) + 0.5) - cy;
            const double center_dist_sq = dx * dx + dy * dy;
            Peak& peak = peaks[std::size_t(region)];
            if (sq[i] > peak.sq || (sq[i] == peak.sq && center_dist_sq < peak.center_dist_sq)) {
                peak.sq = sq[i];
                peak.center_dist_sq = center_dist_sq;
                peak.x = x;
                peak.y = y;
            }
        }
    }

    std::vector<SlzCandidate> candidates;
    candidates.reserve(peaks.size());
    for (const Peak& peak : peaks) {
        SlzCandidate c;
        c.center_x = peak.x;
        c.center_y = peak.y;
        c.clearance_radius = std::sqrt(peak.sq);
        fill_zone_stats(risk, peak.sq, c);
        candidates.push_back(c);
    }

    std::sort(candidates.begin(), candidates.end(), [](const SlzCandidate& a, const SlzCandidate& b) {
        if (a.clearance_radius != b.clearance_radius)
            return a.clearance_radius > b.clearance_radius;
        if (a.mean_risk_in_zone != b.mean_risk_in_zone)
            return a.mean_risk_in_zone < b.mean_risk_in_zone;
        if (a.center_y != b.center_y)
            return a.center_y < b.center_y;
        return a.center_x < b.center_x;
    });
    if (std::ssize(candidates) > k)
        candidates.resize(std::size_t(k));
    return candidates;
}

nlohmann::json slz_to_json(const std::vector<SlzCandidate>& candidates, RiskLevel threshold, int k,
                           const DilationPolicy& policy) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SlzCandidate& c : candidates) {
        arr.push_back(nlohmann::json{{"center", {c.center_x, c.center_y}},
                                     {"clearance_px", c.clearance_radius},
                                     {"max_risk", int(c.max_risk_in_zone)},
                                     {"mean_risk", c.mean_risk_in_zone},
                                     {"area_px", c.area}});
    }
    return nlohmann::json{{"schema", 1},
                          {"threshold", int(threshold)},
                          {"k", k},
                          {"dilation_radii", policy.radius_per_level},
                          {"candidates", arr}};
}

}  // namespace landrisk
