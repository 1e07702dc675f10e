#pragma once

#include <array>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "landrisk/types.hpp"

namespace landrisk {

/// Display colors per risk level, index = level. The shipped default runs
/// blue (safest) through cyan, green, yellow, orange to red (riskiest).
struct RiskColormap {
    std::array<Rgb, kRiskLevels> colors{};

    /// Loads {"risk_colors": [[r,g,b] x 6]}; entries must be pairwise distinct.
    static RiskColormap from_json(const nlohmann::json& doc);
    static RiskColormap from_file(const std::string& path);

    std::optional<RiskLevel> level_for_color(Rgb c) const;
};

/// Pointwise palette substitution.
RgbImage render_risk(const RiskMap& risk, const RiskColormap& cmap);

/// Exact inverse of render_risk; throws on the first pixel whose color is
/// not in the colormap.
RiskMap decode_risk_image(const RgbImage& image, const RiskColormap& cmap);

/// Per channel: round((1-alpha)*base + alpha*cmap[risk]), round half up.
/// alpha 0 returns base exactly; alpha 1 equals render_risk exactly.
RgbImage overlay(const RgbImage& base, const RiskMap& risk, const RiskColormap& cmap, double alpha);

/// Draws candidate markers onto an image in place: a midpoint circle of
/// the given radius plus a small center cross, clipped to the image.
void draw_circle_marker(RgbImage& image, int cx, int cy, int radius, Rgb color);

}  // namespace landrisk
