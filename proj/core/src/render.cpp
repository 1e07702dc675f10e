#include "landrisk/render.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace landrisk {

RiskColormap RiskColormap::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("risk_colors"))
        throw Error("colormap: expected an object with key \"risk_colors\"");
    const auto& arr = doc["risk_colors"];
    if (!arr.is_array() || arr.size() != std::size_t(kRiskLevels))
        throw Error("colormap: \"risk_colors\" must list exactly " + std::to_string(kRiskLevels) +
                    " colors");

    RiskColormap cmap;
    for (int level = 0; level < kRiskLevels; ++level) {
        const auto& c = arr[std::size_t(level)];
        if (!c.is_array() || c.size() != 3)
            throw Error("colormap: color for level " + std::to_string(level) + " must be [r,g,b]");
        std::uint8_t* channels[3] = {&cmap.colors[std::size_t(level)].r,
                                     &cmap.colors[std::size_t(level)].g,
                                     &cmap.colors[std::size_t(level)].b};
        for (int i = 0; i < 3; ++i) {
            const auto v = c[i].get<std::int64_t>();
            if (v < 0 || v > 255)
                throw Error("colormap: channel out of [0,255] for level " + std::to_string(level));
            *channels[i] = std::uint8_t(v);
        }
    }
    for (int a = 0; a < kRiskLevels; ++a)
        for (int b = a + 1; b < kRiskLevels; ++b)
            if (cmap.colors[std::size_t(a)] == cmap.colors[std::size_t(b)])
                throw Error("colormap: duplicate color for levels " + std::to_string(a) + " and " +
                            std::to_string(b));
    return cmap;
}

RiskColormap RiskColormap::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("colormap: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("colormap: invalid JSON in " + path + ": " + e.what());
    }
    return from_json(doc);
}

std::optional<RiskLevel> RiskColormap::level_for_color(Rgb c) const {
    for (int level = 0; level < kRiskLevels; ++level)
        if (colors[std::size_t(level)] == c)
            return RiskLevel(level);
    return std::nullopt;
}

RgbImage render_risk(const RiskMap& risk, const RiskColormap& cmap) {
    RgbImage out(risk.width, risk.height);
    for (std::size_t i = 0; i < risk.pixels(); ++i) {
        const Rgb c = cmap.colors[risk.data[i]];
        out.data[i * 3] = c.r;
        out.data[i * 3 + 1] = c.g;
        out.data[i * 3 + 2] = c.b;
    }
    return out;
}

RiskMap decode_risk_image(const RgbImage& image, const RiskColormap& cmap) {
    RiskMap out(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const Rgb c = image.at(x, y);
            const auto level = cmap.level_for_color(c);
            if (!level)
                throw Error("risk image: color (" + std::to_string(c.r) + "," + std::to_string(c.g) +
                            "," + std::to_string(c.b) + ") at pixel (" + std::to_string(x) + "," +
                            std::to_string(y) + ") is not in the colormap");
            out.at(x, y) = *level;
        }
    }
    return out;
}

RgbImage overlay(const RgbImage& base, const RiskMap& risk, const RiskColormap& cmap, double alpha) {
    if (base.width != risk.width || base.height != risk.height)
        throw Error("overlay: dimension mismatch, image " + std::to_string(base.width) + "x" +
                    std::to_string(base.height) + " vs risk map " + std::to_string(risk.width) + "x" +
                    std::to_string(risk.height));
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error("overlay: alpha must be in [0,1]");

    RgbImage out(base.width, base.height);
    for (std::size_t i = 0; i < risk.pixels(); ++i) {
        const Rgb c = cmap.colors[risk.data[i]];
        const std::uint8_t top[3] = {c.r, c.g, c.b};
        for (int ch = 0; ch < 3; ++ch) {
            const double blended =
                (1.0 - alpha) * double(base.data[i * 3 + std::size_t(ch)]) + alpha * double(top[ch]);
            out.data[i * 3 + std::size_t(ch)] = std::uint8_t(std::floor(blended + 0.5));
        }
    }
    return out;
}

void draw_circle_marker(RgbImage& image, int cx, int cy, int radius, Rgb color) {
    auto put = [&](int x, int y) {
        if (x >= 0 && x < image.width && y >= 0 && y < image.height)
            image.set(x, y, color);
    };
    for (int d = -2; d <= 2; ++d) {
        put(cx + d, cy);
        put(cx, cy + d);
    }
    if (radius < 1)
        return;
    int x = radius;
    int y = 0;
    int err = 1 - radius;
    while (x >= y) {
        put(cx + x, cy + y);
        put(cx - x, cy + y);
        put(cx + x, cy - y);
        put(cx - x, cy - y);
        put(cx + y, cy + x);
        put(cx - y, cy + x);
        put(cx + y, cy - x);
        put(cx - y, cy - x);
        ++y;
        if (err < 0) {
            err += 2 * y + 1;
        } else {
            --x;
            err += 2 * (y - x) + 1;
        }
    }
}

}  // namespace landrisk
