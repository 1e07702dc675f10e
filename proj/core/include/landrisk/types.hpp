#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace landrisk {

/// Error type thrown by every validating operation in the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using ClassId = std::uint8_t;
using RiskLevel = std::uint8_t;

/// Number of ordinal risk levels: 0 (ideal landing zone) .. 5 (people at direct risk).
inline constexpr int kRiskLevels = 6;

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

constexpr std::uint32_t pack_rgb(Rgb c) {
    return (std::uint32_t(c.r) << 16) | (std::uint32_t(c.g) << 8) | std::uint32_t(c.b);
}

/// Row-major W×H raster. The Tag parameter keeps rasters of the same cell
/// type (labels vs. risk levels) from being mixed up at compile time.
template <typename T, typename Tag>
struct Grid {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Grid() = default;
    Grid(int w, int h, T fill = T{}) : width(w), height(h), data(std::size_t(w) * std::size_t(h), fill) {
        if (w <= 0 || h <= 0)
            throw Error("grid dimensions must be positive, got " + std::to_string(w) + "x" + std::to_string(h));
    }

    std::size_t pixels() const { return data.size(); }
    std::size_t index(int x, int y) const { return std::size_t(y) * std::size_t(width) + std::size_t(x); }
    T at(int x, int y) const { return data[index(x, y)]; }
    T& at(int x, int y) { return data[index(x, y)]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// W×H raster of semantic class ids (segmentation output or ground truth).
using LabelMap = Grid<ClassId, struct LabelMapTag>;

/// W×H raster of risk levels 0..5.
using RiskMap = Grid<RiskLevel, struct RiskMapTag>;

/// W×H raster of per-pixel real values (clearance distances).
using DistanceMap = Grid<double, struct DistanceMapTag>;

/// Per-pixel class scores as emitted by a segmentation backend.
/// Layout is pixel-major: data[(y*width + x)*channels + c].
struct ProbabilityMap {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<float> data;

    ProbabilityMap() = default;
    ProbabilityMap(int w, int h, int c)
        : width(w), height(h), channels(c), data(std::size_t(w) * std::size_t(h) * std::size_t(c), 0.f) {
        if (w <= 0 || h <= 0 || c <= 0)
            throw Error("probability map dimensions must be positive");
    }

    float score(int x, int y, int c) const {
        return data[(std::size_t(y) * std::size_t(width) + std::size_t(x)) * std::size_t(channels) +
                    std::size_t(c)];
    }
    float& score(int x, int y, int c) {
        return data[(std::size_t(y) * std::size_t(width) + std::size_t(x)) * std::size_t(channels) +
                    std::size_t(c)];
    }
};

/// Interleaved 8-bit RGB image, row-major, data length 3*width*height.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(std::size_t(w) * std::size_t(h) * 3, 0) {
        if (w <= 0 || h <= 0)
            throw Error("image dimensions must be positive");
    }

    std::size_t pixels() const { return std::size_t(width) * std::size_t(height); }
    Rgb at(int x, int y) const {
        const std::size_t i = (std::size_t(y) * std::size_t(width) + std::size_t(x)) * 3;
        return Rgb{data[i], data[i + 1], data[i + 2]};
    }
    void set(int x, int y, Rgb c) {
        const std::size_t i = (std::size_t(y) * std::size_t(width) + std::size_t(x)) * 3;
        data[i] = c.r;
        data[i + 1] = c.g;
        data[i + 2] = c.b;
    }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

}  // namespace landrisk
