#include "landrisk/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace landrisk {

namespace {

// Binary Chebyshev dilation, separable: a pixel is set in the output iff
// some set pixel lies within +-r horizontally, then the same vertically.
void dilate_binary_square(const std::vector<std::uint8_t>& in, std::vector<std::uint8_t>& tmp,
                          std::vector<std::uint8_t>& out, int w, int h, int r) {
    constexpr int kFar = std::numeric_limits<int>::min() / 2;
    for (int y = 0; y < h; ++y) {
        const std::size_t row = std::size_t(y) * std::size_t(w);
        int last = kFar;
        for (int x = 0; x < w; ++x) {
            if (in[row + std::size_t(x)])
                last = x;
            tmp[row + std::size_t(x)] = (x - last <= r) ? 1 : 0;
        }
        int next = -kFar;
        for (int x = w - 1; x >= 0; --x) {
            if (in[row + std::size_t(x)])
                next = x;
            if (next - x <= r)
                tmp[row + std::size_t(x)] = 1;
        }
    }
    std::vector<int> last_row(std::size_t(w), kFar);
    for (int y = 0; y < h; ++y) {
        const std::size_t row = std::size_t(y) * std::size_t(w);
        for (int x = 0; x < w; ++x) {
            if (tmp[row + std::size_t(x)])
                last_row[std::size_t(x)] = y;
            out[row + std::size_t(x)] = (y - last_row[std::size_t(x)] <= r) ? 1 : 0;
        }
    }
    std::vector<int> next_row(std::size_t(w), -kFar);
    for (int y = h - 1; y >= 0; --y) {
        const std::size_t row = std::size_t(y) * std::size_t(w);
        for (int x = 0; x < w; ++x) {
            if (tmp[row + std::size_t(x)])
                next_row[std::size_t(x)] = y;
            if (next_row[std::size_t(x)] - y <= r)
                out[row + std::size_t(x)] = 1;
        }
    }
}

}  // namespace

RiskMap dilate_risk(const RiskMap& risk, const DilationPolicy& policy) {
    RiskMap out = risk;
    if (policy.is_identity())
        return out;
    for (const int r : policy.radius_per_level)
        if (r < 0)
            throw Error("dilate: negative radius");

    const int w = risk.width;
    const int h = risk.height;
    const std::size_t n = risk.pixels();
    std::vector<std::uint8_t> level_set(n), tmp(n), dilated(n);

    for (int level = 1; level < kRiskLevels; ++level) {
        const int r = policy.radius_per_level[std::size_t(level)];
        if (r == 0)
            continue;
        bool present = false;
        for (std::size_t i = 0; i < n; ++i) {
            level_set[i] = (risk.data[i] == RiskLevel(level)) ? 1 : 0;
            present |= level_set[i] != 0;
        }
        if (!present)
            continue;
        dilate_binary_square(level_set, tmp, dilated, w, h, r);
        for (std::size_t i = 0; i < n; ++i)
            if (dilated[i] && out.data[i] < RiskLevel(level))
                out.data[i] = RiskLevel(level);
    }
    return out;
}

namespace {

constexpr double kInf = 1e30;

// 1D squared-distance lower envelope (Felzenszwalb & Huttenlocher).
// Inputs are exact integers (or kInf), so finite outputs are exact.
void edt_1d(const double* f, double* d, int n, double* z, int* v) {
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        while (s <= z[k]) {
            --k;
            s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q)
            ++k;
        const double dq = double(q) - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

std::vector<double> clearance_squared(const RiskMap& risk, RiskLevel threshold) {
    const int w = risk.width;
    const int h = risk.height;
    std::vector<double> sq(risk.pixels());
    for (std::size_t i = 0; i < risk.pixels(); ++i)
        sq[i] = risk.data[i] > threshold ? 0.0 : kInf;

    const int side = std::max(w, h);
    std::vector<double> f(static_cast<std::size_t>(side));
    std::vector<double> d(static_cast<std::size_t>(side));
    std::vector<double> z(static_cast<std::size_t>(side) + 1);
    std::vector<int> v(static_cast<std::size_t>(side));

    // columns, then rows
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y)
            f[std::size_t(y)] = sq[std::size_t(y) * w + x];
        edt_1d(f.data(), d.data(), h, z.data(), v.data());
        for (int y = 0; y < h; ++y)
            sq[std::size_t(y) * w + x] = d[std::size_t(y)];
    }
    for (int y = 0; y < h; ++y) {
        double* row = sq.data() + std::size_t(y) * w;
        std::copy(row, row + w, f.data());
        edt_1d(f.data(), d.data(), w, z.data(), v.data());
        std::copy(d.data(), d.data() + w, row);
    }

    // The frame edge truncates the world, so the border counts as unsafe:
    // clamp by the squared distance from the pixel center to the rectangle.
    for (int y = 0; y < h; ++y) {
        const double by = std::min(y + 0.5, h - y - 0.5);
        for (int x = 0; x < w; ++x) {
            const double bx = std::min(x + 0.5, w - x - 0.5);
            const double border = std::min(bx, by);
            double& cell = sq[std::size_t(y) * w + x];
            cell = std::min(cell, border * border);
        }
    }
    return sq;
}

DistanceMap distance_to_risk(const RiskMap& risk, RiskLevel threshold) {
    const std::vector<double> sq = clearance_squared(risk, threshold);
    DistanceMap out(risk.width, risk.height);
    for (std::size_t i = 0; i < sq.size(); ++i)
        out.data[i] = std::sqrt(sq[i]);
    return out;
}

namespace {

std::int32_t find_root(std::vector<std::int32_t>& parent, std::int32_t i) {
    while (parent[std::size_t(i)] != i) {
        parent[std::size_t(i)] = parent[std::size_t(parent[std::size_t(i)])];
        i = parent[std::size_t(i)];
    }
    return i;
}

}  // namespace

RegionLabeling connected_regions(const RiskMap& risk, RiskLevel threshold) {
    const int w = risk.width;
    const int h = risk.height;
    RegionLabeling out;
    out.width = w;
    out.height = h;
    out.region_of.assign(risk.pixels(), -1);

    // two-pass union-find over the safe set, 4-connectivity
    std::vector<std::int32_t> parent;
    parent.reserve(1024);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = risk.index(x, y);
            if (risk.data[i] > threshold)
                continue;
            const std::int32_t left = (x > 0) ? out.region_of[i - 1] : -1;
            const std::int32_t up = (y > 0) ? out.region_of[i - std::size_t(w)] : -1;
            if (left < 0 && up < 0) {
                const auto label = std::int32_t(parent.size());
                parent.push_back(label);
                out.region_of[i] = label;
            } else if (left >= 0 && up < 0) {
                out.region_of[i] = left;
            } else if (left < 0) {
                out.region_of[i] = up;
            } else {
                const std::int32_t a = find_root(parent, left);
                const std::int32_t b = find_root(parent, up);
                const std::int32_t root = std::min(a, b);
                parent[std::size_t(a)] = root;
                parent[std::size_t(b)] = root;
                out.region_of[i] = root;
            }
        }
    }

    // compress roots to dense ids in row-major first-pixel order
    std::vector<std::int32_t> dense(parent.size(), -1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = risk.index(x, y);
            std::int32_t label = out.region_of[i];
            if (label < 0)
                continue;
            label = find_root(parent, label);
            std::int32_t id = dense[std::size_t(label)];
            if (id < 0) {
                id = std::int32_t(out.regions.size());
                dense[std::size_t(label)] = id;
                Region region;
                region.id = id;
                region.min_x = region.max_x = region.first_x = x;
                region.min_y = region.max_y = region.first_y = y;
                out.regions.push_back(region);
            }
            out.region_of[i] = id;
            Region& region = out.regions[std::size_t(id)];
            ++region.area;
            region.min_x = std::min(region.min_x, x);
            region.max_x = std::max(region.max_x, x);
            region.min_y = std::min(region.min_y, y);
            region.max_y = std::max(region.max_y, y);
        }
    }
    return out;
}

}  // namespace landrisk
