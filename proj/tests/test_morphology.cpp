#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "landrisk/morphology.hpp"
#include "oracles.hpp"

using namespace landrisk;

TEST_CASE("dilation basics") {
    SUBCASE("all-zero radii is the identity") {
        std::mt19937 rng(1);
        const RiskMap m = oracle::random_risk(rng, 20);
        CHECK(dilate_risk(m, DilationPolicy{}) == m);
    }
    SUBCASE("radius-1 level-5 center floods a 3x3 map") {
        RiskMap m(3, 3, RiskLevel(0));
        m.at(1, 1) = 5;
        DilationPolicy policy;
        policy.radius_per_level[5] = 1;
        const RiskMap out = dilate_risk(m, policy);
        for (const RiskLevel v : out.data)
            CHECK(v == 5);
    }
    SUBCASE("output never falls below the input") {
        std::mt19937 rng(2);
        std::uniform_int_distribution<int> radius(0, 6);
        for (int trial = 0; trial < 40; ++trial) {
            const RiskMap m = oracle::random_risk(rng, 16);
            DilationPolicy policy;
            for (auto& r : policy.radius_per_level)
                r = radius(rng);
            const RiskMap out = dilate_risk(m, policy);
            for (std::size_t i = 0; i < m.pixels(); ++i)
                CHECK(out.data[i] >= m.data[i]);
        }
    }
    SUBCASE("negative radius rejected") {
        RiskMap m(2, 2, RiskLevel(0));
        DilationPolicy policy;
        policy.radius_per_level[3] = -1;
        CHECK_THROWS_AS(dilate_risk(m, policy), Error);
    }
}

TEST_CASE("dilation matches the all-pairs oracle") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> radius(0, 5);
    for (int trial = 0; trial < 60; ++trial) {
        const RiskMap m = oracle::random_risk(rng, 14);
        DilationPolicy policy;
        for (auto& r : policy.radius_per_level)
            r = radius(rng);
        policy.radius_per_level[0] = 0;
        const RiskMap fast = dilate_risk(m, policy);
        const RiskMap ref = oracle::dilate(m, policy.radius_per_level);
        CHECK(fast == ref);
    }
}

TEST_CASE("dilation monotonicity in the policy") {
    std::mt19937 rng(4);
    std::uniform_int_distribution<int> radius(0, 4);
    std::uniform_int_distribution<int> level(1, 5);
    for (int trial = 0; trial < 30; ++trial) {
        const RiskMap m = oracle::random_risk(rng, 12);
        DilationPolicy policy;
        for (auto& r : policy.radius_per_level)
            r = radius(rng);
        DilationPolicy larger = policy;
        larger.radius_per_level[std::size_t(level(rng))] += 2;

        const RiskMap out = dilate_risk(m, policy);
        const RiskMap out_larger = dilate_risk(m, larger);
        for (std::size_t i = 0; i < m.pixels(); ++i)
            CHECK(out_larger.data[i] >= out.data[i]);

        // pixels at the global maximum keep their level
        const RiskLevel top = *std::max_element(m.data.begin(), m.data.end());
        for (std::size_t i = 0; i < m.pixels(); ++i)
            if (m.data[i] == top)
                CHECK(out.data[i] == top);
    }
}

TEST_CASE("clearance field") {
    SUBCASE("fully unsafe map is all zero") {
        RiskMap m(4, 3, RiskLevel(5));
        const DistanceMap d = distance_to_risk(m, RiskLevel(2));
        for (const double v : d.data)
            CHECK(v == 0.0);
    }
    SUBCASE("all-safe 5x5 map: center clears 2.5 to the border") {
        RiskMap m(5, 5, RiskLevel(0));
        const DistanceMap d = distance_to_risk(m, RiskLevel(1));
        CHECK(d.at(2, 2) == 2.5);
        CHECK(d.at(0, 0) == 0.5);
        CHECK(d.at(1, 2) == 1.5);
    }
    SUBCASE("1-pixel strip: the long border caps everything at 0.5") {
        RiskMap m(5, 1, RiskLevel(0));
        m.at(2, 0) = 5;
        const DistanceMap d = distance_to_risk(m, RiskLevel(4));
        CHECK(d.at(0, 0) == 0.5);
        CHECK(d.at(1, 0) == 0.5);  // top/bottom edges are nearer than the core
        CHECK(d.at(2, 0) == 0.0);
        CHECK(d.at(3, 0) == 0.5);
        CHECK(d.at(4, 0) == 0.5);
    }
    SUBCASE("middle row of a 5x3 map with a level-5 core column") {
        RiskMap m(5, 3, RiskLevel(0));
        for (int y = 0; y < 3; ++y)
            m.at(2, y) = 5;
        const DistanceMap d = distance_to_risk(m, RiskLevel(4));
        CHECK(d.at(0, 1) == 0.5);  // left border
        CHECK(d.at(1, 1) == 1.0);  // unsafe core nearer than any border
        CHECK(d.at(2, 1) == 0.0);
        CHECK(d.at(3, 1) == 1.0);
        CHECK(d.at(4, 1) == 0.5);
    }
}

TEST_CASE("clearance field matches the exhaustive oracle exactly") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> threshold(0, 5);
    for (int trial = 0; trial < 120; ++trial) {
        const RiskMap m = oracle::random_risk(rng, 24);
        const RiskLevel t = RiskLevel(threshold(rng));
        const std::vector<double> sq = clearance_squared(m, t);
        const std::vector<double> ref = oracle::clearance_squared(m, t);
        REQUIRE(sq.size() == ref.size());
        for (std::size_t i = 0; i < sq.size(); ++i)
            CHECK(sq[i] == ref[i]);  // exact, no tolerance

        const DistanceMap d = distance_to_risk(m, t);
        const std::vector<double> ref_d = oracle::distance(m, t);
        for (std::size_t i = 0; i < ref_d.size(); ++i)
            CHECK(d.data[i] == ref_d[i]);
    }
}

TEST_CASE("connected regions") {
    SUBCASE("all-safe map is one region") {
        RiskMap m(7, 5, RiskLevel(1));
        const RegionLabeling labeling = connected_regions(m, RiskLevel(1));
        REQUIRE(labeling.regions.size() == 1);
        CHECK(labeling.regions[0].area == 35);
        CHECK(labeling.regions[0].min_x == 0);
        CHECK(labeling.regions[0].max_x == 6);
        CHECK(labeling.regions[0].min_y == 0);
        CHECK(labeling.regions[0].max_y == 4);
    }
    SUBCASE("checkerboard splits into singletons under 4-connectivity") {
        for (const auto& [w, h] : {std::pair{6, 4}, std::pair{5, 5}, std::pair{3, 8}}) {
            RiskMap m(w, h);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    m.at(x, y) = ((x + y) % 2 == 0) ? RiskLevel(0) : RiskLevel(5);
            const RegionLabeling labeling = connected_regions(m, RiskLevel(2));
            CHECK(labeling.regions.size() == std::size_t((w * h + 1) / 2));
            for (const Region& r : labeling.regions)
                CHECK(r.area == 1);
        }
    }
    SUBCASE("empty safe set yields no regions") {
        RiskMap m(3, 3, RiskLevel(4));
        const RegionLabeling labeling = connected_regions(m, RiskLevel(3));
        CHECK(labeling.regions.empty());
        for (const auto id : labeling.region_of)
            CHECK(id == -1);
    }
    SUBCASE("matches flood fill on random maps") {
        std::mt19937 rng(6);
        std::uniform_int_distribution<int> threshold(0, 5);
        for (int trial = 0; trial < 80; ++trial) {
            const RiskMap m = oracle::random_risk(rng, 20);
            const RiskLevel t = RiskLevel(threshold(rng));
            const RegionLabeling labeling = connected_regions(m, t);
            const oracle::FloodRegions ref = oracle::flood_regions(m, t);

            REQUIRE(labeling.regions.size() == ref.areas.size());
            // same canonical numbering: ids assigned in row-major first-pixel order
            CHECK(labeling.region_of == ref.region_of);
            for (std::size_t r = 0; r < ref.areas.size(); ++r)
                CHECK(labeling.regions[r].area == ref.areas[r]);

            // components partition the safe set
            std::uint64_t covered = 0;
            for (const Region& region : labeling.regions)
                covered += region.area;
            std::uint64_t safe = 0;
            for (const RiskLevel v : m.data)
                if (v <= t)
                    ++safe;
            CHECK(covered == safe);
        }
    }
}
