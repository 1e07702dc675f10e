#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

#include "landrisk/class_table.hpp"

using namespace landrisk;

namespace {

nlohmann::json entry(int id, const char* label, int r, int g, int b, int risk) {
    return nlohmann::json{{"id", id}, {"label", label}, {"color", {r, g, b}}, {"risk", risk}};
}

const std::string kDefaultTablePath = std::string(LANDRISK_CONFIG_DIR) + "/classes_sdd.json";

}  // namespace

TEST_CASE("default table reproduces the class-to-risk grouping") {
    const ClassTable table = ClassTable::from_file(kDefaultTablePath);
    REQUIRE(table.size() == 24);

    CHECK(table.entry(23).label == "person");
    CHECK(table.entry(23).risk == 5);
    CHECK(table.entry(5).label == "paved-area");
    CHECK(table.entry(5).risk == 1);

    const RiskLevel expected[24] = {0, 0, 0, 0, 0, 1, 1, 2, 2, 2, 2, 2,
                                    3, 3, 3, 3, 3, 3, 3, 3, 4, 4, 4, 5};
    for (int id = 0; id < 24; ++id)
        CHECK(table.risk_of(ClassId(id)) == expected[id]);
}

TEST_CASE("table validation rejects malformed documents") {
    SUBCASE("duplicate color") {
        nlohmann::json doc = nlohmann::json::array(
            {entry(0, "a", 0, 0, 0, 0), entry(1, "b", 0, 0, 0, 1)});
        CHECK_THROWS_WITH_AS(ClassTable::from_json(doc), doctest::Contains("duplicate color"), Error);
    }
    SUBCASE("duplicate id") {
        nlohmann::json doc = nlohmann::json::array(
            {entry(0, "a", 0, 0, 0, 0), entry(0, "b", 1, 1, 1, 1)});
        CHECK_THROWS_WITH_AS(ClassTable::from_json(doc), doctest::Contains("duplicate id"), Error);
    }
    SUBCASE("non-contiguous ids") {
        nlohmann::json doc = nlohmann::json::array(
            {entry(0, "a", 0, 0, 0, 0), entry(2, "b", 1, 1, 1, 1)});
        CHECK_THROWS_WITH_AS(ClassTable::from_json(doc), doctest::Contains("non-contiguous"), Error);
    }
    SUBCASE("risk out of range") {
        nlohmann::json doc = nlohmann::json::array({entry(0, "a", 0, 0, 0, 6)});
        CHECK_THROWS_WITH_AS(ClassTable::from_json(doc), doctest::Contains("risk"), Error);
    }
    SUBCASE("diagnostic names the offending entry") {
        nlohmann::json doc = nlohmann::json::array({entry(0, "ok", 0, 0, 0, 0), entry(1, "broken", 1, 1, 1, 9)});
        CHECK_THROWS_WITH_AS(ClassTable::from_json(doc), doctest::Contains("broken"), Error);
    }
}

TEST_CASE("map_class_to_risk applies the table pointwise") {
    const ClassTable table = ClassTable::from_file(kDefaultTablePath);

    SUBCASE("single person pixel") {
        LabelMap m(1, 1);
        m.at(0, 0) = 23;
        const RiskMap risk = map_class_to_risk(m, table);
        CHECK(risk.at(0, 0) == 5);
    }
    SUBCASE("2x2 mixed classes") {
        LabelMap m(2, 2);
        m.at(0, 0) = 2;   // grass
        m.at(1, 0) = 5;   // paved-area
        m.at(0, 1) = 21;  // car
        m.at(1, 1) = 12;  // water
        const RiskMap risk = map_class_to_risk(m, table);
        CHECK(risk.at(0, 0) == 0);
        CHECK(risk.at(1, 0) == 1);
        CHECK(risk.at(0, 1) == 4);
        CHECK(risk.at(1, 1) == 3);
    }
    SUBCASE("uniform map stays uniform") {
        LabelMap m(7, 3, ClassId(0));
        const RiskMap risk = map_class_to_risk(m, table);
        CHECK(std::all_of(risk.data.begin(), risk.data.end(), [](RiskLevel r) { return r == 0; }));
    }
    SUBCASE("out-of-range id error carries pixel coordinates") {
        LabelMap m(3, 2, ClassId(0));
        m.at(2, 1) = 24;
        CHECK_THROWS_WITH_AS(map_class_to_risk(m, table), doctest::Contains("(2,1)"), Error);
    }
    SUBCASE("pointwise: permuting pixels permutes the output") {
        std::mt19937 rng(7);
        LabelMap m(5, 4);
        for (auto& v : m.data)
            v = ClassId(rng() % 24);
        const RiskMap risk = map_class_to_risk(m, table);

        std::vector<std::size_t> perm(m.pixels());
        for (std::size_t i = 0; i < perm.size(); ++i)
            perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);

        LabelMap shuffled(5, 4);
        for (std::size_t i = 0; i < perm.size(); ++i)
            shuffled.data[i] = m.data[perm[i]];
        const RiskMap shuffled_risk = map_class_to_risk(shuffled, table);
        for (std::size_t i = 0; i < perm.size(); ++i)
            CHECK(shuffled_risk.data[i] == risk.data[perm[i]]);
    }
    SUBCASE("re-grouping an already mapped raster is the identity") {
        // risk levels, viewed as 6 classes each mapping to itself
        nlohmann::json doc = nlohmann::json::array();
        for (int level = 0; level < kRiskLevels; ++level)
            doc.push_back(entry(level, ("level" + std::to_string(level)).c_str(), level, level, level,
                                level));
        const ClassTable identity = ClassTable::from_json(doc);

        std::mt19937 rng(3);
        LabelMap m(9, 6);
        for (auto& v : m.data)
            v = ClassId(rng() % 24);
        const RiskMap once = map_class_to_risk(m, table);

        LabelMap as_labels(once.width, once.height);
        std::copy(once.data.begin(), once.data.end(), as_labels.data.begin());
        const RiskMap twice = map_class_to_risk(as_labels, identity);
        CHECK(twice.data == once.data);
    }
}

TEST_CASE("argmax_labels decodes backend scores") {
    SUBCASE("strict maximum") {
        ProbabilityMap p(1, 1, 2);
        p.score(0, 0, 0) = 0.1f;
        p.score(0, 0, 1) = 0.9f;
        CHECK(argmax_labels(p).at(0, 0) == 1);
    }
    SUBCASE("tie breaks toward the lowest id") {
        ProbabilityMap p(1, 1, 2);
        p.score(0, 0, 0) = 0.5f;
        p.score(0, 0, 1) = 0.5f;
        CHECK(argmax_labels(p).at(0, 0) == 0);
    }
    SUBCASE("pixels decode independently") {
        ProbabilityMap p(2, 1, 2);
        p.score(0, 0, 0) = 1.f;
        p.score(0, 0, 1) = 0.f;
        p.score(1, 0, 0) = 0.f;
        p.score(1, 0, 1) = 1.f;
        const LabelMap labels = argmax_labels(p);
        CHECK(labels.at(0, 0) == 0);
        CHECK(labels.at(1, 0) == 1);
    }
    SUBCASE("invariant under adding a constant to all channels of a pixel") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<float> score(-3.f, 3.f);
        ProbabilityMap p(6, 5, 24);
        for (auto& v : p.data)
            v = score(rng);
        const LabelMap base = argmax_labels(p);

        ProbabilityMap shifted = p;
        std::uniform_real_distribution<float> offset(-10.f, 10.f);
        for (int y = 0; y < p.height; ++y) {
            const float delta = offset(rng);
            for (int x = 0; x < p.width; ++x)
                for (int c = 0; c < p.channels; ++c)
                    shifted.score(x, y, c) += delta;
        }
        CHECK(argmax_labels(shifted) == base);
    }
    SUBCASE("channel count must match the table") {
        const ClassTable table = ClassTable::from_file(kDefaultTablePath);
        ProbabilityMap p(1, 1, 3);
        CHECK_THROWS_WITH_AS(argmax_labels(p, table), doctest::Contains("24"), Error);
    }
    SUBCASE("pixel with no finite score is rejected") {
        ProbabilityMap p(1, 1, 2);
        p.score(0, 0, 0) = std::numeric_limits<float>::quiet_NaN();
        p.score(0, 0, 1) = std::numeric_limits<float>::infinity();
        CHECK_THROWS_AS(argmax_labels(p), Error);
    }
}
