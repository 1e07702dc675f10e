#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "landrisk/class_table.hpp"
#include "landrisk/image_io.hpp"
#include "landrisk/render.hpp"
#include "oracles.hpp"

using namespace landrisk;

namespace {

const std::string kConfigDir = LANDRISK_CONFIG_DIR;

ClassTable default_table() { return ClassTable::from_file(kConfigDir + "/classes_sdd.json"); }
RiskColormap default_cmap() { return RiskColormap::from_file(kConfigDir + "/colormap.json"); }

}  // namespace

TEST_CASE("default colormap runs blue to red") {
    const RiskColormap cmap = default_cmap();
    CHECK(cmap.colors[0] == Rgb{0, 0, 255});    // blue
    CHECK(cmap.colors[1] == Rgb{0, 255, 255});  // cyan
    CHECK(cmap.colors[2] == Rgb{0, 255, 0});    // green
    CHECK(cmap.colors[3] == Rgb{255, 255, 0});  // yellow
    CHECK(cmap.colors[4] == Rgb{255, 165, 0});  // orange
    CHECK(cmap.colors[5] == Rgb{255, 0, 0});    // red
}

TEST_CASE("colormap validation") {
    nlohmann::json doc = {{"risk_colors", nlohmann::json::array()}};
    for (int i = 0; i < 6; ++i)
        doc["risk_colors"].push_back({0, 0, i});
    CHECK(RiskColormap::from_json(doc).colors[3] == Rgb{0, 0, 3});

    doc["risk_colors"][5] = {0, 0, 0};
    CHECK_THROWS_WITH_AS(RiskColormap::from_json(doc), doctest::Contains("duplicate"), Error);

    doc["risk_colors"].erase(5);
    CHECK_THROWS_AS(RiskColormap::from_json(doc), Error);
}

TEST_CASE("risk rendering") {
    const RiskColormap cmap = default_cmap();
    SUBCASE("uniform level-5 map renders uniform red") {
        RiskMap m(4, 2, RiskLevel(5));
        const RgbImage img = render_risk(m, cmap);
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 4; ++x)
                CHECK(img.at(x, y) == cmap.colors[5]);
    }
    SUBCASE("render then color-decode is the identity") {
        std::mt19937 rng(12);
        const RiskMap m = oracle::random_risk(rng, 24);
        CHECK(decode_risk_image(render_risk(m, cmap), cmap) == m);
    }
    SUBCASE("unknown color is rejected with coordinates") {
        RgbImage img(2, 2);
        img.set(0, 0, cmap.colors[0]);
        img.set(1, 0, cmap.colors[1]);
        img.set(0, 1, Rgb{7, 7, 7});
        img.set(1, 1, cmap.colors[2]);
        CHECK_THROWS_WITH_AS(decode_risk_image(img, cmap), doctest::Contains("(0,1)"), Error);
    }
}

TEST_CASE("overlay blending") {
    const RiskColormap cmap = default_cmap();
    std::mt19937 rng(13);
    RiskMap risk = oracle::random_risk(rng, 16);
    RgbImage base(risk.width, risk.height);
    for (auto& v : base.data)
        v = std::uint8_t(rng() % 256);

    SUBCASE("alpha 0 returns the base exactly") {
        CHECK(overlay(base, risk, cmap, 0.0) == base);
    }
    SUBCASE("alpha 1 equals render_risk exactly") {
        CHECK(overlay(base, risk, cmap, 1.0) == render_risk(risk, cmap));
    }
    SUBCASE("alpha 0.5 rounds half up") {
        RgbImage black(1, 1);
        RiskMap m(1, 1, RiskLevel(5));  // red (255,0,0)
        const RgbImage out = overlay(black, m, cmap, 0.5);
        CHECK(out.at(0, 0) == Rgb{128, 0, 0});
    }
    SUBCASE("dimension mismatch rejected") {
        RgbImage wrong(risk.width + 1, risk.height);
        CHECK_THROWS_AS(overlay(wrong, risk, cmap, 0.5), Error);
    }
    SUBCASE("alpha outside [0,1] rejected") {
        CHECK_THROWS_AS(overlay(base, risk, cmap, 1.5), Error);
        CHECK_THROWS_AS(overlay(base, risk, cmap, -0.1), Error);
    }
}

TEST_CASE("png codec") {
    SUBCASE("round-trips random images byte-exactly") {
        std::mt19937 rng(14);
        for (int trial = 0; trial < 20; ++trial) {
            std::uniform_int_distribution<int> side(1, 40);
            RgbImage img(side(rng), side(rng));
            for (auto& v : img.data)
                v = std::uint8_t(rng() % 256);
            const std::vector<std::uint8_t> bytes = encode_png(img);
            CHECK(decode_png(bytes) == img);
        }
    }
    SUBCASE("encoding is deterministic") {
        std::mt19937 rng(15);
        RgbImage img(33, 21);
        for (auto& v : img.data)
            v = std::uint8_t(rng() % 256);
        CHECK(encode_png(img) == encode_png(img));
    }
    SUBCASE("garbage bytes are rejected") {
        std::vector<std::uint8_t> junk = {1, 2, 3, 4, 5, 6, 7, 8, 9};
        CHECK_THROWS_AS(decode_png(junk), Error);
    }
    SUBCASE("truncated stream is rejected") {
        RgbImage img(8, 8);
        std::vector<std::uint8_t> bytes = encode_png(img);
        bytes.resize(bytes.size() / 2);
        CHECK_THROWS_AS(decode_png(bytes), Error);
    }
}

TEST_CASE("label image codec") {
    const ClassTable table = default_table();
    SUBCASE("single person pixel decodes to class 23") {
        LabelMap m(1, 1, ClassId(23));
        const auto bytes = encode_label_image(m, table);
        const LabelMap back = decode_label_image(bytes, table);
        CHECK(back.at(0, 0) == 23);
    }
    SUBCASE("round-trips random maps") {
        std::mt19937 rng(16);
        for (int trial = 0; trial < 15; ++trial) {
            const LabelMap m = oracle::random_labels(rng, 32, 24);
            CHECK(decode_label_image(encode_label_image(m, table), table) == m);
        }
    }
    SUBCASE("encoding rejects ids outside the table") {
        LabelMap m(2, 2, ClassId(0));
        m.at(1, 1) = 24;
        CHECK_THROWS_AS(encode_label_image(m, table), Error);
    }
    SUBCASE("color outside the table is rejected with pixel coordinates") {
        RgbImage img(3, 2);
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 3; ++x)
                img.set(x, y, table.color_of(2));
        img.set(2, 1, Rgb{250, 250, 250});
        const auto bytes = encode_png(img);
        CHECK_THROWS_WITH_AS(decode_label_image(bytes, table), doctest::Contains("(2,1)"), Error);
    }
}

TEST_CASE("raw codec") {
    const ClassTable table = default_table();
    SUBCASE("direct layout") {
        std::vector<std::uint8_t> bytes = {'R', 'L', 'M', '1', 2, 0, 0, 0, 1, 0, 0, 0, 5, 23};
        const LabelMap m = decode_raw_labels(bytes, table);
        CHECK(m.width == 2);
        CHECK(m.height == 1);
        CHECK(m.at(0, 0) == 5);
        CHECK(m.at(1, 0) == 23);
        CHECK(encode_raw(m) == bytes);
    }
    SUBCASE("round-trips label and risk maps byte-exactly") {
        std::mt19937 rng(18);
        for (int trial = 0; trial < 25; ++trial) {
            const LabelMap labels = oracle::random_labels(rng, 32, 24);
            CHECK(decode_raw_labels(encode_raw(labels), table) == labels);
            const RiskMap risk = oracle::random_risk(rng, 32);
            CHECK(decode_raw_risk(encode_raw(risk)) == risk);
        }
    }
    SUBCASE("truncated payload is rejected") {
        std::vector<std::uint8_t> bytes = {'R', 'L', 'M', '1', 2, 0, 0, 0, 2, 0, 0, 0, 5};
        CHECK_THROWS_WITH_AS(decode_raw_labels(bytes, table), doctest::Contains("truncated"), Error);
    }
    SUBCASE("bad magic is rejected") {
        std::vector<std::uint8_t> bytes = {'X', 'L', 'M', '1', 1, 0, 0, 0, 1, 0, 0, 0, 0};
        CHECK_THROWS_WITH_AS(decode_raw_labels(bytes, table), doctest::Contains("magic"), Error);
        CHECK_THROWS_AS(decode_raw_risk(encode_raw(LabelMap(1, 1))), Error);  // RLM1 into risk decoder
    }
    SUBCASE("invalid payload values are rejected") {
        std::vector<std::uint8_t> bytes = {'R', 'K', 'M', '1', 1, 0, 0, 0, 1, 0, 0, 0, 6};
        CHECK_THROWS_AS(decode_raw_risk(bytes), Error);
        std::vector<std::uint8_t> label_bytes = {'R', 'L', 'M', '1', 1, 0, 0, 0, 1, 0, 0, 0, 24};
        CHECK_THROWS_AS(decode_raw_labels(label_bytes, table), Error);
    }
}

TEST_CASE("raw stream reader") {
    const ClassTable table = default_table();
    SUBCASE("splits concatenated records") {
        LabelMap a(2, 1), b(1, 3);
        a.at(0, 0) = 1;
        a.at(1, 0) = 2;
        b.at(0, 1) = 23;
        const auto bytes_a = encode_raw(a);
        const auto bytes_b = encode_raw(b);
        std::string joined(bytes_a.begin(), bytes_a.end());
        joined.append(bytes_b.begin(), bytes_b.end());
        std::istringstream in(joined);

        RawLabelStreamReader reader(in);
        std::vector<std::uint8_t> record;
        REQUIRE(reader.next(record));
        CHECK(decode_raw_labels(record, table) == a);
        REQUIRE(reader.next(record));
        CHECK(decode_raw_labels(record, table) == b);
        CHECK_FALSE(reader.next(record));
    }
    SUBCASE("mid-record truncation throws") {
        const auto bytes = encode_raw(LabelMap(4, 4, ClassId(3)));
        std::string cut(bytes.begin(), bytes.end() - 5);
        std::istringstream in(cut);
        RawLabelStreamReader reader(in);
        std::vector<std::uint8_t> record;
        CHECK_THROWS_WITH_AS(reader.next(record), doctest::Contains("truncated"), Error);
    }
}
