#include "landrisk/class_table.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

namespace landrisk {

namespace {

std::string entry_name(const nlohmann::json& e, std::size_t position) {
    if (e.is_object() && e.contains("label") && e["label"].is_string())
        return "entry \"" + e["label"].get<std::string>() + "\"";
    return "entry #" + std::to_string(position);
}

}  // namespace

ClassTable ClassTable::from_json(const nlohmann::json& doc) {
    if (!doc.is_array() || doc.empty())
        throw Error("class table: expected a non-empty JSON array of entries");
    if (doc.size() > 256)
        throw Error("class table: at most 256 classes are supported");

    ClassTable table;
    table.entries_.resize(doc.size());
    std::vector<bool> seen(doc.size(), false);

    for (std::size_t pos = 0; pos < doc.size(); ++pos) {
        const auto& e = doc[pos];
        const std::string name = entry_name(e, pos);
        if (!e.is_object() || !e.contains("id") || !e.contains("label") || !e.contains("color") ||
            !e.contains("risk"))
            throw Error("class table: " + name + " must have keys id, label, color, risk");

        const auto id_raw = e["id"].get<std::int64_t>();
        if (id_raw < 0 || std::size_t(id_raw) >= doc.size())
            throw Error("class table: " + name + " has non-contiguous id " + std::to_string(id_raw) +
                        " (ids must cover 0.." + std::to_string(doc.size() - 1) + ")");
        if (seen[std::size_t(id_raw)])
            throw Error("class table: duplicate id " + std::to_string(id_raw) + " at " + name);
        seen[std::size_t(id_raw)] = true;

        const auto& color = e["color"];
        if (!color.is_array() || color.size() != 3)
            throw Error("class table: " + name + " color must be [r,g,b]");
        Rgb rgb;
        std::uint8_t* channels[3] = {&rgb.r, &rgb.g, &rgb.b};
        for (int c = 0; c < 3; ++c) {
            const auto v = color[c].get<std::int64_t>();
            if (v < 0 || v > 255)
                throw Error("class table: " + name + " color channel out of [0,255]");
            *channels[c] = std::uint8_t(v);
        }

        const auto risk = e["risk"].get<std::int64_t>();
        if (risk < 0 || risk >= kRiskLevels)
            throw Error("class table: " + name + " risk " + std::to_string(risk) + " outside [0," +
                        std::to_string(kRiskLevels - 1) + "]");

        ClassEntry& out = table.entries_[std::size_t(id_raw)];
        out.id = ClassId(id_raw);
        out.label = e["label"].get<std::string>();
        out.color = rgb;
        out.risk = RiskLevel(risk);
    }

    for (const ClassEntry& e : table.entries_) {
        const auto [it, inserted] = table.by_color_.emplace(pack_rgb(e.color), e.id);
        if (!inserted)
            throw Error("class table: duplicate color (" + std::to_string(e.color.r) + "," +
                        std::to_string(e.color.g) + "," + std::to_string(e.color.b) + ") shared by \"" +
                        table.entries_[it->second].label + "\" and \"" + e.label + "\"");
        table.risk_lut_[e.id] = e.risk;
    }
    return table;
}

ClassTable ClassTable::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("class table: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("class table: invalid JSON in " + path + ": " + e.what());
    }
    return from_json(doc);
}

std::optional<ClassId> ClassTable::class_for_color(Rgb c) const {
    const auto it = by_color_.find(pack_rgb(c));
    if (it == by_color_.end())
        return std::nullopt;
    return it->second;
}

std::vector<RiskLevel> ClassTable::risk_grouping() const {
    std::vector<RiskLevel> grouping(entries_.size());
    for (const ClassEntry& e : entries_)
        grouping[e.id] = e.risk;
    return grouping;
}

RiskMap map_class_to_risk(const LabelMap& labels, const ClassTable& table) {
    RiskMap out(labels.width, labels.height);
    const int n = table.size();
    for (int y = 0; y < labels.height; ++y) {
        const std::size_t row = labels.index(0, y);
        for (int x = 0; x < labels.width; ++x) {
            const ClassId id = labels.data[row + std::size_t(x)];
            if (int(id) >= n)
                throw Error("class id " + std::to_string(int(id)) + " at pixel (" + std::to_string(x) +
                            "," + std::to_string(y) + ") outside the class table of size " +
                            std::to_string(n));
            out.data[row + std::size_t(x)] = table.risk_of(id);
        }
    }
    return out;
}

LabelMap argmax_labels(const ProbabilityMap& probs) {
    if (probs.channels < 1)
        throw Error("argmax: probability map has no channels");
    if (probs.channels > 256)
        throw Error("argmax: more than 256 channels cannot map to class ids");

    LabelMap out(probs.width, probs.height);
    const int c_count = probs.channels;
    for (int y = 0; y < probs.height; ++y) {
        for (int x = 0; x < probs.width; ++x) {
            const std::size_t base =
                (std::size_t(y) * std::size_t(probs.width) + std::size_t(x)) * std::size_t(c_count);
            int best = -1;
            float best_score = -std::numeric_limits<float>::infinity();
            for (int c = 0; c < c_count; ++c) {
                const float s = probs.data[base + std::size_t(c)];
                if (std::isfinite(s) && (best < 0 || s > best_score)) {
                    best = c;
                    best_score = s;
                }
            }
            if (best < 0)
                throw Error("argmax: no finite score at pixel (" + std::to_string(x) + "," +
                            std::to_string(y) + ")");
            out.at(x, y) = ClassId(best);
        }
    }
    return out;
}

LabelMap argmax_labels(const ProbabilityMap& probs, const ClassTable& table) {
    if (probs.channels != table.size())
        throw Error("argmax: probability map has " + std::to_string(probs.channels) +
                    " channels but the class table has " + std::to_string(table.size()) + " classes");
    return argmax_labels(probs);
}

}  // namespace landrisk
