#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "landrisk/types.hpp"

namespace landrisk {

struct ClassEntry {
    ClassId id = 0;
    std::string label;
    Rgb color;
    RiskLevel risk = 0;
};

/// The class taxonomy: contiguous ids 0..N-1, a display color per class
/// (pairwise distinct, so color-coded annotation images decode uniquely)
/// and the total class→risk-level mapping.
///
/// Tables are immutable after construction and safe to share across threads.
class ClassTable {
public:
    /// Builds and validates a table from a JSON array of
    /// {"id": int, "label": str, "color": [r,g,b], "risk": int}.
    /// Rejects duplicate ids, non-contiguous ids, duplicate colors and
    /// risks outside [0,5]; diagnostics name the offending entry.
    static ClassTable from_json(const nlohmann::json& doc);
    static ClassTable from_file(const std::string& path);

    int size() const { return int(entries_.size()); }
    const std::vector<ClassEntry>& entries() const { return entries_; }
    const ClassEntry& entry(ClassId id) const { return entries_[id]; }

    RiskLevel risk_of(ClassId id) const { return risk_lut_[id]; }
    Rgb color_of(ClassId id) const { return entries_[id].color; }
    std::optional<ClassId> class_for_color(Rgb c) const;

    /// class→risk column as a flat vector indexed by class id.
    std::vector<RiskLevel> risk_grouping() const;

private:
    std::vector<ClassEntry> entries_;
    std::unordered_map<std::uint32_t, ClassId> by_color_;
    std::array<RiskLevel, 256> risk_lut_{};
};

/// Pointwise class→risk substitution; output dimensions equal input's.
/// Throws with pixel coordinates on an id outside the table.
RiskMap map_class_to_risk(const LabelMap& labels, const ClassTable& table);

/// Per-pixel index of the maximum score. Ties break toward the lowest
/// class id; non-finite scores never win. Throws if some pixel has no
/// finite score at all.
LabelMap argmax_labels(const ProbabilityMap& probs);

/// Same, but first checks the channel count against the active table.
LabelMap argmax_labels(const ProbabilityMap& probs, const ClassTable& table);

}  // namespace landrisk
