#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "landrisk/types.hpp"

namespace landrisk {

/// N×N integer count matrix, counts(i,j) = pixels with ground truth i
/// predicted as j. All metrics derive from these exact integer counts;
/// nothing is accumulated in floating point, so results are reproducible
/// bit-for-bit across runs, platforms and thread counts.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int n);

    /// Counts pred/gt pairs over two same-sized maps. `threads` > 1
    /// partitions the image into row bands and merges the partial
    /// matrices by entrywise addition; the result is identical to the
    /// sequential count.
    static ConfusionMatrix from_maps(const LabelMap& pred, const LabelMap& gt, int n, int threads = 1);

    int classes() const { return n_; }
    std::uint64_t at(int gt, int pred) const { return counts_[std::size_t(gt) * n_ + pred]; }
    std::uint64_t& at(int gt, int pred) { return counts_[std::size_t(gt) * n_ + pred]; }
    std::span<const std::uint64_t> counts() const { return counts_; }

    std::uint64_t row_sum(int k) const;
    std::uint64_t col_sum(int k) const;
    std::uint64_t trace() const;
    std::uint64_t total() const;

    /// Entrywise addition; both matrices must have the same class count.
    void merge(const ConfusionMatrix& other);

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> counts_;
};

/// Per-class TP/(TP+FP+FN); nullopt when the class is absent from both
/// prediction and ground truth (0/0), so absent classes never distort means.
std::vector<std::optional<double>> iou_per_class(const ConfusionMatrix& cm);

/// Arithmetic mean over the defined per-class IoU values.
/// Throws if no class is evaluable.
double mean_iou(const ConfusionMatrix& cm);

/// Per-class 2TP/(2TP+FP+FN); same 0/0 convention as IoU.
std::vector<std::optional<double>> f1_per_class(const ConfusionMatrix& cm);
double mean_f1(const ConfusionMatrix& cm);

/// trace/total. Throws on an empty matrix.
double pixel_accuracy(const ConfusionMatrix& cm);

/// Mean per-class recall over classes present in the ground truth.
/// Throws if every row is empty.
double balanced_accuracy(const ConfusionMatrix& cm);

/// Merges fine classes into groups: counts'(g(i),g(j)) = sum of counts(i,j).
/// The total is preserved and diagonal mass never decreases, so pixel
/// accuracy is monotone under any grouping.
ConfusionMatrix coarsen(const ConfusionMatrix& cm, std::span<const RiskLevel> grouping,
                        int n_groups = kRiskLevels);

/// Row-major n×n matrix with each nonempty row scaled to sum 1; empty rows
/// stay all-zero.
std::vector<double> row_normalize(const ConfusionMatrix& cm);

struct MetricsReport {
    int n_classes = 0;
    std::vector<std::optional<double>> per_class_iou;
    double mean_iou = 0;
    std::vector<std::optional<double>> per_class_f1;
    double mean_f1 = 0;
    double pixel_accuracy = 0;
    double balanced_accuracy = 0;
    std::vector<std::uint64_t> confusion;  // row-major n×n

    static MetricsReport from(const ConfusionMatrix& cm);
    nlohmann::json to_json() const;
};

}  // namespace landrisk
