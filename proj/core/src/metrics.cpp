#include "landrisk/metrics.hpp"

#include <algorithm>
#include <thread>

#include <nlohmann/json.hpp>

namespace landrisk {

ConfusionMatrix::ConfusionMatrix(int n) : n_(n), counts_(std::size_t(n) * std::size_t(n), 0) {
    if (n <= 0)
        throw Error("confusion matrix: class count must be positive");
}

namespace {

void count_rows(const LabelMap& pred, const LabelMap& gt, int n, int y0, int y1, ConfusionMatrix& out) {
    for (int y = y0; y < y1; ++y) {
        const std::size_t row = gt.index(0, y);
        for (int x = 0; x < gt.width; ++x) {
            const ClassId g = gt.data[row + std::size_t(x)];
            const ClassId p = pred.data[row + std::size_t(x)];
            if (int(g) >= n || int(p) >= n)
                throw Error("confusion: class id " + std::to_string(int(g) >= n ? int(g) : int(p)) +
                            " at pixel (" + std::to_string(x) + "," + std::to_string(y) +
                            ") is outside the " + std::to_string(n) + "-class range");
            ++out.at(g, p);
        }
    }
}

}  // namespace

ConfusionMatrix ConfusionMatrix::from_maps(const LabelMap& pred, const LabelMap& gt, int n, int threads) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw Error("confusion: dimension mismatch, pred " + std::to_string(pred.width) + "x" +
                    std::to_string(pred.height) + " vs gt " + std::to_string(gt.width) + "x" +
                    std::to_string(gt.height));

    ConfusionMatrix cm(n);
    threads = std::clamp(threads, 1, std::max(1, gt.height));
    if (threads == 1) {
        count_rows(pred, gt, n, 0, gt.height, cm);
        return cm;
    }

    std::vector<ConfusionMatrix> partial(static_cast<std::size_t>(threads), ConfusionMatrix(n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    const int band = (gt.height + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                count_rows(pred, gt, n, t * band, std::min(gt.height, (t + 1) * band),
                           partial[std::size_t(t)]);
            } catch (...) {
                errors[std::size_t(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (const auto& err : errors)
        if (err)
            std::rethrow_exception(err);
    for (const auto& part : partial)
        cm.merge(part);
    return cm;
}

std::uint64_t ConfusionMatrix::row_sum(int k) const {
    std::uint64_t s = 0;
    for (int j = 0; j < n_; ++j)
        s += at(k, j);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(int k) const {
    std::uint64_t s = 0;
    for (int i = 0; i < n_; ++i)
        s += at(i, k);
    return s;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t s = 0;
    for (int i = 0; i < n_; ++i)
        s += at(i, i);
    return s;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t s = 0;
    for (const std::uint64_t c : counts_)
        s += c;
    return s;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
    if (other.n_ != n_)
        throw Error("confusion merge: class counts differ");
    for (std::size_t i = 0; i < counts_.size(); ++i)
        counts_[i] += other.counts_[i];
}

std::vector<std::optional<double>> iou_per_class(const ConfusionMatrix& cm) {
    const int n = cm.classes();
    std::vector<std::optional<double>> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const std::uint64_t tp = cm.at(k, k);
        const std::uint64_t fn = cm.row_sum(k) - tp;
        const std::uint64_t fp = cm.col_sum(k) - tp;
        const std::uint64_t denom = tp + fp + fn;
        if (denom > 0)
            out[std::size_t(k)] = double(tp) / double(denom);
    }
    return out;
}

namespace {

double mean_of_defined(const std::vector<std::optional<double>>& values, const char* what) {
    double sum = 0;
    std::uint64_t defined = 0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++defined;
        }
    }
    if (defined == 0)
        throw Error(std::string(what) + ": no evaluable class");
    return sum / double(defined);
}

}  // namespace

double mean_iou(const ConfusionMatrix& cm) { return mean_of_defined(iou_per_class(cm), "mean_iou"); }

std::vector<std::optional<double>> f1_per_class(const ConfusionMatrix& cm) {
    const int n = cm.classes();
    std::vector<std::optional<double>> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const std::uint64_t tp = cm.at(k, k);
        const std::uint64_t fn = cm.row_sum(k) - tp;
        const std::uint64_t fp = cm.col_sum(k) - tp;
        const std::uint64_t denom = 2 * tp + fp + fn;
        if (denom > 0)
            out[std::size_t(k)] = double(2 * tp) / double(denom);
    }
    return out;
}

double mean_f1(const ConfusionMatrix& cm) { return mean_of_defined(f1_per_class(cm), "mean_f1"); }

double pixel_accuracy(const ConfusionMatrix& cm) {
    const std::uint64_t total = cm.total();
    if (total == 0)
        throw Error("pixel_accuracy: empty confusion matrix");
    return double(cm.trace()) / double(total);
}

double balanced_accuracy(const ConfusionMatrix& cm) {
    double sum = 0;
    int present = 0;
    for (int k = 0; k < cm.classes(); ++k) {
        const std::uint64_t row = cm.row_sum(k);
        if (row > 0) {
            sum += double(cm.at(k, k)) / double(row);
            ++present;
        }
    }
    if (present == 0)
        throw Error("balanced_accuracy: no class present in the ground truth");
    return sum / double(present);
}

ConfusionMatrix coarsen(const ConfusionMatrix& cm, std::span<const RiskLevel> grouping, int n_groups) {
    if (std::ssize(grouping) < cm.classes())
        throw Error("coarsen: grouping covers " + std::to_string(grouping.size()) + " classes, need " +
                    std::to_string(cm.classes()));
    for (int k = 0; k < cm.classes(); ++k)
        if (int(grouping[std::size_t(k)]) >= n_groups)
            throw Error("coarsen: class " + std::to_string(k) + " maps to group " +
                        std::to_string(int(grouping[std::size_t(k)])) + " outside [0," +
                        std::to_string(n_groups - 1) + "]");

    ConfusionMatrix out(n_groups);
    for (int i = 0; i < cm.classes(); ++i)
        for (int j = 0; j < cm.classes(); ++j)
            out.at(grouping[std::size_t(i)], grouping[std::size_t(j)]) += cm.at(i, j);
    return out;
}

std::vector<double> row_normalize(const ConfusionMatrix& cm) {
    const int n = cm.classes();
    std::vector<double> out(std::size_t(n) * std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t row = cm.row_sum(i);
        if (row == 0)
            continue;
        for (int j = 0; j < n; ++j)
            out[std::size_t(i) * n + j] = double(cm.at(i, j)) / double(row);
    }
    return out;
}

MetricsReport MetricsReport::from(const ConfusionMatrix& cm) {
    MetricsReport r;
    r.n_classes = cm.classes();
    r.per_class_iou = iou_per_class(cm);
    r.mean_iou = landrisk::mean_iou(cm);
    r.per_class_f1 = f1_per_class(cm);
    r.mean_f1 = landrisk::mean_f1(cm);
    r.pixel_accuracy = landrisk::pixel_accuracy(cm);
    r.balanced_accuracy = landrisk::balanced_accuracy(cm);
    const auto counts = cm.counts();
    r.confusion.assign(counts.begin(), counts.end());
    return r;
}

nlohmann::json MetricsReport::to_json() const {
    auto optional_list = [](const std::vector<std::optional<double>>& values) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& v : values) {
            if (v)
                arr.push_back(*v);
            else
                arr.push_back(nullptr);
        }
        return arr;
    };
    return nlohmann::json{{"n_classes", n_classes},
                          {"per_class_iou", optional_list(per_class_iou)},
                          {"mean_iou", mean_iou},
                          {"per_class_f1", optional_list(per_class_f1)},
                          {"mean_f1", mean_f1},
                          {"pixel_accuracy", pixel_accuracy},
                          {"balanced_accuracy", balanced_accuracy},
                          {"confusion", confusion}};
}

}  // namespace landrisk
