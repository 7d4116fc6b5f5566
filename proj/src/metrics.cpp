#include "splnc/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "splnc/error.hpp"

namespace splnc {

EvalMode parse_eval_mode(std::string_view text) {
    if (text == "test") return EvalMode::test;
    if (text == "all" || text == "all-labeled" || text == "all_labeled") return EvalMode::all_labeled;
    throw Error(ErrorCode::ParseError, "unknown evaluation mode '" + std::string(text) + "'");
}

std::uint64_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

ConfusionMatrix confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& truth,
                                 const std::vector<Split>& splits, EvalMode mode, const std::vector<int>& class_ids) {
    if (predicted.size() != truth.size() || splits.size() != truth.size())
        throw Error(ErrorCode::ShapeMismatch, "prediction, truth and split maps differ in size");
    ConfusionMatrix cm;
    cm.class_ids = class_ids;
    const std::size_t k = class_ids.size();
    cm.counts.assign(k * k, 0);
    auto slot = [&](int id) -> std::optional<std::size_t> {
        const auto it = std::ranges::find(class_ids, id);
        if (it == class_ids.end()) return std::nullopt;
        return static_cast<std::size_t>(it - class_ids.begin());
    };
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] <= 0) continue;
        if (mode == EvalMode::test && splits[i] == Split::train) continue;
        const auto row = slot(truth[i]);
        if (!row) throw Error(ErrorCode::InvalidArgument, "truth label " + std::to_string(truth[i]) + " is not a known class");
        const auto col = slot(predicted[i]);
        if (!col) throw Error(ErrorCode::UnknownPredictedClass, "predicted label " + std::to_string(predicted[i]));
        ++cm.counts[*row * k + *col];
    }
    return cm;
}

Accuracy oa_aa(const ConfusionMatrix& cm) {
    const std::uint64_t total = cm.total();
    if (total == 0) throw Error(ErrorCode::EmptyEvaluation, "no pixels were evaluated");
    Accuracy acc;
    std::uint64_t diag = 0;
    double aa_sum = 0.0;
    std::size_t present = 0;
    for (std::size_t r = 0; r < cm.size(); ++r) {
        std::uint64_t row = 0;
        for (std::size_t c = 0; c < cm.size(); ++c) row += cm.at(r, c);
        diag += cm.at(r, r);
        if (row == 0) {
            acc.per_class.emplace_back();
            continue;
        }
        const double a = static_cast<double>(cm.at(r, r)) / static_cast<double>(row);
        acc.per_class.emplace_back(a);
        aa_sum += a;
        ++present;
    }
    acc.oa = static_cast<double>(diag) / static_cast<double>(total);
    acc.aa = aa_sum / static_cast<double>(present);
    return acc;
}

void write_confusion_csv(std::ostream& os, const ConfusionMatrix& cm) {
    os << "true\\pred";
    for (int id : cm.class_ids) os << ',' << id;
    os << '\n';
    for (std::size_t r = 0; r < cm.size(); ++r) {
        os << cm.class_ids[r];
        for (std::size_t c = 0; c < cm.size(); ++c) os << ',' << cm.at(r, c);
        os << '\n';
    }
}

std::vector<Rgb> default_palette() {
    return {
        {0, 0, 0},       {230, 25, 75},  {60, 180, 75},   {255, 225, 25}, {0, 130, 200},  {245, 130, 48},
        {145, 30, 180},  {70, 240, 240}, {240, 50, 230},  {210, 245, 60}, {250, 190, 212}, {0, 128, 128},
        {220, 190, 255}, {170, 110, 40}, {255, 250, 200}, {128, 0, 0},
    };
}

std::string render_class_map(int width, int height, const std::vector<int>& labels, const std::vector<Rgb>& palette) {
    if (width <= 0 || height <= 0 || labels.size() != static_cast<std::size_t>(width) * height)
        throw Error(ErrorCode::ShapeMismatch, "label count differs from width * height");
    std::string out = "P6\n" + std::to_string(width) + ' ' + std::to_string(height) + "\n255\n";
    out.reserve(out.size() + labels.size() * 3);
    for (int label : labels) {
        if (label < 0 || static_cast<std::size_t>(label) >= palette.size())
            throw Error(ErrorCode::PaletteTooSmall, "no palette color for label " + std::to_string(label));
        const Rgb& c = label == 0 ? Rgb{0, 0, 0} : palette[static_cast<std::size_t>(label)];
        out.append(reinterpret_cast<const char*>(c.data()), 3);
    }
    return out;
}

std::string format_fixed6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

}  // namespace splnc
