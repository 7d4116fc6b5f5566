#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "splnc/dataset.hpp"

namespace splnc {

enum class EvalMode { test, all_labeled };

EvalMode parse_eval_mode(std::string_view text);

/// Rows are true classes, columns predicted classes, both in `class_ids` order.
struct ConfusionMatrix {
    std::vector<int> class_ids;
    std::vector<std::uint64_t> counts;  // K x K row-major

    std::size_t size() const { return class_ids.size(); }
    std::uint64_t at(std::size_t row, std::size_t col) const { return counts[row * size() + col]; }
    std::uint64_t total() const;
};

/// Counts (truth, prediction) pairs over labeled pixels; `test` mode also
/// skips training pixels. Truth labels must be 0 or in `class_ids`.
ConfusionMatrix confusion_matrix(const std::vector<int>& predicted, const std::vector<int>& truth,
                                 const std::vector<Split>& splits, EvalMode mode, const std::vector<int>& class_ids);

struct Accuracy {
    double oa = 0.0;
    double aa = 0.0;
    /// Per-class accuracy; empty for classes with no true pixels.
    std::vector<std::optional<double>> per_class;
};

Accuracy oa_aa(const ConfusionMatrix& cm);

void write_confusion_csv(std::ostream& os, const ConfusionMatrix& cm);

using Rgb = std::array<std::uint8_t, 3>;

/// Palette with black at index 0 followed by 15 distinct class colors.
std::vector<Rgb> default_palette();

/// Binary PPM (P6) with one palette color per label.
std::string render_class_map(int width, int height, const std::vector<int>& labels, const std::vector<Rgb>& palette);

/// Fixed-point text with six decimals, used by every report CSV.
std::string format_fixed6(double value);

}  // namespace splnc
