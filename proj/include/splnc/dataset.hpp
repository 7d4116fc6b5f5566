#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "splnc/coherency.hpp"
#include "splnc/features.hpp"

namespace splnc {

enum class Split { none, train, test };

std::string_view to_string(Split s);
Split parse_split(std::string_view text);

/// Raster of labeled pixels, row-major (index = y * width + x).
///
/// A dataset read from a coherency CSV carries coherency matrices; one read
/// from a feature CSV carries only features. `compute_features` fills the
/// latter from the former.
struct GridDataset {
    int width = 0;
    int height = 0;
    std::vector<int> labels;
    std::vector<Split> splits;
    std::vector<CoherencyMatrix> coherency;
    std::vector<FeatureVector> features;

    std::size_t size() const { return labels.size(); }
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    bool has_coherency() const { return !coherency.empty(); }
    bool has_features() const { return !features.empty(); }

    void compute_features();
    /// Sorted distinct labels > 0, optionally restricted to training pixels.
    std::vector<int> class_ids(bool training_only) const;
    std::size_t training_count() const;
    /// Training pixels divided by labeled pixels.
    double training_fraction() const;
};

// Reals are written in shortest round-trip form, so read(write(d)) == d.
void write_coherency_csv(std::ostream& os, const GridDataset& ds);
void write_feature_csv(std::ostream& os, const GridDataset& ds);
/// Reads either CSV flavor, chosen by the header line.
GridDataset read_dataset_csv(std::istream& is);

GridDataset load_dataset(const std::string& path);
void save_coherency_csv(const std::string& path, const GridDataset& ds);
void save_feature_csv(const std::string& path, const GridDataset& ds);

/// Plain-text label map: a `width height` line followed by one row of
/// space-separated integers per grid row.
void write_label_map(std::ostream& os, int width, int height, const std::vector<int>& labels);
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<int> labels;
};
LabelMap read_label_map(std::istream& is);

std::string format_real(double value);

}  // namespace splnc
