#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "splnc/coherency.hpp"
#include "splnc/dataset.hpp"
#include "splnc/rng.hpp"

namespace splnc {

enum class Layout { stripes, voronoi, blocks };

std::string_view to_string(Layout l);
Layout parse_layout(std::string_view text);

struct SceneSpec {
    int width = 64;
    int height = 64;
    int classes = 5;
    Layout layout = Layout::voronoi;
    int voronoi_seeds = 12;
    int looks = 4;
    double similarity = 0.6;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Number of built-in class prototypes (upper bound on the class count).
inline constexpr int kPrototypeCount = 8;

/// The fixed prototype covariance of class index k (0-based).
const CoherencyMatrix& prototype_sigma(int k);

/// Class covariances (1 - s) * P_k + s * mean(P_1..P_K) for the first K prototypes.
std::vector<CoherencyMatrix> builtin_class_sigmas(int classes, double similarity);

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
Matrix3c cholesky(const CoherencyMatrix& sigma);

/// One L-look complex Wishart draw with expectation `sigma`.
CoherencyMatrix sample_wishart_coherency(const CoherencyMatrix& sigma, int looks, Rng& rng);

/// Class index (1-based) of every pixel for the configured layout.
std::vector<int> layout_labels(const SceneSpec& spec);

/// Synthesizes a labeled scene. Pixel i draws from its own generator stream,
/// so the result depends only on the spec. All labeled pixels start as test.
GridDataset generate_scene(const SceneSpec& spec);

/// Marks square training blocks per class until each class reaches
/// `fraction` of its pixels (overshooting by less than one block). Blocks
/// must lie inside one class and not overlap earlier blocks; after 1000
/// rejected placements the side shrinks by one, and at side 1 a remaining
/// pixel is drawn directly. Other labeled pixels become test pixels.
void sample_training_mask(GridDataset& dataset, double fraction, int block_size, Rng& rng);

}  // namespace splnc
