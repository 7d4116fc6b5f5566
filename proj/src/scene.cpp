#include "splnc/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "splnc/error.hpp"

namespace splnc {

namespace {

// Prototype coherency matrices (Pauli basis, linear power). Frozen: the
// acceptance benchmark depends on these values. Each one is diagonally
// dominant or has been checked to be positive definite, and they were
// chosen to resemble the canonical scattering mechanisms listed beside them.
const std::array<CoherencyMatrix, kPrototypeCount> kPrototypes = {{
    // smooth surface, bare soil: strong single bounce
    {1.20, 0.10, 0.03, {0.15, 0.02}, {0.01, 0.0}, {0.0, 0.005}},
    // rough surface, low crops
    {0.80, 0.30, 0.10, {0.10, -0.05}, {0.02, 0.01}, {0.01, 0.0}},
    // double bounce, built-up
    {0.50, 1.60, 0.20, {0.30, 0.20}, {0.03, 0.0}, {0.05, -0.02}},
    // volume, forest canopy
    {0.60, 0.40, 0.35, {0.05, 0.0}, {0.0, 0.0}, {0.0, 0.02}},
    // calm water: weak surface return
    {0.15, 0.008, 0.002, {0.01, 0.0}, {0.0, 0.0}, {0.0, 0.0}},
    // oriented vegetation
    {0.45, 0.45, 0.25, {-0.08, 0.04}, {0.0, 0.03}, {0.06, 0.0}},
    // mixed surface and volume
    {0.90, 0.35, 0.30, {0.12, 0.0}, {0.02, -0.02}, {0.03, 0.0}},
    // rotated dihedral
    {0.40, 0.90, 0.55, {0.0, 0.10}, {0.05, 0.0}, {0.20, 0.05}},
}};

}  // namespace

std::string_view to_string(Layout l) {
    switch (l) {
        case Layout::stripes: return "stripes";
        case Layout::voronoi: return "voronoi";
        case Layout::blocks: return "blocks";
    }
    return "stripes";
}

Layout parse_layout(std::string_view text) {
    if (text == "stripes") return Layout::stripes;
    if (text == "voronoi") return Layout::voronoi;
    if (text == "blocks") return Layout::blocks;
    throw Error(ErrorCode::ParseError, "unknown layout '" + std::string(text) + "'");
}

void SceneSpec::validate() const {
    auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (width <= 0 || height <= 0) fail("scene dimensions must be positive");
    if (classes < 2 || classes > kPrototypeCount) fail("class count must lie in [2, 8]");
    if (static_cast<long>(width) * height < classes) fail("scene has fewer pixels than classes");
    if (looks < 1) fail("looks must be at least 1");
    if (!(similarity >= 0.0 && similarity <= 1.0)) throw Error(ErrorCode::BadSimilarity, "similarity must lie in [0, 1]");
    if (layout == Layout::voronoi && voronoi_seeds < classes) fail("voronoi layout needs at least one seed per class");
}

const CoherencyMatrix& prototype_sigma(int k) { return kPrototypes.at(static_cast<std::size_t>(k)); }

std::vector<CoherencyMatrix> builtin_class_sigmas(int classes, double similarity) {
    if (!(similarity >= 0.0 && similarity <= 1.0)) throw Error(ErrorCode::BadSimilarity, "similarity must lie in [0, 1]");
    if (classes < 2 || classes > kPrototypeCount) throw Error(ErrorCode::InvalidArgument, "class count must lie in [2, 8]");
    CoherencyMatrix mean{};
    for (int k = 0; k < classes; ++k) mean += kPrototypes[k];
    mean *= 1.0 / classes;
    std::vector<CoherencyMatrix> out;
    for (int k = 0; k < classes; ++k) out.push_back((1.0 - similarity) * kPrototypes[k] + similarity * mean);
    return out;
}

Matrix3c cholesky(const CoherencyMatrix& sigma) {
    const Matrix3c a = sigma.to_matrix();
    Matrix3c l{};
    for (int j = 0; j < 3; ++j) {
        double d = a[j][j].real();
        for (int k = 0; k < j; ++k) d -= std::norm(l[j][k]);
        if (!(d > 0.0)) throw Error(ErrorCode::NotPositiveDefinite, "covariance is not positive definite");
        l[j][j] = std::sqrt(d);
        for (int i = j + 1; i < 3; ++i) {
            cplx s = a[i][j];
            for (int k = 0; k < j; ++k) s -= l[i][k] * std::conj(l[j][k]);
            l[i][j] = s / l[j][j].real();
        }
    }
    return l;
}

namespace {

CoherencyMatrix sample_with_factor(const Matrix3c& chol, int looks, Rng& rng) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Matrix3c acc{};
    for (int look = 0; look < looks; ++look) {
        std::array<cplx, 3> w;
        for (auto& wi : w) {
            const double re = rng.normal();
            const double im = rng.normal();
            wi = cplx(re, im) * inv_sqrt2;
        }
        std::array<cplx, 3> z{};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k <= i; ++k) z[i] += chol[i][k] * w[k];
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) acc[i][j] += z[i] * std::conj(z[j]);
    }
    CoherencyMatrix t = CoherencyMatrix::from_matrix(acc);
    t *= 1.0 / looks;
    return t;
}

}  // namespace

CoherencyMatrix sample_wishart_coherency(const CoherencyMatrix& sigma, int looks, Rng& rng) {
    if (looks < 1) throw Error(ErrorCode::InvalidArgument, "looks must be at least 1");
    return sample_with_factor(cholesky(sigma), looks, rng);
}

std::vector<int> layout_labels(const SceneSpec& spec) {
    spec.validate();
    const int w = spec.width, h = spec.height, k = spec.classes;
    std::vector<int> labels(static_cast<std::size_t>(w) * h);
    switch (spec.layout) {
        case Layout::stripes:
            // Horizontal bands of (nearly) equal height.
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) labels[static_cast<std::size_t>(y) * w + x] = 1 + y * k / h;
            break;
        case Layout::blocks: {
            // Tiles on a ceil(sqrt(K)) column grid, class = tile index mod K.
            const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
            const int rows = (k + cols - 1) / cols;
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const int tile = (y * rows / h) * cols + x * cols / w;
                    labels[static_cast<std::size_t>(y) * w + x] = 1 + tile % k;
                }
            break;
        }
        case Layout::voronoi: {
            // Seed s owns class 1 + s mod K; pixels take the nearest seed.
            Rng rng(spec.seed, 0);
            std::vector<std::pair<double, double>> seeds(spec.voronoi_seeds);
            for (auto& [sx, sy] : seeds) {
                sx = rng.uniform() * w;
                sy = rng.uniform() * h;
            }
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    double best = std::numeric_limits<double>::infinity();
                    int owner = 0;
                    for (int s = 0; s < spec.voronoi_seeds; ++s) {
                        const double dx = x + 0.5 - seeds[s].first;
                        const double dy = y + 0.5 - seeds[s].second;
                        const double d = dx * dx + dy * dy;
                        if (d < best) {
                            best = d;
                            owner = s;
                        }
                    }
                    labels[static_cast<std::size_t>(y) * w + x] = 1 + owner % k;
                }
            break;
        }
    }
    return labels;
}

GridDataset generate_scene(const SceneSpec& spec) {
    spec.validate();
    GridDataset ds;
    ds.width = spec.width;
    ds.height = spec.height;
    ds.labels = layout_labels(spec);
    ds.splits.assign(ds.labels.size(), Split::test);

    const auto sigmas = builtin_class_sigmas(spec.classes, spec.similarity);
    std::vector<Matrix3c> factors;
    for (const auto& s : sigmas) factors.push_back(cholesky(s));

    ds.coherency.resize(ds.labels.size());
    for (std::size_t i = 0; i < ds.labels.size(); ++i) {
        Rng rng(spec.seed, 1 + i);
        ds.coherency[i] = sample_with_factor(factors[ds.labels[i] - 1], spec.looks, rng);
    }
    return ds;
}

void sample_training_mask(GridDataset& dataset, double fraction, int block_size, Rng& rng) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorCode::InvalidArgument, "fraction must lie in (0, 1]");
    if (block_size < 1) throw Error(ErrorCode::InvalidArgument, "block size must be at least 1");
    const int w = dataset.width, h = dataset.height;
    for (std::size_t i = 0; i < dataset.size(); ++i) dataset.splits[i] = dataset.labels[i] > 0 ? Split::test : Split::none;

    for (int cls : dataset.class_ids(false)) {
        const auto total = std::ranges::count(dataset.labels, cls);
        const double target = fraction * static_cast<double>(total);
        std::size_t placed = 0;
        int side = std::min({block_size, w, h});
        int rejections = 0;

        auto usable = [&](std::size_t i) { return dataset.labels[i] == cls && dataset.splits[i] != Split::train; };
        while (static_cast<double>(placed) < target || placed == 0) {
            if (side == 1 && rejections >= 1000) {
                std::vector<std::size_t> left;
                for (std::size_t i = 0; i < dataset.size(); ++i)
                    if (usable(i)) left.push_back(i);
                if (left.empty())
                    throw Error(ErrorCode::FractionTooLargeForClass,
                                "class " + std::to_string(cls) + " cannot supply the requested fraction");
                dataset.splits[left[rng.uniform_int(left.size())]] = Split::train;
                ++placed;
                continue;
            }
            const int x0 = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(w - side + 1)));
            const int y0 = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(h - side + 1)));
            bool fits = true;
            for (int y = y0; y < y0 + side && fits; ++y)
                for (int x = x0; x < x0 + side && fits; ++x) fits = usable(dataset.index(x, y));
            if (!fits) {
                if (++rejections >= 1000 && side > 1) {
                    --side;
                    rejections = 0;
                }
                continue;
            }
            for (int y = y0; y < y0 + side; ++y)
                for (int x = x0; x < x0 + side; ++x) dataset.splits[dataset.index(x, y)] = Split::train;
            placed += static_cast<std::size_t>(side) * side;
            rejections = 0;
        }
    }
}

}  // namespace splnc
