#pragma once

#include <array>
#include <span>
#include <vector>

#include "splnc/coherency.hpp"

namespace splnc {

inline constexpr std::size_t kFeatureDim = 7;

/// Per-pixel feature vector in fixed order
/// [lambda1, lambda2, lambda3, span, entropy, mean alpha, anisotropy].
using FeatureVector = std::array<double, kFeatureDim>;

/// Eigen-decomposition of a coherency matrix. Eigenvalues are sorted in
/// descending order and `vectors[k]` is the unit eigenvector paired with
/// `values[k]`.
struct EigenSystem {
    std::array<double, 3> values{};
    std::array<std::array<cplx, 3>, 3> vectors{};
};

struct CloudePottier {
    double entropy = 0.0;     // H in [0, 1], log base 3
    double alpha_mean = 0.0;  // radians in [0, pi/2]
    double anisotropy = 0.0;  // A in [0, 1]
};

/// Hermitian eigen-decomposition by cyclic complex Jacobi rotations.
///
/// Rotations are applied in the fixed order (0,1), (0,2), (1,2), so a
/// degenerate spectrum always yields the same basis. Eigenvalues within
/// the PSD slack (1e-9 * trace) below zero are clamped to zero; anything
/// more negative raises NotPSD. NaN or Inf entries raise NonFiniteInput.
EigenSystem eig3_hermitian(const CoherencyMatrix& t);

/// Entropy / mean alpha / anisotropy from a sorted eigensystem.
/// Throws DegenerateSpan when the eigenvalue sum is not positive.
CloudePottier cloude_pottier(const EigenSystem& es);

FeatureVector feature_vector(const CoherencyMatrix& t);

/// Per-dimension z-score statistics. Dimensions whose standard deviation
/// is below 1e-12 map to zero.
struct FeatureStats {
    FeatureVector mean{};
    FeatureVector stddev{};

    FeatureVector apply(const FeatureVector& f) const;
};

/// Population mean / standard deviation over `samples` (at least two).
FeatureStats compute_feature_stats(std::span<const FeatureVector> samples);

struct NormalizedFeatures {
    std::vector<FeatureVector> scaled;
    FeatureStats stats;
};

NormalizedFeatures normalize_features(std::span<const FeatureVector> samples);

}  // namespace splnc
