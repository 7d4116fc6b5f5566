#pragma once

#include <vector>

#include "splnc/coherency.hpp"
#include "splnc/dataset.hpp"
#include "splnc/trainer.hpp"

namespace splnc {

/// One-vs-rest kernel machines with unit weights and no self-paced loop.
/// Uses c, gamma, tol, and normalize from `config`.
MulticlassModel train_plain_svm(const GridDataset& dataset, const TrainerConfig& config);

struct WishartCenter {
    int class_id = 0;
    CoherencyMatrix sigma;
    double log_det = 0.0;
    Matrix3c inverse{};
};

struct WishartCenters {
    std::vector<WishartCenter> centers;
};

/// Builds a center from a class mean, regularizing with
/// 1e-9 * trace / 3 * I when its smallest eigenvalue is below 1e-9 * trace.
WishartCenter make_wishart_center(int class_id, const CoherencyMatrix& mean);

/// Class means of the training coherency matrices. Every labeled class must
/// have at least one training pixel (EmptyClass otherwise).
WishartCenters wishart_centers(const GridDataset& dataset);

/// ln|Sigma| + Re Tr(Sigma^-1 T).
double wishart_distance(const CoherencyMatrix& t, const WishartCenter& center);

/// Nearest center; ties go to the lowest class id.
int wishart_classify(const CoherencyMatrix& t, const WishartCenters& centers);

std::vector<int> wishart_predict(const WishartCenters& centers, const GridDataset& dataset);

}  // namespace splnc
