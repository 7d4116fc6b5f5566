#include "splnc/baselines.hpp"

#include <cmath>
#include <map>

#include "splnc/error.hpp"
#include "splnc/features.hpp"

namespace splnc {

MulticlassModel train_plain_svm(const GridDataset& dataset, const TrainerConfig& config) {
    config.validate();
    const TrainingSet ts = collect_training_set(dataset, config.normalize);

    MulticlassModel model;
    model.method = "svm";
    model.class_ids = ts.class_ids;
    model.stats = ts.stats;
    model.config = config;
    std::vector<int> y(ts.labels.size());
    for (int cls : ts.class_ids) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = ts.labels[i] == cls ? 1 : -1;
        model.models.push_back(train_plain_binary(ts.x, y, config.c, config.gamma, config.tol));
    }
    return model;
}

WishartCenter make_wishart_center(int class_id, const CoherencyMatrix& mean) {
    if (!mean.is_finite()) throw Error(ErrorCode::NonFiniteInput, "class mean is not finite");
    WishartCenter wc;
    wc.class_id = class_id;
    wc.sigma = mean;
    const double tr = mean.trace();
    if (!(tr > 0.0)) throw Error(ErrorCode::SingularCenter, "class mean has non-positive trace");
    const EigenSystem es = eig3_hermitian(mean);
    if (es.values[2] < 1e-9 * tr) {
        const double ridge = 1e-9 * tr / 3.0;
        wc.sigma.t11 += ridge;
        wc.sigma.t22 += ridge;
        wc.sigma.t33 += ridge;
    }
    const double det = hermitian_det(wc.sigma);
    if (!(det > 1e-300)) throw Error(ErrorCode::SingularCenter, "class mean is not invertible");
    wc.log_det = std::log(det);
    wc.inverse = hermitian_inverse(wc.sigma);
    return wc;
}

WishartCenters wishart_centers(const GridDataset& dataset) {
    if (!dataset.has_coherency()) throw Error(ErrorCode::InvalidArgument, "dataset has no coherency matrices");
    std::map<int, std::pair<CoherencyMatrix, std::size_t>> sums;
    for (int id : dataset.class_ids(false)) sums[id] = {CoherencyMatrix{}, 0};
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (dataset.splits[i] != Split::train || dataset.labels[i] <= 0) continue;
        auto& [sum, count] = sums[dataset.labels[i]];
        sum += dataset.coherency[i];
        ++count;
    }
    WishartCenters out;
    for (const auto& [id, acc] : sums) {
        if (acc.second == 0) throw Error(ErrorCode::EmptyClass, "class " + std::to_string(id) + " has no training pixels");
        out.centers.push_back(make_wishart_center(id, (1.0 / static_cast<double>(acc.second)) * acc.first));
    }
    if (out.centers.empty()) throw Error(ErrorCode::EmptyClass, "dataset has no labeled classes");
    return out;
}

double wishart_distance(const CoherencyMatrix& t, const WishartCenter& center) {
    const Matrix3c prod = mat_mul(center.inverse, t.to_matrix());
    return center.log_det + mat_trace(prod).real();
}

int wishart_classify(const CoherencyMatrix& t, const WishartCenters& centers) {
    if (centers.centers.empty()) throw Error(ErrorCode::SingularCenter, "no centers");
    std::size_t best = 0;
    double best_d = wishart_distance(t, centers.centers[0]);
    for (std::size_t k = 1; k < centers.centers.size(); ++k) {
        const double d = wishart_distance(t, centers.centers[k]);
        if (d < best_d || (d == best_d && centers.centers[k].class_id < centers.centers[best].class_id)) {
            best_d = d;
            best = k;
        }
    }
    return centers.centers[best].class_id;
}

std::vector<int> wishart_predict(const WishartCenters& centers, const GridDataset& dataset) {
    if (!dataset.has_coherency()) throw Error(ErrorCode::InvalidArgument, "dataset has no coherency matrices");
    std::vector<int> out(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) out[i] = wishart_classify(dataset.coherency[i], centers);
    return out;
}

}  // namespace splnc
