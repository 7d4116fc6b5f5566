#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splnc/dataset.hpp"
#include "splnc/features.hpp"
#include "splnc/spl.hpp"
#include "splnc/svm.hpp"

namespace splnc {

struct TrainerConfig {
    double c = 100.0;
    double gamma = 1.0;
    /// Fixed initial pace; when empty it is derived from the warm-start losses.
    std::optional<double> lambda0;
    double quantile = 0.3;
    double kappa = 1.05;
    Regularizer regularizer = Regularizer::neighborhood;
    EntropyMode entropy_mode = EntropyMode::normalized;
    double stop_eps = 0.01;
    std::size_t max_iters = 200;
    double tol = 1e-3;
    std::uint64_t seed = 0;
    std::size_t warm_start_size = 200;
    bool normalize = true;

    void validate() const;
};

std::string_view to_string(Regularizer r);
std::string_view to_string(EntropyMode m);
Regularizer parse_regularizer(std::string_view text);
EntropyMode parse_entropy_mode(std::string_view text);

struct TraceRecord {
    std::size_t iter = 0;
    double lambda = 0.0;
    double mean_v = 0.0;
    double mean_loss = 0.0;
    std::size_t active = 0;
    /// Fraction of training samples on the correct side of the current model.
    double train_oa = 0.0;
};

struct TrainingTrace {
    int class_id = 0;
    double lambda0 = 0.0;
    std::vector<TraceRecord> records;
    /// mean(v) reached 1 - stop_eps before the iteration cap.
    bool reached_stop = false;
    /// Every dual solve met its tolerance.
    bool solver_converged = true;
};

struct GridCoord {
    int x = 0;
    int y = 0;
};

/// Binary training set with the grid position of every sample; positions
/// define the 8-connected neighborhoods used by the neighborhood rule.
struct BinaryProblem {
    FeatureMatrix x;
    std::vector<int> y;
    std::vector<GridCoord> coords;
};

struct BinaryTrainResult {
    SvmModel model;
    TrainingTrace trace;
    std::vector<double> final_weights;
};

/// Self-paced training of one binary kernel machine.
///
/// Iteration 0 fits a unit-weight machine on a random subset of at most
/// `warm_start_size` samples to obtain initial losses and, unless fixed,
/// the initial pace. Each outer iteration then solves the weighted dual
/// with the current weights, recomputes hinge losses, updates weights with
/// the configured rule and multiplies the pace by kappa. Once mean(v)
/// reaches 1 - stop_eps the machine is refit with the final weights.
BinaryTrainResult train_spl_svm_binary(const BinaryProblem& problem, const TrainerConfig& config,
                                       std::uint64_t stream = 0);

/// Unit-weight fit without any self-paced loop.
SvmModel train_plain_binary(const FeatureMatrix& x, std::span<const int> y, double c, double gamma, double tol);

/// One-vs-rest composition of binary machines.
struct MulticlassModel {
    std::string method;
    std::vector<int> class_ids;
    std::vector<SvmModel> models;
    std::optional<FeatureStats> stats;
    TrainerConfig config;

    /// Decision value of every class model for raw (unnormalized) features.
    std::vector<double> decisions(const FeatureVector& raw) const;
    /// Arg-max class; ties go to the lowest class id.
    int predict_one(const FeatureVector& raw) const;
};

struct MulticlassResult {
    MulticlassModel model;
    std::vector<TrainingTrace> traces;
};

MulticlassResult train_multiclass(const GridDataset& dataset, const TrainerConfig& config);

/// Predicted label for every pixel of `dataset`, row-major.
std::vector<int> predict(const MulticlassModel& model, const GridDataset& dataset);

/// Training pixels of a dataset in row-major order, with features scaled by
/// training statistics when `normalize` is set.
struct TrainingSet {
    std::vector<int> class_ids;
    std::vector<int> labels;
    std::vector<GridCoord> coords;
    FeatureMatrix x;
    std::optional<FeatureStats> stats;
};

TrainingSet collect_training_set(const GridDataset& dataset, bool normalize);

}  // namespace splnc
