#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "splnc/metrics.hpp"
#include "splnc/scene.hpp"
#include "splnc/trainer.hpp"

namespace splnc {

enum class DatasetSource { synthetic, file };

struct ExperimentConfig {
    DatasetSource source = DatasetSource::synthetic;
    SceneSpec scene;
    /// Coherency CSV used when source = file; relative paths resolve
    /// against the config file's directory.
    std::filesystem::path data_path;
    /// For file datasets: keep the split column instead of drawing a new mask.
    bool use_file_mask = false;
    double train_fraction = 0.02;
    int block_size = 3;

    std::vector<std::string> methods;
    std::vector<std::uint64_t> seeds;
    EvalMode evaluate_on = EvalMode::test;
    std::filesystem::path output_dir = "results";

    /// Plain kernel machine baseline (`svm`).
    TrainerConfig svm;
    /// Self-paced methods (`svm_spl` uses the linear rule, `svm_splnc` the
    /// neighborhood rule); the regularizer field is set per method.
    TrainerConfig spl;

    ExperimentConfig();
};

/// Parses the flat `[section]` / `key = value` grammar described in
/// docs/experiment-config.md. Unknown sections, keys or methods are errors
/// that name the offending line.
ExperimentConfig parse_experiment_config(std::istream& is);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunResult {
    std::string method;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    ConfusionMatrix confusion;
    Accuracy accuracy;
    std::vector<TrainingTrace> traces;
};

struct ExperimentReport {
    std::vector<RunResult> runs;
    std::string summary_csv;
    bool all_ok() const;
};

/// The dataset used by a given seed: a synthetic scene with a fresh block
/// mask, or the configured file.
GridDataset experiment_dataset(const ExperimentConfig& config, std::uint64_t seed);

/// Trains, predicts and evaluates one method on `dataset`.
RunResult run_method(const ExperimentConfig& config, const std::string& method, std::uint64_t seed,
                     const GridDataset& dataset, std::vector<int>* predicted = nullptr);

/// Every method x seed. When `write_outputs` is set, each run gets a
/// `<method>_seed<seed>/` directory under the output directory holding
/// confusion.csv, map.ppm and (for self-paced methods) trace.csv, and the
/// summary is written to summary.csv (failures to failures.csv).
ExperimentReport run_experiment(const ExperimentConfig& config, bool write_outputs = true);

std::string summary_csv(const std::vector<RunResult>& runs);
void write_trace_csv(std::ostream& os, const std::vector<TrainingTrace>& traces);

}  // namespace splnc
