// splnc command-line driver.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "splnc/baselines.hpp"
#include "splnc/dataset.hpp"
#include "splnc/error.hpp"
#include "splnc/experiment.hpp"
#include "splnc/metrics.hpp"
#include "splnc/model_io.hpp"
#include "splnc/rng.hpp"
#include "splnc/scene.hpp"
#include "splnc/trainer.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw splnc::Error(splnc::ErrorCode::IoError, "cannot write " + path);
    out << bytes;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw splnc::Error(splnc::ErrorCode::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct SynthArgs {
    splnc::SceneSpec scene;
    std::string layout = "voronoi";
    double fraction = 0.02;
    int block_size = 3;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool features = false;
};

struct TrainArgs {
    std::string method = "svm_splnc";
    std::string data;
    std::string out;
    std::string trace;
    std::optional<std::uint64_t> seed;
    std::optional<double> c, gamma, lambda0, kappa, quantile, stop_eps, tol;
    std::optional<std::size_t> max_iters;
    std::string regularizer;
    std::string entropy_mode;
    bool no_normalize = false;
};

struct PredictArgs {
    std::string model;
    std::string data;
    std::string out;
    std::string ppm;
};

struct EvalArgs {
    std::string prediction;
    std::string data;
    std::string mode = "test";
    std::string confusion;
};

struct RunArgs {
    std::string config;
    std::optional<std::string> output_dir;
};

int cmd_synth(SynthArgs& a) {
    a.scene.layout = splnc::parse_layout(a.layout);
    a.scene.seed = *a.seed;
    a.scene.validate();
    auto ds = splnc::generate_scene(a.scene);
    if (a.fraction > 0.0) {
        splnc::Rng rng(*a.seed, 0x6D61736BULL);
        splnc::sample_training_mask(ds, a.fraction, a.block_size, rng);
    }
    if (a.features) {
        ds.compute_features();
        splnc::save_feature_csv(a.out, ds);
    } else {
        splnc::save_coherency_csv(a.out, ds);
    }
    return kExitOk;
}

int cmd_features(const std::string& in, const std::string& out) {
    auto ds = splnc::load_dataset(in);
    if (!ds.has_coherency()) throw UsageError(in + " holds no coherency matrices");
    ds.compute_features();
    splnc::save_feature_csv(out, ds);
    return kExitOk;
}

splnc::TrainerConfig trainer_config(const TrainArgs& a) {
    splnc::TrainerConfig tc;
    if (a.method == "svm") {
        // Baseline defaults match the experiment driver.
        tc.c = 50.0;
        tc.tol = 1e-5;
    }
    if (a.c) tc.c = *a.c;
    if (a.gamma) tc.gamma = *a.gamma;
    if (a.lambda0) tc.lambda0 = *a.lambda0;
    if (a.kappa) tc.kappa = *a.kappa;
    if (a.quantile) tc.quantile = *a.quantile;
    if (a.stop_eps) tc.stop_eps = *a.stop_eps;
    if (a.tol) tc.tol = *a.tol;
    if (a.max_iters) tc.max_iters = *a.max_iters;
    if (a.method == "svm_spl") tc.regularizer = splnc::Regularizer::linear;
    if (!a.regularizer.empty()) tc.regularizer = splnc::parse_regularizer(a.regularizer);
    if (!a.entropy_mode.empty()) tc.entropy_mode = splnc::parse_entropy_mode(a.entropy_mode);
    tc.normalize = !a.no_normalize;
    if (a.seed) tc.seed = *a.seed;
    tc.validate();
    return tc;
}

int cmd_train(const TrainArgs& a) {
    const bool self_paced = a.method == "svm_spl" || a.method == "svm_splnc";
    if (self_paced && !a.seed) throw UsageError("--seed is required for " + a.method);
    const auto tc = trainer_config(a);
    const auto ds = splnc::load_dataset(a.data);

    splnc::StoredModel stored;
    if (a.method == "wc") {
        stored = splnc::wishart_centers(ds);
    } else if (a.method == "svm") {
        stored = splnc::train_plain_svm(ds, tc);
    } else {
        auto result = splnc::train_multiclass(ds, tc);
        result.model.method = a.method;
        if (!a.trace.empty()) {
            std::ostringstream os;
            splnc::write_trace_csv(os, result.traces);
            write_file(a.trace, os.str());
        }
        stored = std::move(result.model);
    }
    splnc::save_model_file(a.out, stored);
    return kExitOk;
}

int cmd_predict(const PredictArgs& a) {
    const auto model = splnc::load_model_file(a.model);
    const auto ds = splnc::load_dataset(a.data);
    const auto pred = splnc::predict_stored(model, ds);
    std::ostringstream os;
    splnc::write_label_map(os, ds.width, ds.height, pred);
    write_file(a.out, os.str());
    if (!a.ppm.empty())
        write_file(a.ppm, splnc::render_class_map(ds.width, ds.height, pred, splnc::default_palette()));
    return kExitOk;
}

int cmd_eval(const EvalArgs& a) {
    std::istringstream in(read_file(a.prediction));
    const auto map = splnc::read_label_map(in);
    const auto ds = splnc::load_dataset(a.data);
    if (map.width != ds.width || map.height != ds.height)
        throw splnc::Error(splnc::ErrorCode::ShapeMismatch, "prediction and dataset sizes differ");
    const auto cm =
        splnc::confusion_matrix(map.labels, ds.labels, ds.splits, splnc::parse_eval_mode(a.mode), ds.class_ids(false));
    const auto acc = splnc::oa_aa(cm);
    std::cout << "oa," << splnc::format_fixed6(acc.oa) << "\naa," << splnc::format_fixed6(acc.aa) << '\n';
    for (std::size_t k = 0; k < cm.size(); ++k) {
        std::cout << "acc_" << cm.class_ids[k] << ',';
        if (acc.per_class[k]) std::cout << splnc::format_fixed6(*acc.per_class[k]);
        std::cout << '\n';
    }
    if (!a.confusion.empty()) {
        std::ostringstream os;
        splnc::write_confusion_csv(os, cm);
        write_file(a.confusion, os.str());
    }
    return kExitOk;
}

int cmd_run(const RunArgs& a) {
    splnc::ExperimentConfig cfg;
    try {
        cfg = splnc::load_experiment_config(a.config);
    } catch (const splnc::Error& e) {
        throw UsageError(a.config + ": " + e.what());
    }
    if (a.output_dir) cfg.output_dir = *a.output_dir;
    const auto report = splnc::run_experiment(cfg);
    std::cout << report.summary_csv;
    for (const auto& r : report.runs)
        if (!r.ok) std::cerr << "run " << r.method << " seed " << r.seed << " failed: " << r.error << '\n';
    return report.all_ok() ? kExitOk : kExitRunFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-paced kernel machines for gridded polarimetric data"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate a synthetic labeled scene");
    s->add_option("--width", synth.scene.width, "Grid width")->capture_default_str();
    s->add_option("--height", synth.scene.height, "Grid height")->capture_default_str();
    s->add_option("--classes", synth.scene.classes, "Number of classes (2-8)")->capture_default_str();
    s->add_option("--layout", synth.layout, "stripes, voronoi or blocks")->capture_default_str();
    s->add_option("--voronoi-seeds", synth.scene.voronoi_seeds, "Voronoi cell count")->capture_default_str();
    s->add_option("--looks", synth.scene.looks, "Number of looks")->capture_default_str();
    s->add_option("--similarity", synth.scene.similarity, "Class similarity in [0,1)")->capture_default_str();
    s->add_option("--train-fraction", synth.fraction, "Training fraction per class; 0 leaves all pixels as test")
        ->capture_default_str();
    s->add_option("--block-size", synth.block_size, "Side of training blocks")->capture_default_str();
    s->add_option("--seed", synth.seed, "Random seed")->required();
    s->add_flag("--features", synth.features, "Write the feature CSV instead of coherency matrices");
    s->add_option("-o,--out", synth.out, "Output CSV")->required();

    std::string feat_in, feat_out;
    auto* f = app.add_subcommand("features", "Convert a coherency CSV into a feature CSV");
    f->add_option("-i,--in", feat_in, "Coherency CSV")->required();
    f->add_option("-o,--out", feat_out, "Feature CSV")->required();

    TrainArgs train;
    auto* t = app.add_subcommand("train", "Train a classifier and save it as JSON");
    t->add_option("--method", train.method, "svm, svm_spl, svm_splnc or wc")
        ->check(CLI::IsMember({"svm", "svm_spl", "svm_splnc", "wc"}))
        ->capture_default_str();
    t->add_option("-d,--data", train.data, "Dataset CSV with a training split")->required();
    t->add_option("-o,--out", train.out, "Model file")->required();
    t->add_option("--trace", train.trace, "Write the self-paced trace CSV here");
    t->add_option("--seed", train.seed, "Random seed (self-paced methods)");
    t->add_option("--c", train.c, "Cost parameter");
    t->add_option("--gamma", train.gamma, "RBF width");
    t->add_option("--lambda0", train.lambda0, "Initial pace (default: quantile of warm-start losses)");
    t->add_option("--kappa", train.kappa, "Pace growth factor");
    t->add_option("--regularizer", train.regularizer, "binary, linear or neighborhood");
    t->add_option("--entropy-mode", train.entropy_mode, "normalized or literal");
    t->add_option("--quantile", train.quantile, "Loss quantile for the initial pace");
    t->add_option("--stop-eps", train.stop_eps, "Stop once mean weight reaches 1 - eps");
    t->add_option("--max-iters", train.max_iters, "Iteration cap");
    t->add_option("--tol", train.tol, "Dual solver tolerance");
    t->add_flag("--no-normalize", train.no_normalize, "Use raw features");

    PredictArgs pred;
    auto* p = app.add_subcommand("predict", "Classify every pixel of a dataset");
    p->add_option("-m,--model", pred.model, "Model file")->required();
    p->add_option("-d,--data", pred.data, "Dataset CSV")->required();
    p->add_option("-o,--out", pred.out, "Label map output")->required();
    p->add_option("--ppm", pred.ppm, "Also render a PPM class map");

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Score a label map against dataset labels");
    e->add_option("-p,--prediction", ev.prediction, "Label map")->required();
    e->add_option("-d,--data", ev.data, "Dataset CSV with truth labels")->required();
    e->add_option("--evaluate-on", ev.mode, "test or all")->check(CLI::IsMember({"test", "all", "all_labeled"}))
        ->capture_default_str();
    e->add_option("--confusion", ev.confusion, "Write the confusion matrix CSV here");

    RunArgs run;
    auto* r = app.add_subcommand("run", "Run every method x seed of an experiment config");
    r->add_option("config", run.config, "Experiment config file")->required();
    r->add_option("--output-dir", run.output_dir, "Override the configured output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*s) return cmd_synth(synth);
        if (*f) return cmd_features(feat_in, feat_out);
        if (*t) return cmd_train(train);
        if (*p) return cmd_predict(pred);
        if (*e) return cmd_eval(ev);
        if (*r) return cmd_run(run);
    } catch (const UsageError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    } catch (const splnc::Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        const auto c = err.code();
        const bool usage = c == splnc::ErrorCode::InvalidArgument || c == splnc::ErrorCode::NonPositivePace;
        return usage ? kExitUsage : kExitRunFailure;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitRunFailure;
    }
    return kExitUsage;
}
