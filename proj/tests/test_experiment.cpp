#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "splnc/error.hpp"
#include "splnc/experiment.hpp"

using namespace splnc;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_experiment_config(in);
}

std::string parse_error(const std::string& text) {
    try {
        parse(text);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        return e.what();
    }
    FAIL("expected ParseError");
    return {};
}

const char* kSeparable = R"(# two well separated classes
[dataset]
source = synthetic
width = 32
height = 32
classes = 2
layout = stripes
looks = 256
similarity = 0.0
train_fraction = 0.2
block_size = 2

[experiment]
methods = wc, svm
seeds = 1..2

[spl]
max_iters = 50
)";

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse(kSeparable);
    CHECK(cfg.scene.width == 32);
    CHECK(cfg.scene.layout == Layout::stripes);
    CHECK(cfg.methods == std::vector<std::string>{"wc", "svm"});
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(cfg.spl.max_iters == 50);
    // Baseline defaults.
    CHECK(cfg.svm.c == 50.0);
    CHECK(cfg.svm.tol == 1e-5);
    CHECK(cfg.spl.c == 100.0);
    CHECK(cfg.spl.kappa == 1.05);
    CHECK(cfg.evaluate_on == EvalMode::test);

    const auto listed = parse("[experiment]\nmethods = svm_splnc\nseeds = 4, 9, 2\nevaluate_on = all\n[spl]\nlambda0 = 0.1\n");
    CHECK(listed.seeds == std::vector<std::uint64_t>{4, 9, 2});
    CHECK(listed.evaluate_on == EvalMode::all_labeled);
    CHECK(listed.spl.lambda0.value() == 0.1);
}

TEST_CASE("config errors carry line numbers") {
    CHECK(parse_error("[experiment]\nmethods = svm, knn\nseeds = 1\n").find("line 2") != std::string::npos);
    CHECK(parse_error("[experiment]\nmethods = svm, knn\nseeds = 1\n").find("knn") != std::string::npos);
    CHECK(parse_error("[dataset]\nwidht = 3\n").find("line 2") != std::string::npos);
    CHECK(parse_error("[nope]\n").find("line 1") != std::string::npos);
    CHECK(parse_error("[spl]\nkappa = fast\n").find("line 2") != std::string::npos);
    CHECK(parse_error("methods = svm\n").find("line 1") != std::string::npos);
    parse_error("[experiment]\nmethods = svm\n");            // no seeds
    parse_error("[experiment]\nseeds = 1\n");                // no methods
    parse_error("[experiment]\nmethods = svm\nseeds = 3..1\n");
    parse_error("[dataset]\nsource = file\n[experiment]\nmethods = svm\nseeds = 1\n");
    parse_error("[spl]\nkappa = 0.5\n[experiment]\nmethods = svm\nseeds = 1\n");
}

TEST_CASE("separable scene reaches full accuracy for both methods") {
    auto cfg = parse(kSeparable);
    const auto report = run_experiment(cfg, false);
    CHECK(report.all_ok());
    REQUIRE(report.runs.size() == 4);
    for (const auto& r : report.runs) CHECK(r.accuracy.oa == 1.0);

    std::istringstream lines(report.summary_csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "method,seed,oa,aa,acc_1,acc_2");
    std::getline(lines, line);
    CHECK(line == "wc,1,1.000000,1.000000,1.000000,1.000000");
    std::getline(lines, line);
    CHECK(line.rfind("svm,1,", 0) == 0);
    CHECK(run_experiment(cfg, false).summary_csv == report.summary_csv);
}

TEST_CASE("experiment outputs on disk") {
    const auto dir = std::filesystem::temp_directory_path() / "splnc_experiment_test";
    std::filesystem::remove_all(dir);
    auto cfg = parse(std::string(kSeparable) + "[experiment]\nmethods = svm_spl, svm_splnc\nseeds = 5\n");
    cfg.output_dir = dir;
    const auto report = run_experiment(cfg, true);
    CHECK(report.all_ok());
    CHECK(std::filesystem::exists(dir / "summary.csv"));
    CHECK(!std::filesystem::exists(dir / "failures.csv"));
    for (const char* run : {"svm_spl_seed5", "svm_splnc_seed5"}) {
        CHECK(std::filesystem::exists(dir / run / "confusion.csv"));
        CHECK(std::filesystem::exists(dir / run / "map.ppm"));
        std::ifstream trace(dir / run / "trace.csv");
        std::string header;
        std::getline(trace, header);
        CHECK(header == "class,iter,mean_v,mean_loss,active,train_oa");
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("failing runs are reported, not thrown") {
    auto cfg = parse(std::string(kSeparable) + "[dataset]\ntrain_fraction = 1.0\nblock_size = 40\n");
    // A 40 pixel block cannot fit; the mask still succeeds by shrinking, so
    // force a failure through a missing file instead.
    cfg.source = DatasetSource::file;
    cfg.data_path = "/nonexistent/scene.csv";
    const auto report = run_experiment(cfg, false);
    CHECK(!report.all_ok());
    for (const auto& r : report.runs) {
        CHECK(!r.ok);
        CHECK(!r.error.empty());
    }
}
