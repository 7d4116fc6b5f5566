#include "splnc/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "splnc/baselines.hpp"
#include "splnc/error.hpp"
#include "splnc/rng.hpp"

namespace splnc {

namespace {

constexpr std::uint64_t kMaskStream = 0x6D61736BULL;  // "mask"
const std::set<std::string> kMethods = {"svm", "wc", "svm_spl", "svm_splnc"};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

double to_real(std::string_view v, std::size_t line, std::string_view key) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) fail(line, "'" + std::string(key) + "' expects a number");
    return out;
}

template <class Int>
Int to_int(std::string_view v, std::size_t line, std::string_view key) {
    Int out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) fail(line, "'" + std::string(key) + "' expects an integer");
    return out;
}

bool to_bool(std::string_view v, std::size_t line, std::string_view key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(line, "'" + std::string(key) + "' expects true or false");
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = v.find(',', start);
        const auto item = trim(v.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (!item.empty()) out.push_back(item);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class F>
auto wrap(std::size_t line, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        fail(line, e.what());
    }
}

using Handler = std::function<void(std::string_view value, std::size_t line)>;

std::map<std::string, Handler> trainer_keys(TrainerConfig& c, bool self_paced) {
    std::map<std::string, Handler> keys;
    keys["c"] = [&c](auto v, auto l) { c.c = to_real(v, l, "c"); };
    keys["gamma"] = [&c](auto v, auto l) { c.gamma = to_real(v, l, "gamma"); };
    keys["tol"] = [&c](auto v, auto l) { c.tol = to_real(v, l, "tol"); };
    keys["normalize"] = [&c](auto v, auto l) { c.normalize = to_bool(v, l, "normalize"); };
    if (!self_paced) return keys;
    keys["lambda0"] = [&c](auto v, auto l) {
        if (v == "auto") c.lambda0.reset();
        else c.lambda0 = to_real(v, l, "lambda0");
    };
    keys["quantile"] = [&c](auto v, auto l) { c.quantile = to_real(v, l, "quantile"); };
    keys["kappa"] = [&c](auto v, auto l) { c.kappa = to_real(v, l, "kappa"); };
    keys["entropy_mode"] = [&c](auto v, auto l) { c.entropy_mode = wrap(l, [&] { return parse_entropy_mode(v); }); };
    keys["stop_eps"] = [&c](auto v, auto l) { c.stop_eps = to_real(v, l, "stop_eps"); };
    keys["max_iters"] = [&c](auto v, auto l) { c.max_iters = to_int<std::size_t>(v, l, "max_iters"); };
    keys["warm_start_size"] = [&c](auto v, auto l) { c.warm_start_size = to_int<std::size_t>(v, l, "warm_start_size"); };
    return keys;
}

std::filesystem::path run_dir(const ExperimentConfig& config, const std::string& method, std::uint64_t seed) {
    return config.output_dir / (method + "_seed" + std::to_string(seed));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
    // Baseline settings: RBF gamma 1, cost 50, termination tolerance 1e-5.
    svm.c = 50.0;
    svm.gamma = 1.0;
    svm.tol = 1e-5;
    // Self-paced settings: c 100, gamma 1, kappa 1.05.
    spl.c = 100.0;
    spl.gamma = 1.0;
    spl.kappa = 1.05;
}

ExperimentConfig parse_experiment_config(std::istream& is) {
    ExperimentConfig cfg;
    std::map<std::string, std::map<std::string, Handler>> sections;

    auto& ds = sections["dataset"];
    ds["source"] = [&](auto v, auto l) {
        if (v == "synthetic") cfg.source = DatasetSource::synthetic;
        else if (v == "file") cfg.source = DatasetSource::file;
        else fail(l, "'source' must be synthetic or file");
    };
    ds["path"] = [&](auto v, auto) { cfg.data_path = std::string(v); };
    ds["use_file_mask"] = [&](auto v, auto l) { cfg.use_file_mask = to_bool(v, l, "use_file_mask"); };
    ds["width"] = [&](auto v, auto l) { cfg.scene.width = to_int<int>(v, l, "width"); };
    ds["height"] = [&](auto v, auto l) { cfg.scene.height = to_int<int>(v, l, "height"); };
    ds["classes"] = [&](auto v, auto l) { cfg.scene.classes = to_int<int>(v, l, "classes"); };
    ds["layout"] = [&](auto v, auto l) { cfg.scene.layout = wrap(l, [&] { return parse_layout(v); }); };
    ds["voronoi_seeds"] = [&](auto v, auto l) { cfg.scene.voronoi_seeds = to_int<int>(v, l, "voronoi_seeds"); };
    ds["looks"] = [&](auto v, auto l) { cfg.scene.looks = to_int<int>(v, l, "looks"); };
    ds["similarity"] = [&](auto v, auto l) { cfg.scene.similarity = to_real(v, l, "similarity"); };
    ds["train_fraction"] = [&](auto v, auto l) { cfg.train_fraction = to_real(v, l, "train_fraction"); };
    ds["block_size"] = [&](auto v, auto l) { cfg.block_size = to_int<int>(v, l, "block_size"); };

    auto& ex = sections["experiment"];
    ex["methods"] = [&](auto v, auto l) {
        cfg.methods.clear();
        for (auto m : split_list(v)) {
            if (!kMethods.contains(std::string(m))) fail(l, "'methods' names unknown method '" + std::string(m) + "'");
            cfg.methods.emplace_back(m);
        }
    };
    ex["seeds"] = [&](auto v, auto l) {
        cfg.seeds.clear();
        if (const auto dots = v.find(".."); dots != std::string_view::npos) {
            const auto lo = to_int<std::uint64_t>(trim(v.substr(0, dots)), l, "seeds");
            const auto hi = to_int<std::uint64_t>(trim(v.substr(dots + 2)), l, "seeds");
            if (hi < lo) fail(l, "'seeds' range is empty");
            for (auto s = lo; s <= hi; ++s) cfg.seeds.push_back(s);
        } else {
            for (auto s : split_list(v)) cfg.seeds.push_back(to_int<std::uint64_t>(s, l, "seeds"));
        }
    };
    ex["evaluate_on"] = [&](auto v, auto l) { cfg.evaluate_on = wrap(l, [&] { return parse_eval_mode(v); }); };
    ex["output_dir"] = [&](auto v, auto) { cfg.output_dir = std::string(v); };

    sections["svm"] = trainer_keys(cfg.svm, false);
    sections["spl"] = trainer_keys(cfg.spl, true);

    std::string raw;
    std::size_t lineno = 0;
    std::map<std::string, Handler>* current = nullptr;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "unterminated section header");
            const std::string name(trim(line.substr(1, line.size() - 2)));
            const auto it = sections.find(name);
            if (it == sections.end()) fail(lineno, "unknown section [" + name + "]");
            current = &it->second;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(lineno, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (!current) fail(lineno, "key '" + key + "' appears before any section");
        const auto h = current->find(key);
        if (h == current->end()) fail(lineno, "unknown key '" + key + "'");
        if (value.empty()) fail(lineno, "key '" + key + "' has no value");
        h->second(value, lineno);
    }

    if (cfg.methods.empty()) throw Error(ErrorCode::ParseError, "no methods configured");
    if (cfg.seeds.empty()) throw Error(ErrorCode::ParseError, "no seeds configured");
    if (cfg.source == DatasetSource::file && cfg.data_path.empty())
        throw Error(ErrorCode::ParseError, "file dataset needs a path");
    try {
        if (cfg.source == DatasetSource::synthetic) cfg.scene.validate();
        cfg.svm.validate();
        cfg.spl.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    ExperimentConfig cfg = parse_experiment_config(in);
    const auto base = path.parent_path();
    if (!cfg.data_path.empty() && cfg.data_path.is_relative()) cfg.data_path = base / cfg.data_path;
    if (cfg.output_dir.is_relative()) cfg.output_dir = base / cfg.output_dir;
    return cfg;
}

bool ExperimentReport::all_ok() const {
    return std::ranges::all_of(runs, [](const RunResult& r) { return r.ok; });
}

GridDataset experiment_dataset(const ExperimentConfig& config, std::uint64_t seed) {
    GridDataset ds;
    if (config.source == DatasetSource::synthetic) {
        SceneSpec spec = config.scene;
        spec.seed = seed;
        ds = generate_scene(spec);
    } else {
        ds = load_dataset(config.data_path.string());
        if (config.use_file_mask) return ds;
    }
    Rng rng(seed, kMaskStream);
    sample_training_mask(ds, config.train_fraction, config.block_size, rng);
    return ds;
}

RunResult run_method(const ExperimentConfig& config, const std::string& method, std::uint64_t seed,
                     const GridDataset& dataset, std::vector<int>* predicted) {
    RunResult r;
    r.method = method;
    r.seed = seed;
    try {
        std::vector<int> pred;
        std::vector<int> class_ids;
        if (method == "wc") {
            const auto centers = wishart_centers(dataset);
            for (const auto& c : centers.centers) class_ids.push_back(c.class_id);
            pred = wishart_predict(centers, dataset);
        } else if (method == "svm") {
            TrainerConfig tc = config.svm;
            tc.seed = seed;
            const auto model = train_plain_svm(dataset, tc);
            class_ids = model.class_ids;
            pred = predict(model, dataset);
        } else if (method == "svm_spl" || method == "svm_splnc") {
            TrainerConfig tc = config.spl;
            tc.seed = seed;
            tc.regularizer = method == "svm_spl" ? Regularizer::linear : Regularizer::neighborhood;
            auto result = train_multiclass(dataset, tc);
            class_ids = result.model.class_ids;
            pred = predict(result.model, dataset);
            r.traces = std::move(result.traces);
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown method '" + method + "'");
        }
        r.confusion = confusion_matrix(pred, dataset.labels, dataset.splits, config.evaluate_on, class_ids);
        r.accuracy = oa_aa(r.confusion);
        r.ok = true;
        if (predicted) *predicted = std::move(pred);
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

std::string summary_csv(const std::vector<RunResult>& runs) {
    std::set<int> classes;
    for (const auto& r : runs)
        if (r.ok) classes.insert(r.confusion.class_ids.begin(), r.confusion.class_ids.end());
    std::ostringstream os;
    os << "method,seed,oa,aa";
    for (int c : classes) os << ",acc_" << c;
    os << '\n';
    for (const auto& r : runs) {
        if (!r.ok) continue;
        os << r.method << ',' << r.seed << ',' << format_fixed6(r.accuracy.oa) << ',' << format_fixed6(r.accuracy.aa);
        for (int c : classes) {
            os << ',';
            const auto it = std::ranges::find(r.confusion.class_ids, c);
            if (it == r.confusion.class_ids.end()) continue;
            const auto& acc = r.accuracy.per_class[static_cast<std::size_t>(it - r.confusion.class_ids.begin())];
            if (acc) os << format_fixed6(*acc);
        }
        os << '\n';
    }
    return os.str();
}

void write_trace_csv(std::ostream& os, const std::vector<TrainingTrace>& traces) {
    os << "class,iter,mean_v,mean_loss,active,train_oa\n";
    for (const auto& t : traces)
        for (const auto& rec : t.records)
            os << t.class_id << ',' << rec.iter << ',' << format_fixed6(rec.mean_v) << ','
               << format_fixed6(rec.mean_loss) << ',' << rec.active << ',' << format_fixed6(rec.train_oa) << '\n';
}

ExperimentReport run_experiment(const ExperimentConfig& config, bool write_outputs) {
    ExperimentReport report;
    if (write_outputs) std::filesystem::create_directories(config.output_dir);
    std::ostringstream failures;
    failures << "method,seed,error\n";

    for (std::uint64_t seed : config.seeds) {
        GridDataset dataset;
        std::string dataset_error;
        try {
            dataset = experiment_dataset(config, seed);
        } catch (const std::exception& e) {
            dataset_error = e.what();
        }
        for (const auto& method : config.methods) {
            RunResult r;
            std::vector<int> pred;
            if (dataset_error.empty()) {
                r = run_method(config, method, seed, dataset, &pred);
            } else {
                r.method = method;
                r.seed = seed;
                r.error = dataset_error;
            }
            if (!r.ok) {
                std::string msg = r.error;
                std::ranges::replace(msg, ',', ';');
                std::ranges::replace(msg, '\n', ' ');
                failures << method << ',' << seed << ',' << msg << '\n';
            } else if (write_outputs) {
                const auto dir = run_dir(config, method, seed);
                std::filesystem::create_directories(dir);
                std::ostringstream cm;
                write_confusion_csv(cm, r.confusion);
                write_text(dir / "confusion.csv", cm.str());
                write_text(dir / "map.ppm", render_class_map(dataset.width, dataset.height, pred, default_palette()));
                if (!r.traces.empty()) {
                    std::ostringstream tr;
                    write_trace_csv(tr, r.traces);
                    write_text(dir / "trace.csv", tr.str());
                }
            }
            report.runs.push_back(std::move(r));
        }
    }
    report.summary_csv = summary_csv(report.runs);
    if (write_outputs) {
        write_text(config.output_dir / "summary.csv", report.summary_csv);
        if (!report.all_ok()) write_text(config.output_dir / "failures.csv", failures.str());
    }
    return report;
}

}  // namespace splnc
