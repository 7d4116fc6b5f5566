#include "splnc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ranges>
#include <unordered_map>

#include "splnc/error.hpp"
#include "splnc/rng.hpp"

namespace splnc {

namespace {

using NeighborList = std::vector<std::vector<std::size_t>>;

// Training neighbors of every sample in fixed raster order of the 3x3 window.
NeighborList build_neighbors(const std::vector<GridCoord>& coords) {
    auto key = [](int x, int y) { return (static_cast<std::int64_t>(y) << 32) ^ static_cast<std::uint32_t>(x); };
    std::unordered_map<std::int64_t, std::size_t> at;
    at.reserve(coords.size() * 2);
    for (std::size_t i = 0; i < coords.size(); ++i) at.emplace(key(coords[i].x, coords[i].y), i);

    NeighborList out(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const auto it = at.find(key(coords[i].x + dx, coords[i].y + dy));
                if (it != at.end()) out[i].push_back(it->second);
            }
    }
    return out;
}

std::vector<double> update_weights(const std::vector<double>& losses, const NeighborList& neighbors, double lambda,
                                   const TrainerConfig& config) {
    std::vector<double> v(losses.size());
    for (std::size_t i = 0; i < losses.size(); ++i) {
        switch (config.regularizer) {
            case Regularizer::binary: v[i] = weight_binary(losses[i], lambda); break;
            case Regularizer::linear: v[i] = weight_linear(losses[i], lambda); break;
            case Regularizer::neighborhood: {
                NeighborLosses nl;
                nl.center = losses[i];
                for (std::size_t j : neighbors[i]) nl.neighbors[nl.count++] = losses[j];
                v[i] = weight_neighborhood(nl, lambda, config.entropy_mode);
                break;
            }
        }
    }
    return v;
}

bool both_classes_weighted(std::span<const int> y, std::span<const double> v) {
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (v[i] >= 1e-12) (y[i] > 0 ? pos : neg) = true;
    return pos && neg;
}

double training_accuracy(const SvmModel& model, const FeatureMatrix& x, std::span<const int> y) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        if ((model.decision(x.row(i)) > 0.0 ? 1 : -1) == y[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(x.rows());
}

std::vector<double> warm_start_weights(std::span<const int> y, std::size_t subset_size, Rng& rng) {
    const std::size_t n = y.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    const std::size_t m = std::min(n, subset_size);
    for (std::size_t k = 0; k < m; ++k) std::swap(perm[k], perm[k + rng.uniform_int(n - k)]);

    std::vector<double> v(n, 0.0);
    for (std::size_t k = 0; k < m; ++k) v[perm[k]] = 1.0;
    // A subset missing a class gets that class's first sample.
    for (int cls : {1, -1}) {
        if (std::ranges::any_of(std::views::iota(std::size_t{0}, n), [&](std::size_t i) { return v[i] > 0 && y[i] == cls; }))
            continue;
        for (std::size_t i = 0; i < n; ++i)
            if (y[i] == cls) {
                v[i] = 1.0;
                break;
            }
    }
    return v;
}

FeatureVector pixel_features(const GridDataset& ds, std::size_t i) {
    if (ds.has_features()) return ds.features[i];
    if (ds.has_coherency()) return feature_vector(ds.coherency[i]);
    throw Error(ErrorCode::DimensionMismatch, "dataset has neither features nor coherency matrices");
}

}  // namespace

void TrainerConfig::validate() const {
    auto fail = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (!(c > 0.0)) fail("c must be positive");
    if (!(gamma > 0.0)) fail("gamma must be positive");
    if (lambda0 && !(*lambda0 > 0.0)) throw Error(ErrorCode::NonPositivePace, "lambda0 must be positive");
    if (!(quantile > 0.0 && quantile < 1.0)) fail("quantile must lie in (0, 1)");
    if (!(kappa > 1.0)) fail("kappa must exceed 1");
    if (!(stop_eps >= 0.0 && stop_eps < 1.0)) fail("stop epsilon must lie in [0, 1)");
    if (max_iters == 0) fail("max iterations must be positive");
    if (!(tol > 0.0)) fail("solver tolerance must be positive");
    if (warm_start_size < 2) fail("warm start subset must hold at least two samples");
}

std::string_view to_string(Regularizer r) {
    switch (r) {
        case Regularizer::binary: return "binary";
        case Regularizer::linear: return "linear";
        case Regularizer::neighborhood: return "neighborhood";
    }
    return "linear";
}

std::string_view to_string(EntropyMode m) { return m == EntropyMode::normalized ? "normalized" : "literal"; }

Regularizer parse_regularizer(std::string_view text) {
    if (text == "binary") return Regularizer::binary;
    if (text == "linear") return Regularizer::linear;
    if (text == "neighborhood") return Regularizer::neighborhood;
    throw Error(ErrorCode::ParseError, "unknown regularizer '" + std::string(text) + "'");
}

EntropyMode parse_entropy_mode(std::string_view text) {
    if (text == "normalized") return EntropyMode::normalized;
    if (text == "literal") return EntropyMode::literal;
    throw Error(ErrorCode::ParseError, "unknown entropy mode '" + std::string(text) + "'");
}

SvmModel train_plain_binary(const FeatureMatrix& x, std::span<const int> y, double c, double gamma, double tol) {
    const std::vector<double> ones(x.rows(), 1.0);
    const KernelParams kp{gamma};
    SolverOptions opts;
    opts.tol = tol;
    const DualSolution sol = solve_weighted_dual(x, y, ones, c, kp, opts);
    return SvmModel::from_solution(x, y, sol, c, kp);
}

BinaryTrainResult train_spl_svm_binary(const BinaryProblem& problem, const TrainerConfig& config,
                                       std::uint64_t stream) {
    config.validate();
    const auto& x = problem.x;
    const std::span<const int> y = problem.y;
    if (y.size() != x.rows() || problem.coords.size() != x.rows())
        throw Error(ErrorCode::DimensionMismatch, "features, labels and coordinates differ in length");
    if (!std::ranges::count(y, 1) || !std::ranges::count(y, -1))
        throw Error(ErrorCode::DegenerateProblem, "binary problem needs both classes");

    const KernelParams kp{config.gamma};
    SolverOptions opts;
    opts.tol = config.tol;
    const NeighborList neighbors = build_neighbors(problem.coords);

    TrainingTrace trace;
    auto fit = [&](std::span<const double> v) {
        const DualSolution sol = solve_weighted_dual(x, y, v, config.c, kp, opts);
        trace.solver_converged = trace.solver_converged && sol.converged;
        return SvmModel::from_solution(x, y, sol, config.c, kp);
    };

    Rng rng(config.seed, stream);
    SvmModel model = fit(warm_start_weights(y, config.warm_start_size, rng));
    std::vector<double> losses = hinge_losses(model, x, y);

    double lambda0;
    if (config.lambda0) {
        lambda0 = *config.lambda0;
    } else {
        // Zero-loss samples are admitted at any positive pace, so only the
        // positive losses say anything about where the pace should start.
        // Margin support vectors sit within solver tolerance of zero loss.
        const double floor = 10.0 * config.tol;
        std::vector<double> positive;
        std::ranges::copy_if(losses, std::back_inserter(positive), [floor](double l) { return l > floor; });
        // A warm start that fits every sample leaves nothing to pace; start at
        // the unit margin so the first update admits everything.
        lambda0 = positive.empty() ? 1.0 : init_pace(positive, config.quantile);
    }
    trace.lambda0 = lambda0;

    SplState state(update_weights(losses, neighbors, lambda0, config), lambda0, config.kappa);
    for (std::size_t iter = 1; iter <= config.max_iters; ++iter) {
        if (both_classes_weighted(y, state.weights)) {
            model = fit(state.weights);
            losses = hinge_losses(model, x, y);
        }
        state.weights = update_weights(losses, neighbors, state.lambda, config);

        TraceRecord rec;
        rec.iter = iter;
        rec.lambda = state.lambda;
        const double n = static_cast<double>(x.rows());
        rec.mean_v = std::accumulate(state.weights.begin(), state.weights.end(), 0.0) / n;
        rec.mean_loss = std::accumulate(losses.begin(), losses.end(), 0.0) / n;
        rec.active = static_cast<std::size_t>(std::ranges::count_if(state.weights, [](double w) { return w > 0.0; }));
        rec.train_oa = training_accuracy(model, x, y);
        trace.records.push_back(rec);

        state = advance_pace(std::move(state));
        if (rec.mean_v >= 1.0 - config.stop_eps) {
            trace.reached_stop = true;
            break;
        }
    }
    if (both_classes_weighted(y, state.weights)) model = fit(state.weights);

    return BinaryTrainResult{std::move(model), std::move(trace), std::move(state.weights)};
}

std::vector<double> MulticlassModel::decisions(const FeatureVector& raw) const {
    const FeatureVector f = stats ? stats->apply(raw) : raw;
    std::vector<double> out;
    out.reserve(models.size());
    for (const auto& m : models) out.push_back(m.decision(f));
    return out;
}

int MulticlassModel::predict_one(const FeatureVector& raw) const {
    const auto d = decisions(raw);
    std::size_t best = 0;
    for (std::size_t k = 1; k < d.size(); ++k)
        if (d[k] > d[best]) best = k;
    return class_ids[best];
}

TrainingSet collect_training_set(const GridDataset& dataset, bool normalize) {
    TrainingSet ts;
    std::vector<FeatureVector> raw;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (dataset.splits[i] != Split::train || dataset.labels[i] <= 0) continue;
        raw.push_back(pixel_features(dataset, i));
        ts.labels.push_back(dataset.labels[i]);
        ts.coords.push_back({static_cast<int>(i % dataset.width), static_cast<int>(i / dataset.width)});
    }
    ts.class_ids = dataset.class_ids(true);
    if (ts.class_ids.size() < 2) throw Error(ErrorCode::TooFewClasses, "training mask holds fewer than two classes");
    if (normalize) {
        auto norm = normalize_features(raw);
        ts.stats = norm.stats;
        raw = std::move(norm.scaled);
    }
    ts.x = FeatureMatrix::from_rows(raw);
    return ts;
}

MulticlassResult train_multiclass(const GridDataset& dataset, const TrainerConfig& config) {
    config.validate();
    const TrainingSet ts = collect_training_set(dataset, config.normalize);

    MulticlassResult result;
    auto& model = result.model;
    model.method = config.regularizer == Regularizer::neighborhood ? "svm_splnc" : "svm_spl";
    model.class_ids = ts.class_ids;
    model.stats = ts.stats;
    model.config = config;

    for (int cls : ts.class_ids) {
        BinaryProblem bp{ts.x, {}, ts.coords};
        bp.y.reserve(ts.labels.size());
        for (int l : ts.labels) bp.y.push_back(l == cls ? 1 : -1);
        auto r = train_spl_svm_binary(bp, config, static_cast<std::uint64_t>(cls));
        r.trace.class_id = cls;
        model.models.push_back(std::move(r.model));
        result.traces.push_back(std::move(r.trace));
    }
    return result;
}

std::vector<int> predict(const MulticlassModel& model, const GridDataset& dataset) {
    if (model.models.empty() || model.models.size() != model.class_ids.size())
        throw Error(ErrorCode::InvalidModel, "model has no class machines");
    std::vector<int> out(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) out[i] = model.predict_one(pixel_features(dataset, i));
    return out;
}

}  // namespace splnc
