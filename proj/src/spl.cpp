#include "splnc/spl.hpp"

#include <algorithm>
#include <cmath>

#include "splnc/error.hpp"

namespace splnc {

namespace {

void check_pace(double lambda) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::NonPositivePace, "pace parameter must be positive");
}

}  // namespace

double NeighborLosses::neighbor_mean() const {
    if (count == 0) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < count; ++j) s += neighbors[j];
    return s / static_cast<double>(count);
}

SplState::SplState(std::vector<double> w, double lambda_, double kappa_)
    : weights(std::move(w)), lambda(lambda_), kappa(kappa_) {
    check_pace(lambda);
    if (!(kappa > 1.0)) throw Error(ErrorCode::InvalidArgument, "kappa must exceed 1");
    for (double x : weights)
        if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::InvalidArgument, "weights must lie in [0, 1]");
}

double weight_binary(double loss, double lambda) {
    check_pace(lambda);
    return loss < lambda ? 1.0 : 0.0;
}

double weight_linear(double loss, double lambda) {
    check_pace(lambda);
    return loss < lambda ? 1.0 - loss / lambda : 0.0;
}

double neighborhood_gamma(const NeighborLosses& nl, EntropyMode mode) {
    if (nl.count == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < nl.count; ++j) sum += nl.neighbors[j];
    if (!(sum > 0.0)) return 0.0;

    const double denom = mode == EntropyMode::normalized ? sum : sum / static_cast<double>(nl.count);
    double gamma = 0.0;
    for (std::size_t j = 0; j < nl.count; ++j) {
        const double p = nl.neighbors[j] / denom;
        if (p > 0.0) gamma -= p * std::log(p);
    }
    // In literal mode the p_ij sum to k, so terms with p > 1 go negative.
    return std::max(gamma, 0.0);
}

double weight_neighborhood(const NeighborLosses& nl, double lambda, EntropyMode mode) {
    if (nl.count == 0) return weight_linear(nl.center, lambda);
    check_pace(lambda);
    const double combined = nl.center + neighborhood_gamma(nl, mode) * nl.neighbor_mean();
    return combined < lambda ? 1.0 - combined / lambda : 0.0;
}

SplState advance_pace(SplState state) {
    state.lambda *= state.kappa;
    ++state.iteration;
    return state;
}

double init_pace(std::span<const double> losses, double quantile) {
    if (losses.empty()) throw Error(ErrorCode::EmptyInput, "no losses to set the initial pace from");
    if (!(quantile > 0.0 && quantile < 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile must lie in (0, 1)");
    std::vector<double> sorted(losses.begin(), losses.end());
    std::ranges::sort(sorted);
    const double n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(quantile * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return std::max(sorted[rank - 1], 1e-6);
}

}  // namespace splnc
