#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace splnc {

enum class Regularizer { binary, linear, neighborhood };

/// How neighbor losses become the distribution whose entropy weights the
/// neighborhood term. `normalized` divides by the neighbor loss sum so the
/// p_ij form a distribution; `literal` divides by the neighbor mean.
enum class EntropyMode { normalized, literal };

/// Loss of one training pixel together with the losses of its available
/// 8-connected training neighbors.
struct NeighborLosses {
    double center = 0.0;
    std::array<double, 8> neighbors{};
    std::size_t count = 0;

    double neighbor_mean() const;
};

/// Per-sample weights plus the pace schedule.
struct SplState {
    std::vector<double> weights;
    double lambda = 0.1;
    double kappa = 1.05;
    std::size_t iteration = 0;

    SplState(std::vector<double> w, double lambda, double kappa);
};

/// 1 when loss < lambda, else 0.
double weight_binary(double loss, double lambda);
/// 1 - loss / lambda when loss < lambda, else 0.
double weight_linear(double loss, double lambda);

/// Shannon entropy (natural log) of the neighbor-loss distribution.
/// Zero when there are no neighbors or all neighbor losses are zero.
double neighborhood_gamma(const NeighborLosses& nl, EntropyMode mode);

/// Linear rule applied to the combined loss center + gamma * neighbor_mean.
/// With no neighbors this is exactly weight_linear.
double weight_neighborhood(const NeighborLosses& nl, double lambda, EntropyMode mode);

/// lambda <- kappa * lambda and one more iteration; weights untouched.
SplState advance_pace(SplState state);

/// Nearest-rank `quantile` order statistic of `losses`, floored at 1e-6.
double init_pace(std::span<const double> losses, double quantile);

}  // namespace splnc
