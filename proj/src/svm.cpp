#include "splnc/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splnc/error.hpp"

namespace splnc {

namespace {

constexpr double kZeroWeight = 1e-12;
constexpr double kBoundSlack = 1e-9;
constexpr double kTau = 1e-12;

void check_problem(const FeatureMatrix& x, std::span<const int> y, std::span<const double> v, double c,
                   const KernelParams& params) {
    if (x.rows() != y.size() || x.rows() != v.size())
        throw Error(ErrorCode::DimensionMismatch, "features, labels and weights differ in length");
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "c must be positive");
    if (!(params.gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel gamma must be positive");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1 && y[i] != -1) throw Error(ErrorCode::InvalidArgument, "labels must be +1 or -1");
        if (!(v[i] >= 0.0 && v[i] <= 1.0)) throw Error(ErrorCode::InvalidArgument, "weights must lie in [0, 1]");
    }
}

// Kernel rows over the active subset, either from a full cached matrix or
// recomputed on demand into one of two scratch buffers.
class KernelRows {
public:
    KernelRows(const FeatureMatrix& x, const std::vector<std::size_t>& active, const KernelParams& params,
               std::size_t full_limit)
        : x_(x), active_(active), params_(params), n_(active.size()), full_(n_ <= full_limit) {
        if (full_) {
            cache_.resize(n_ * n_);
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = i; j < n_; ++j) {
                    const double k = rbf_kernel(x_.row(active_[i]), x_.row(active_[j]), params_);
                    cache_[i * n_ + j] = k;
                    cache_[j * n_ + i] = k;
                }
        } else {
            scratch_[0].resize(n_);
            scratch_[1].resize(n_);
        }
    }

    std::span<const double> row(std::size_t i, int slot) {
        if (full_) return {cache_.data() + i * n_, n_};
        auto& buf = scratch_[slot];
        for (std::size_t k = 0; k < n_; ++k) buf[k] = rbf_kernel(x_.row(active_[i]), x_.row(active_[k]), params_);
        return buf;
    }

private:
    const FeatureMatrix& x_;
    const std::vector<std::size_t>& active_;
    KernelParams params_;
    std::size_t n_;
    bool full_;
    std::vector<double> cache_;
    std::vector<double> scratch_[2];
};

double dual_objective(std::span<const double> alpha, std::span<const double> grad) {
    double s = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * (1.0 - grad[i]);
    return 0.5 * s;
}

}  // namespace

void FeatureMatrix::push_row(std::span<const double> r) {
    if (rows_ == 0 && data_.empty()) cols_ = r.size();
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "row dimension differs from matrix");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
}

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> indices) const {
    FeatureMatrix out(indices.size(), cols_);
    for (std::size_t k = 0; k < indices.size(); ++k) std::ranges::copy(row(indices[k]), out.row(k).begin());
    return out;
}

double rbf_kernel(std::span<const double> x, std::span<const double> z, const KernelParams& params) {
    if (x.size() != z.size()) throw Error(ErrorCode::DimensionMismatch, "kernel arguments differ in dimension");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - z[i];
        d2 += d * d;
    }
    return std::exp(-params.gamma * d2);
}

DualSolution solve_weighted_dual(const FeatureMatrix& x, std::span<const int> y, std::span<const double> v,
                                 double c, const KernelParams& params, const SolverOptions& options) {
    check_problem(x, y, v, c, params);
    if (x.rows() < 2) throw Error(ErrorCode::DegenerateProblem, "need at least two samples");

    std::vector<std::size_t> active;
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < kZeroWeight) continue;
        active.push_back(i);
        (y[i] > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) throw Error(ErrorCode::DegenerateProblem, "a class has zero total weight");

    const std::size_t n = active.size();
    std::vector<double> ys(n), upper(n), alpha(n, 0.0), grad(n, -1.0);
    for (std::size_t k = 0; k < n; ++k) {
        ys[k] = y[active[k]];
        upper[k] = c * v[active[k]];
    }
    KernelRows kernel(x, active, params, options.full_cache_limit);

    DualSolution sol;
    if (options.record_objective) sol.objective_history.push_back(0.0);

    for (;;) {
        // Maximal violating pair: i maximizes -y G over I_up, j minimizes it over I_low.
        std::size_t i = n, j = n;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double score = -ys[t] * grad[t];
            const bool in_up = ys[t] > 0 ? alpha[t] < upper[t] : alpha[t] > 0.0;
            const bool in_low = ys[t] > 0 ? alpha[t] > 0.0 : alpha[t] < upper[t];
            if (in_up && score > gmax) {
                gmax = score;
                i = t;
            }
            if (in_low && score < gmin) {
                gmin = score;
                j = t;
            }
        }
        sol.gap = (i == n || j == n) ? 0.0 : gmax - gmin;
        if (sol.gap <= options.tol) {
            sol.converged = true;
            break;
        }
        if (sol.iterations >= options.max_iterations) break;
        ++sol.iterations;

        const auto ki = kernel.row(i, 0);
        const auto kj = kernel.row(j, 1);
        const double ci = upper[i], cj = upper[j];
        const double old_i = alpha[i], old_j = alpha[j];
        double quad = ki[i] + kj[j] - 2.0 * ki[j];
        if (quad <= 0.0) quad = kTau;

        if (ys[i] != ys[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > ci - cj) {
                if (alpha[i] > ci) {
                    alpha[i] = ci;
                    alpha[j] = ci - diff;
                }
            } else if (alpha[j] > cj) {
                alpha[j] = cj;
                alpha[i] = cj + diff;
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > ci) {
                if (alpha[i] > ci) {
                    alpha[i] = ci;
                    alpha[j] = sum - ci;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > cj) {
                if (alpha[j] > cj) {
                    alpha[j] = cj;
                    alpha[i] = sum - cj;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double di = (alpha[i] - old_i) * ys[i];
        const double dj = (alpha[j] - old_j) * ys[j];
        for (std::size_t t = 0; t < n; ++t) grad[t] += ys[t] * (ki[t] * di + kj[t] * dj);

        if (options.record_objective) sol.objective_history.push_back(dual_objective(alpha, grad));
    }

    // Bias from free vectors, else the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = ys[t] * grad[t];
        if (alpha[t] <= 0.0) {
            if (ys[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] >= upper[t] - kBoundSlack) {
            if (ys[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (ub + lb);
    sol.bias = -rho;
    sol.objective = dual_objective(alpha, grad);

    sol.delta.assign(x.rows(), 0.0);
    for (std::size_t k = 0; k < n; ++k) sol.delta[active[k]] = alpha[k];
    return sol;
}

double kkt_violation(const DualSolution& sol, const FeatureMatrix& x, std::span<const int> y,
                     std::span<const double> v, double c, const KernelParams& params) {
    check_problem(x, y, v, c, params);
    if (sol.delta.size() != x.rows()) throw Error(ErrorCode::DimensionMismatch, "solution size differs from data");

    double worst = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        if (v[i] < kZeroWeight) continue;
        double f = sol.bias;
        for (std::size_t j = 0; j < x.rows(); ++j)
            if (sol.delta[j] != 0.0) f += sol.delta[j] * y[j] * rbf_kernel(x.row(j), x.row(i), params);
        const double g = y[i] * f - 1.0;
        const double upper = c * v[i];
        double r;
        if (sol.delta[i] <= 0.0) r = std::max(0.0, -g);
        else if (sol.delta[i] >= upper - kBoundSlack) r = std::max(0.0, g);
        else r = std::abs(g);
        worst = std::max(worst, r);
    }
    return worst;
}

SvmModel::SvmModel(FeatureMatrix support_vectors, std::vector<double> coefficients, double bias,
                   KernelParams params)
    : sv_(std::move(support_vectors)), coef_(std::move(coefficients)), bias_(bias), kernel_(params) {
    if (sv_.rows() != coef_.size()) throw Error(ErrorCode::InvalidModel, "coefficient count differs from support vectors");
    if (!(kernel_.gamma > 0.0)) throw Error(ErrorCode::InvalidModel, "kernel gamma must be positive");
    if (std::ranges::none_of(coef_, [](double a) { return a != 0.0; }))
        throw Error(ErrorCode::InvalidModel, "model has no support vectors");
    if (!std::isfinite(bias_)) throw Error(ErrorCode::InvalidModel, "bias is not finite");
}

SvmModel SvmModel::from_solution(const FeatureMatrix& x, std::span<const int> y, const DualSolution& sol, double c,
                                 const KernelParams& params) {
    if (sol.delta.size() != x.rows() || y.size() != x.rows())
        throw Error(ErrorCode::DimensionMismatch, "solution size differs from data");
    FeatureMatrix sv;
    std::vector<double> coef;
    const double threshold = 1e-8 * c;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        if (sol.delta[i] > threshold) {
            sv.push_row(x.row(i));
            coef.push_back(sol.delta[i] * y[i]);
        }
    }
    return SvmModel(std::move(sv), std::move(coef), sol.bias, params);
}

double SvmModel::decision(std::span<const double> x) const {
    if (x.size() != sv_.cols()) throw Error(ErrorCode::DimensionMismatch, "input dimension differs from model");
    double f = 0.0;
    for (std::size_t k = 0; k < sv_.rows(); ++k) f += coef_[k] * rbf_kernel(sv_.row(k), x, kernel_);
    return f + bias_;
}

std::vector<double> hinge_losses(const SvmModel& model, const FeatureMatrix& x, std::span<const int> y) {
    if (x.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "features and labels differ in length");
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = std::max(0.0, 1.0 - y[i] * model.decision(x.row(i)));
    return out;
}

}  // namespace splnc
