#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace splnc {

/// Dense row-major sample matrix. Every row has the same dimension.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    template <class Range>
    static FeatureMatrix from_rows(const Range& rows) {
        FeatureMatrix m;
        for (const auto& r : rows) m.push_row(std::span<const double>(r.data(), r.size()));
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    void push_row(std::span<const double> r);
    FeatureMatrix select(std::span<const std::size_t> indices) const;

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Gaussian kernel K(x, z) = exp(-gamma * |x - z|^2). Only this kernel is supported.
struct KernelParams {
    double gamma = 1.0;
};

double rbf_kernel(std::span<const double> x, std::span<const double> z, const KernelParams& params);

struct SolverOptions {
    double tol = 1e-3;
    std::size_t max_iterations = 100000;
    /// The full kernel matrix is cached when the active set is at most this
    /// large; bigger problems recompute the two working rows per iteration.
    std::size_t full_cache_limit = 4000;
    bool record_objective = false;
};

/// Solution of the weighted dual
///   max  sum(delta) - 1/2 sum_ij delta_i delta_j y_i y_j K_ij
///   s.t. sum(y_i delta_i) = 0,  0 <= delta_i <= c * v_i.
struct DualSolution {
    std::vector<double> delta;
    double bias = 0.0;
    double objective = 0.0;
    std::size_t iterations = 0;
    /// Maximal-violating-pair gap at exit.
    double gap = 0.0;
    /// False when the iteration cap was hit before the gap fell below tol;
    /// the returned iterate is then the best reached so far.
    bool converged = false;
    std::vector<double> objective_history;
};

/// Two-variable working-set (SMO) solver with per-sample upper bounds c*v_i.
///
/// Pairs are chosen by maximal KKT violation with ties going to the lowest
/// index. Samples with v_i < 1e-12 never enter the working set and keep
/// delta_i = 0 exactly, so the result equals solving without them.
/// Throws DegenerateProblem when a class has no sample with positive weight.
DualSolution solve_weighted_dual(const FeatureMatrix& x, std::span<const int> y, std::span<const double> v,
                                 double c, const KernelParams& params, const SolverOptions& options = {});

/// Max over samples of the box-constrained KKT residual of `sol`, using its bias.
double kkt_violation(const DualSolution& sol, const FeatureMatrix& x, std::span<const int> y,
                     std::span<const double> v, double c, const KernelParams& params);

/// Trained binary kernel machine f(x) = sum_k coef_k K(sv_k, x) + bias.
class SvmModel {
public:
    SvmModel(FeatureMatrix support_vectors, std::vector<double> coefficients, double bias, KernelParams params);

    /// Keeps samples with delta_i > 1e-8 * c as support vectors.
    static SvmModel from_solution(const FeatureMatrix& x, std::span<const int> y, const DualSolution& sol,
                                  double c, const KernelParams& params);

    double decision(std::span<const double> x) const;

    const FeatureMatrix& support_vectors() const { return sv_; }
    const std::vector<double>& coefficients() const { return coef_; }
    double bias() const { return bias_; }
    const KernelParams& kernel() const { return kernel_; }
    std::size_t support_count() const { return sv_.rows(); }

private:
    FeatureMatrix sv_;
    std::vector<double> coef_;
    double bias_;
    KernelParams kernel_;
};

/// max(0, 1 - y_i f(x_i)) per sample.
std::vector<double> hinge_losses(const SvmModel& model, const FeatureMatrix& x, std::span<const int> y);

}  // namespace splnc
