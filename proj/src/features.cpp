#include "splnc/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "splnc/error.hpp"

namespace splnc {

namespace {

constexpr double kPsdSlack = 1e-9;
constexpr int kMaxSweeps = 64;

double off_diagonal_norm2(const Matrix3c& a) {
    return 2.0 * (std::norm(a[0][1]) + std::norm(a[0][2]) + std::norm(a[1][2]));
}

// One complex Jacobi rotation zeroing a[p][q]. The rotation is the product
// of a phase change on column q (making a[p][q] real and non-negative) and
// a real plane rotation.
void jacobi_rotate(Matrix3c& a, Matrix3c& v, int p, int q) {
    const double r = std::abs(a[p][q]);
    if (r == 0.0) return;
    const cplx phase = a[p][q] / r;
    const double app = a[p][p].real();
    const double aqq = a[q][q].real();
    const double theta = (aqq - app) / (2.0 * r);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    Matrix3c g{};
    for (int i = 0; i < 3; ++i) g[i][i] = 1.0;
    g[p][p] = c;
    g[p][q] = s;
    g[q][p] = -s * std::conj(phase);
    g[q][q] = c * std::conj(phase);

    a = mat_mul(adjoint(g), mat_mul(a, g));
    a[p][q] = 0.0;
    a[q][p] = 0.0;
    for (int i = 0; i < 3; ++i) a[i][i] = a[i][i].real();
    v = mat_mul(v, g);
}

}  // namespace

EigenSystem eig3_hermitian(const CoherencyMatrix& t) {
    if (!t.is_finite()) throw Error(ErrorCode::NonFiniteInput, "coherency matrix has NaN/Inf entries");

    Matrix3c a = t.to_matrix();
    Matrix3c v{};
    for (int i = 0; i < 3; ++i) v[i][i] = 1.0;

    const double scale2 = std::max(frobenius_norm(a) * frobenius_norm(a), 1e-300);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm2(a) <= 1e-34 * scale2) break;
        jacobi_rotate(a, v, 0, 1);
        jacobi_rotate(a, v, 0, 2);
        jacobi_rotate(a, v, 1, 2);
    }

    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a[i][i].real() > a[j][j].real(); });

    const double slack = kPsdSlack * std::abs(t.trace());
    EigenSystem es;
    for (int k = 0; k < 3; ++k) {
        const int src = order[k];
        double lambda = a[src][src].real();
        if (lambda < -slack) throw Error(ErrorCode::NotPSD, "eigenvalue below PSD slack");
        es.values[k] = std::max(lambda, 0.0);
        for (int i = 0; i < 3; ++i) es.vectors[k][i] = v[i][src];
    }
    return es;
}

CloudePottier cloude_pottier(const EigenSystem& es) {
    const double span = es.values[0] + es.values[1] + es.values[2];
    if (!(span > 0.0)) throw Error(ErrorCode::DegenerateSpan, "eigenvalue sum is not positive");

    CloudePottier cp;
    const double log3 = std::log(3.0);
    for (int k = 0; k < 3; ++k) {
        const double p = es.values[k] / span;
        if (p > 0.0) cp.entropy -= p * std::log(p) / log3;
        const double first = std::min(1.0, std::abs(es.vectors[k][0]));
        cp.alpha_mean += p * std::acos(first);
    }
    cp.entropy = std::clamp(cp.entropy, 0.0, 1.0);

    // Relative threshold instead of exact zero: rank-1 inputs leave
    // rounding-level residue in lambda2 and lambda3.
    const double tail = es.values[1] + es.values[2];
    if (tail > 1e-10 * span) cp.anisotropy = (es.values[1] - es.values[2]) / tail;
    return cp;
}

FeatureVector feature_vector(const CoherencyMatrix& t) {
    const EigenSystem es = eig3_hermitian(t);
    const CloudePottier cp = cloude_pottier(es);
    const double span = es.values[0] + es.values[1] + es.values[2];
    return {es.values[0], es.values[1], es.values[2], span, cp.entropy, cp.alpha_mean, cp.anisotropy};
}

FeatureVector FeatureStats::apply(const FeatureVector& f) const {
    FeatureVector out{};
    for (std::size_t d = 0; d < kFeatureDim; ++d)
        out[d] = stddev[d] < 1e-12 ? 0.0 : (f[d] - mean[d]) / stddev[d];
    return out;
}

FeatureStats compute_feature_stats(std::span<const FeatureVector> samples) {
    if (samples.size() < 2) throw Error(ErrorCode::EmptyInput, "need at least two samples to normalize");
    const double n = static_cast<double>(samples.size());
    FeatureStats stats;
    for (const auto& s : samples)
        for (std::size_t d = 0; d < kFeatureDim; ++d) stats.mean[d] += s[d];
    for (auto& m : stats.mean) m /= n;
    for (const auto& s : samples)
        for (std::size_t d = 0; d < kFeatureDim; ++d) {
            const double dev = s[d] - stats.mean[d];
            stats.stddev[d] += dev * dev;
        }
    for (auto& sd : stats.stddev) sd = std::sqrt(sd / n);
    return stats;
}

NormalizedFeatures normalize_features(std::span<const FeatureVector> samples) {
    NormalizedFeatures out;
    out.stats = compute_feature_stats(samples);
    out.scaled.reserve(samples.size());
    for (const auto& s : samples) out.scaled.push_back(out.stats.apply(s));
    return out;
}

}  // namespace splnc
