#pragma once

#include <random>
#include <vector>

#include "splnc/coherency.hpp"
#include "splnc/svm.hpp"

namespace testing_support {

// Random PSD coherency matrix A A^H with Gaussian A; rank chooses the number
// of columns of A.
inline splnc::CoherencyMatrix random_psd(std::mt19937_64& g, int rank = 3, double scale = 1.0) {
    std::normal_distribution<double> nd;
    splnc::Matrix3c a{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < rank; ++k) a[i][k] = splnc::cplx(nd(g), nd(g)) * scale;
    splnc::Matrix3c m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) m[i][j] += a[i][k] * std::conj(a[j][k]);
    return splnc::CoherencyMatrix::from_matrix(m);
}

struct Problem {
    splnc::FeatureMatrix x;
    std::vector<int> y;
    std::vector<std::vector<double>> rows;
};

// Two noisy Gaussian blobs; `spread` controls the overlap.
inline Problem random_problem(std::mt19937_64& g, std::size_t n, std::size_t dim, double spread) {
    std::normal_distribution<double> nd;
    Problem p;
    for (std::size_t i = 0; i < n; ++i) {
        const int label = i % 2 == 0 ? 1 : -1;
        std::vector<double> r(dim);
        for (auto& v : r) v = label * 1.0 + spread * nd(g);
        p.x.push_row(r);
        p.y.push_back(label);
        p.rows.push_back(r);
    }
    return p;
}

inline std::vector<std::vector<double>> kernel_matrix(const Problem& p, double gamma) {
    std::vector<std::vector<double>> k(p.rows.size(), std::vector<double>(p.rows.size()));
    for (std::size_t i = 0; i < p.rows.size(); ++i)
        for (std::size_t j = 0; j < p.rows.size(); ++j) {
            double d = 0.0;
            for (std::size_t t = 0; t < p.rows[i].size(); ++t) d += (p.rows[i][t] - p.rows[j][t]) * (p.rows[i][t] - p.rows[j][t]);
            k[i][j] = std::exp(-gamma * d);
        }
    return k;
}

}  // namespace testing_support
