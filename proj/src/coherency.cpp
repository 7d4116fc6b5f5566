#include "splnc/coherency.hpp"

#include <cmath>

namespace splnc {

bool CoherencyMatrix::is_finite() const {
    auto fin = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return std::isfinite(t11) && std::isfinite(t22) && std::isfinite(t33) && fin(t12) && fin(t13) &&
           fin(t23);
}

Matrix3c CoherencyMatrix::to_matrix() const {
    Matrix3c m{};
    m[0][0] = t11;
    m[1][1] = t22;
    m[2][2] = t33;
    m[0][1] = t12;
    m[0][2] = t13;
    m[1][2] = t23;
    m[1][0] = std::conj(t12);
    m[2][0] = std::conj(t13);
    m[2][1] = std::conj(t23);
    return m;
}

CoherencyMatrix CoherencyMatrix::from_matrix(const Matrix3c& m) {
    return CoherencyMatrix{m[0][0].real(), m[1][1].real(), m[2][2].real(), m[0][1], m[0][2], m[1][2]};
}

CoherencyMatrix& CoherencyMatrix::operator+=(const CoherencyMatrix& o) {
    t11 += o.t11;
    t22 += o.t22;
    t33 += o.t33;
    t12 += o.t12;
    t13 += o.t13;
    t23 += o.t23;
    return *this;
}

CoherencyMatrix& CoherencyMatrix::operator*=(double s) {
    t11 *= s;
    t22 *= s;
    t33 *= s;
    t12 *= s;
    t13 *= s;
    t23 *= s;
    return *this;
}

Matrix3c mat_mul(const Matrix3c& a, const Matrix3c& b) {
    Matrix3c c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx s{};
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            c[i][j] = s;
        }
    return c;
}

Matrix3c adjoint(const Matrix3c& a) {
    Matrix3c c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = std::conj(a[j][i]);
    return c;
}

cplx mat_trace(const Matrix3c& a) { return a[0][0] + a[1][1] + a[2][2]; }

double frobenius_norm(const Matrix3c& a) {
    double s = 0.0;
    for (const auto& row : a)
        for (const auto& z : row) s += std::norm(z);
    return std::sqrt(s);
}

Matrix3c mat_sub(const Matrix3c& a, const Matrix3c& b) {
    Matrix3c c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] - b[i][j];
    return c;
}

double hermitian_det(const CoherencyMatrix& t) {
    // a b c / b* d e / c* e* f expanded; every term is real for Hermitian input.
    const double a = t.t11, d = t.t22, f = t.t33;
    const cplx b = t.t12, c = t.t13, e = t.t23;
    return a * d * f + 2.0 * (b * e * std::conj(c)).real() - a * std::norm(e) - d * std::norm(c) -
           f * std::norm(b);
}

Matrix3c hermitian_inverse(const CoherencyMatrix& t) {
    const Matrix3c m = t.to_matrix();
    Matrix3c adj{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
            const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            adj[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    const double det = hermitian_det(t);
    for (auto& row : adj)
        for (auto& z : row) z /= det;
    return adj;
}

}  // namespace splnc
