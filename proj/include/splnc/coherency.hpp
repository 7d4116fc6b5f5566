#pragma once

#include <array>
#include <complex>

namespace splnc {

using cplx = std::complex<double>;
using Matrix3c = std::array<std::array<cplx, 3>, 3>;

/// 3x3 Hermitian coherency matrix stored as its upper triangle.
///
/// Diagonal terms are real powers; the three off-diagonal terms are the
/// complex entries above the diagonal. The lower triangle is implied by
/// conjugate symmetry, so any value of this type is Hermitian.
struct CoherencyMatrix {
    double t11 = 0.0;
    double t22 = 0.0;
    double t33 = 0.0;
    cplx t12{};
    cplx t13{};
    cplx t23{};

    double trace() const { return t11 + t22 + t33; }
    bool is_finite() const;

    Matrix3c to_matrix() const;
    /// Reads the upper triangle of `m`; the lower triangle is ignored.
    static CoherencyMatrix from_matrix(const Matrix3c& m);

    static CoherencyMatrix diagonal(double a, double b, double c) {
        return CoherencyMatrix{a, b, c, {}, {}, {}};
    }
    static CoherencyMatrix identity() { return diagonal(1.0, 1.0, 1.0); }

    CoherencyMatrix& operator+=(const CoherencyMatrix& o);
    CoherencyMatrix& operator*=(double s);
    friend CoherencyMatrix operator+(CoherencyMatrix a, const CoherencyMatrix& b) { return a += b; }
    friend CoherencyMatrix operator*(double s, CoherencyMatrix a) { return a *= s; }
    friend bool operator==(const CoherencyMatrix&, const CoherencyMatrix&) = default;
};

// Small dense helpers on full 3x3 complex matrices.
Matrix3c mat_mul(const Matrix3c& a, const Matrix3c& b);
Matrix3c adjoint(const Matrix3c& a);
cplx mat_trace(const Matrix3c& a);
double frobenius_norm(const Matrix3c& a);
Matrix3c mat_sub(const Matrix3c& a, const Matrix3c& b);

/// Determinant of a Hermitian matrix (real up to rounding; imaginary part dropped).
double hermitian_det(const CoherencyMatrix& t);
/// Inverse through the adjugate. Caller checks the determinant first.
Matrix3c hermitian_inverse(const CoherencyMatrix& t);

}  // namespace splnc
