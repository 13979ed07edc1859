#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <vector>

namespace bolza {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Column vector from a brace list, e.g. vec({1.0, -2.0}).
inline Vector vec(std::initializer_list<double> values) {
    Vector out(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) out(i++) = v;
    return out;
}

/// 1x1 matrix holding `v`.
inline Matrix scalarMatrix(double v) { return Matrix::Constant(1, 1, v); }

/// Largest absolute entry, 0 for empty objects.
template <typename Derived>
double infNorm(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool isSymmetric(const Matrix& m, double tol);

/// Symmetric and smallest eigenvalue >= -tol * max(1, |m|).
bool isSymmetricPsd(const Matrix& m, double tol);

/// Symmetric and smallest eigenvalue > tol * max(1, |m|).
bool isPositiveDefinite(const Matrix& m, double tol);

/// Orthonormal basis (as columns) of the null space of a symmetric PSD matrix.
Matrix symmetricKernelBasis(const Matrix& m, double tol);

/// Orthonormal basis (as columns) of the null space of an arbitrary matrix.
Matrix kernelBasis(const Matrix& m, double tol);

/// Orthonormal basis (as columns) of the column space of `m`.
Matrix rangeBasis(const Matrix& m, double tol);

int numericalRank(const Matrix& m, double tol);

}  // namespace bolza
