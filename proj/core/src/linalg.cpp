#include "bolza/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>

namespace bolza {

namespace {

double scaleOf(const Matrix& m) { return std::max(1.0, infNorm(m)); }

}  // namespace

bool isSymmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return infNorm(m - m.transpose()) <= tol * scaleOf(m);
}

bool isSymmetricPsd(const Matrix& m, double tol) {
    if (!isSymmetric(m, std::max(tol, 1e-12))) return false;
    if (m.size() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff() >= -tol * scaleOf(m);
}

bool isPositiveDefinite(const Matrix& m, double tol) {
    if (!isSymmetric(m, std::max(tol, 1e-12))) return false;
    if (m.size() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff() > tol * scaleOf(m);
}

Matrix symmetricKernelBasis(const Matrix& m, double tol) {
    const Eigen::Index n = m.rows();
    if (n == 0) return Matrix(0, 0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
    const double cut = tol * scaleOf(m);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(eig.eigenvalues()(i)) <= cut) idx.push_back(i);
    Matrix basis(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = eig.eigenvectors().col(idx[k]);
    return basis;
}

Matrix kernelBasis(const Matrix& m, double tol) {
    const Eigen::Index n = m.cols();
    if (m.rows() == 0) return Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const double cut = tol * scaleOf(m);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cut) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

Matrix rangeBasis(const Matrix& m, double tol) {
    if (m.cols() == 0) return Matrix(m.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
    const double cut = tol * scaleOf(m);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cut) ++rank;
    return svd.matrixU().leftCols(rank);
}

int numericalRank(const Matrix& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const double cut = tol * scaleOf(m);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cut) ++rank;
    return rank;
}

}  // namespace bolza
