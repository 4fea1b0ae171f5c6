#include "orbital/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace orbital {

Eigen::VectorXd eigvals_real_sym(const RealMatrix& M) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Spectrum eig_hermitian(const Matrix& M, bool with_vectors) {
    const double scale = M.cwiseAbs().maxCoeff();
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + scale))
        throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
    Spectrum s;
    const bool real = M.imag().cwiseAbs().maxCoeff() == 0.0;
    if (real) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(
            M.real(), with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
        s.eigenvalues = es.eigenvalues();
        if (with_vectors) s.eigenvectors = es.eigenvectors().cast<std::complex<double>>();
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            M, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
        s.eigenvalues = es.eigenvalues();
        if (with_vectors) s.eigenvectors = es.eigenvectors();
    }
    return s;
}

Spectrum eig_hermitian(const BlockHamiltonian& H, bool with_vectors) {
    return eig_hermitian(H.matrix, with_vectors);
}

int count_in_interval(const Eigen::VectorXd& ev, const Interval& I) {
    const double* begin = ev.data();
    const double* end = ev.data() + ev.size();
    // open interval: strict inequalities on both sides
    return static_cast<int>(std::lower_bound(begin, end, I.b) -
                            std::upper_bound(begin, end, I.a));
}

int count_in_interval(const Spectrum& s, const Interval& I) {
    return count_in_interval(s.eigenvalues, I);
}

namespace {

Eigen::PartialPivLU<Matrix> shifted_lu(const BlockHamiltonian& H, double lambda) {
    Matrix A = H.matrix;
    A.diagonal().array() -= lambda;
    Eigen::PartialPivLU<Matrix> lu(A);
    // singularity guard: condition estimate from the LU pivot spread
    Eigen::ArrayXd pivots = lu.matrixLU().diagonal().cwiseAbs().array();
    double pmin = pivots.minCoeff(), pmax = pivots.maxCoeff();
    if (!std::isfinite(pmax) || pmin <= 1e-14 * pmax)
        throw SingularityError("resolvent: H - lambda numerically singular");
    return lu;
}

}  // namespace

Matrix resolvent_block(const BlockHamiltonian& H, double lambda, int x, int y) {
    if (x < 0 || x >= H.num_blocks() || y < 0 || y >= H.num_blocks())
        throw std::invalid_argument("resolvent_block: bad block index");
    auto lu = shifted_lu(H, lambda);
    Matrix rhs = Matrix::Zero(H.dim(), H.block_size(y));
    rhs.block(H.offsets[y], 0, H.block_size(y), H.block_size(y)).setIdentity();
    Matrix cols = lu.solve(rhs);
    if (!cols.allFinite()) throw SingularityError("resolvent_block: solve produced non-finite values");
    return cols.block(H.offsets[x], 0, H.block_size(x), H.block_size(y));
}

Matrix resolvent_full(const BlockHamiltonian& H, double lambda) {
    auto lu = shifted_lu(H, lambda);
    Matrix inv = lu.solve(Matrix::Identity(H.dim(), H.dim()));
    if (!inv.allFinite()) throw SingularityError("resolvent_full: solve produced non-finite values");
    return inv;
}

double fractional_moment_sample(const BlockHamiltonian& H, double lambda, int x, int y,
                                const Vector& v, double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("fractional_moment_sample: need 0 < s < 1");
    if (std::abs(v.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("fractional_moment_sample: v must be a unit vector");
    Matrix G = resolvent_block(H, lambda, x, y);
    return std::pow((G * v).norm(), s);
}

double operator_norm(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

bool check_interlacing(const Spectrum& before, const Spectrum& after) {
    if (before.dim() != after.dim())
        throw std::invalid_argument("check_interlacing: dimension mismatch");
    const int n = before.dim();
    double scale = std::max(before.eigenvalues.cwiseAbs().maxCoeff(),
                            after.eigenvalues.cwiseAbs().maxCoeff());
    const double tol = 1e-9 * (1.0 + scale);
    for (int i = 0; i < n; ++i) {
        if (after.eigenvalues(i) < before.eigenvalues(i) - tol) return false;
        if (i + 1 < n && after.eigenvalues(i) > before.eigenvalues(i + 1) + tol) return false;
    }
    return true;
}

Matrix compress_orthogonal(const BlockHamiltonian& H, int j, const Vector& v) {
    if (j < 0 || j >= H.num_blocks()) throw std::invalid_argument("compress_orthogonal: bad block");
    if (v.size() != H.block_size(j))
        throw std::invalid_argument("compress_orthogonal: vector size mismatch");
    const int n = H.dim();
    Vector u = Vector::Zero(n);
    u.segment(H.offsets[j], H.block_size(j)) = v.normalized();
    // Householder basis of u^perp: columns 1..n-1 of the reflector mapping e_1 to u
    Matrix Q = Matrix::Identity(n, n);
    Vector w = u;
    w(0) -= (std::abs(u(0)) > 0 ? u(0) / std::abs(u(0)) : 1.0);
    double wn = w.norm();
    if (wn > 1e-14) {
        w /= wn;
        Q -= 2.0 * (w * w.adjoint());
        if (std::abs(u(0)) > 0) Q *= u(0) / std::abs(u(0));
    }
    Matrix basis = Q.rightCols(n - 1);
    Matrix K = basis.adjoint() * H.matrix * basis;
    return (K + Matrix(K.adjoint())) / 2.0;
}

}  // namespace orbital
