#include "orbital/repformula.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "orbital/mc.hpp"

namespace orbital {

SchurData schur_pieces(const BlockHamiltonian& H, const Matrix& H0, int j) {
    if (H0.rows() != H.dim() || H0.cols() != H.dim())
        throw std::invalid_argument("schur_pieces: H0 dimension mismatch");
    if (j < 0 || j >= H.num_blocks()) throw std::invalid_argument("schur_pieces: bad block index");
    const int n = H.dim();
    const int nj = H.block_size(j);
    const int off = H.offsets[j];

    std::vector<int> comp;
    comp.reserve(n - nj);
    for (int i = 0; i < n; ++i)
        if (i < off || i >= off + nj) comp.push_back(i);

    SchurData sd;
    sd.A = H0.block(off, off, nj, nj);
    sd.B = Matrix(n - nj, nj);
    sd.C = Matrix(n - nj, n - nj);
    for (int r = 0; r < n - nj; ++r) {
        for (int c = 0; c < nj; ++c) sd.B(r, c) = H.matrix(comp[r], off + c);
        for (int c = 0; c < n - nj; ++c) sd.C(r, c) = H.matrix(comp[r], comp[c]);
    }
    sd.real = H.is_real() && H0.imag().cwiseAbs().maxCoeff() == 0.0;

    if (sd.real) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(sd.C.real());
        sd.c_eigs = es.eigenvalues();
        sd.Bt = es.eigenvectors().transpose().cast<std::complex<double>>() * sd.B;
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> es(sd.C);
        sd.c_eigs = es.eigenvalues();
        sd.Bt = es.eigenvectors().adjoint() * sd.B;
    }
    return sd;
}

Matrix a_matrix(const SchurData& sd, double lambda, double eta, double t) {
    if (!(eta > 0)) throw std::invalid_argument("a_matrix: eta must be positive");
    const int nj = static_cast<int>(sd.A.rows());
    Eigen::VectorXd f(sd.c_eigs.size());
    for (int i = 0; i < f.size(); ++i) {
        double c = sd.c_eigs(i) - lambda;
        f(i) = (c + t * eta) / (c * c + eta * eta);
    }
    Matrix m = sd.A - sd.Bt.adjoint() * f.asDiagonal() * sd.Bt;
    m.diagonal().array() -= lambda;
    return (m + Matrix(m.adjoint())) / 2.0;
}

namespace {

double im_trace_hermitian_shift(const Matrix& M, double eta) {
    // Im tr(M - i eta)^{-1} for Hermitian M
    Spectrum s = eig_hermitian(M);
    double out = 0.0;
    for (int i = 0; i < s.dim(); ++i) {
        double mu = s.eigenvalues(i);
        out += eta / (mu * mu + eta * eta);
    }
    return out;
}

}  // namespace

std::pair<double, double> poisson_identity_check(const Matrix& X, const Matrix& Y, double eta,
                                                 const QuadratureSpec& quad) {
    if (!(eta > 0)) throw std::invalid_argument("poisson_identity_check: eta must be positive");
    if (X.rows() != Y.rows() || X.cols() != Y.cols())
        throw std::invalid_argument("poisson_identity_check: dimension mismatch");
    Spectrum ys = eig_hermitian(Y);
    if (ys.eigenvalues.maxCoeff() > 1e-10)
        throw std::invalid_argument("poisson_identity_check: Y must be negative semi-definite");

    const int n = static_cast<int>(X.rows());
    Matrix Z = X + std::complex<double>(0, 1) * Y;
    Z.diagonal().array() -= std::complex<double>(0, eta);
    Eigen::PartialPivLU<Matrix> lu(Z);
    double lhs = lu.solve(Matrix::Identity(n, n)).trace().imag();

    const double half_pi = std::numbers::pi / 2.0;
    auto rhs_at = [&](int nodes) {
        std::vector<double> terms(nodes);
        for (int i = 0; i < nodes; ++i) {
            double theta = -half_pi + (i + 0.5) * std::numbers::pi / nodes;
            double t = std::tan(theta);
            terms[i] = im_trace_hermitian_shift(X + t * Y, eta) / nodes;
        }
        return tree_sum(terms);
    };
    int nodes = std::max(quad.t_nodes, 64);
    double rhs = rhs_at(nodes);
    for (int iter = 0; iter < 8; ++iter) {
        nodes *= 2;
        double next = rhs_at(nodes);
        if (std::abs(next - rhs) < 1e-7) return {lhs, next};
        rhs = next;
    }
    return {lhs, rhs};
}

namespace {

int default_lambda_nodes(const QuadratureSpec& quad, double length, double eta) {
    if (quad.lambda_nodes > 0) return quad.lambda_nodes;
    return std::max(101, static_cast<int>(std::ceil(length / eta)));
}

}  // namespace

double ave_quadrature(const std::function<double(double, double, double)>& f, const Interval& I,
                      double eta, const QuadratureSpec& quad) {
    if (!(eta > 0)) throw std::invalid_argument("ave_quadrature: eta must be positive");
    const int nl = default_lambda_nodes(quad, I.length(), eta);
    const int nt = quad.t_nodes;
    const int nx = quad.xi_nodes;
    const double half_pi = std::numbers::pi / 2.0;

    std::vector<double> lam_terms(nl);
    for (int il = 0; il < nl; ++il) {
        double lambda = I.a + (il + 0.5) * I.length() / nl;
        std::vector<double> t_terms(nt);
        for (int it = 0; it < nt; ++it) {
            double theta = -half_pi + (it + 0.5) * std::numbers::pi / nt;
            double t = std::tan(theta);
            std::vector<double> x_terms(nx);
            for (int ix = 0; ix < nx; ++ix) {
                double phi = (ix + 0.5) * half_pi / nx;
                double xi = eta * std::tan(phi);
                double w = 2.0 * std::sin(phi) * std::sin(phi) / nx;
                x_terms[ix] = w * f(lambda, t, xi);
            }
            t_terms[it] = tree_sum(x_terms) / nt;
        }
        lam_terms[il] = tree_sum(t_terms) / nl;
    }
    return tree_sum(lam_terms);
}

std::vector<double> representation_count(const BlockHamiltonian& H, const Matrix& H0, Interval I,
                                         const QuadratureSpec& quad) {
    const int k = H.num_blocks();
    Spectrum full = eig_hermitian(H);
    const double scale = 1.0 + full.eigenvalues.cwiseAbs().maxCoeff();

    // nudge endpoints off eigenvalues (generic position)
    for (int guard = 0; guard < 3; ++guard) {
        bool clash = false;
        for (int i = 0; i < full.dim(); ++i) {
            double ev = full.eigenvalues(i);
            if (std::abs(ev - I.a) < 1e-9 * scale || std::abs(ev - I.b) < 1e-9 * scale) clash = true;
        }
        if (!clash) break;
        I = Interval(I.a - 1e-9 * scale, I.b + 1e-9 * scale);
    }

    std::vector<SchurData> sds;
    std::vector<Matrix> V;
    for (int j = 0; j < k; ++j) {
        sds.push_back(schur_pieces(H, H0, j));
        const int nj = H.block_size(j);
        V.push_back(Matrix(H.block(j, j)) - H0.block(H.offsets[j], H.offsets[j], nj, nj));
    }

    const double half_pi = std::numbers::pi / 2.0;
    const int nt = quad.t_nodes;
    const int nx = quad.xi_nodes;

    // xi nodes and weights are shared between all (lambda, t) points
    std::vector<double> xi(nx), wxi(nx);
    for (int ix = 0; ix < nx; ++ix) {
        double phi = (ix + 0.5) * half_pi / nx;
        wxi[ix] = 2.0 * std::sin(phi) * std::sin(phi) / nx;
    }

    std::vector<double> out;
    for (double eta : quad.eta_schedule) {
        const int nl = default_lambda_nodes(quad, I.length(), eta);
        for (int ix = 0; ix < nx; ++ix) {
            double phi = (ix + 0.5) * half_pi / nx;
            xi[ix] = eta * std::tan(phi);
        }
        std::vector<double> lam_terms(nl);
#pragma omp parallel for schedule(dynamic)
        for (int il = 0; il < nl; ++il) {
            double lambda = I.a + (il + 0.5) * I.length() / nl;
            std::vector<double> t_terms(nt);
            for (int it = 0; it < nt; ++it) {
                double theta = -half_pi + (it + 0.5) * std::numbers::pi / nt;
                double t = std::tan(theta);
                double blocks_sum = 0.0;
                for (int j = 0; j < k; ++j) {
                    Matrix M = V[j] + a_matrix(sds[j], lambda, eta, t);
                    Eigen::VectorXd mu = eig_hermitian(M).eigenvalues.cwiseAbs();
                    std::sort(mu.data(), mu.data() + mu.size());
                    // count in (-xi, xi) for every xi from the sorted |mu|
                    for (int ix = 0; ix < nx; ++ix) {
                        int cnt = static_cast<int>(
                            std::lower_bound(mu.data(), mu.data() + mu.size(), xi[ix]) - mu.data());
                        if (cnt > 0) blocks_sum += wxi[ix] * cnt / (2.0 * xi[ix]);
                    }
                }
                t_terms[it] = blocks_sum / nt;
            }
            lam_terms[il] = tree_sum(t_terms) / nl;
        }
        out.push_back(I.length() * tree_sum(lam_terms));
    }
    return out;
}

double perron_stieltjes_count(const Eigen::VectorXd& ev, const Interval& I, double eta) {
    if (!(eta > 0)) throw std::invalid_argument("perron_stieltjes_count: eta must be positive");
    double out = 0.0;
    for (int i = 0; i < ev.size(); ++i)
        out += (std::atan((I.b - ev(i)) / eta) - std::atan((I.a - ev(i)) / eta)) / std::numbers::pi;
    return out;
}

double perron_stieltjes_count(const BlockHamiltonian& H, const Interval& I, double eta) {
    return perron_stieltjes_count(eig_hermitian(H).eigenvalues, I, eta);
}

}  // namespace orbital
