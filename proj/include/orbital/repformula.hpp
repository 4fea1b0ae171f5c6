#pragma once
#include "orbital/spectra.hpp"

namespace orbital {

// Schur pieces of a block Hamiltonian relative to block j:
//   A = P_j H0 P_j*,  B = Q_j H P_j*,  C = Q_j H Q_j*
// (A is taken from the deformation H0, B and C from the full H).  The
// eigendecomposition of C is cached so that the A(j, lambda, eta, t) family
// costs one small matrix product per parameter point.
struct SchurData {
    Matrix A;
    Matrix B;
    Matrix C;
    bool real = false;

    Eigen::VectorXd c_eigs;
    Matrix Bt;  // U^* B with C = U diag(c_eigs) U^*
};

SchurData schur_pieces(const BlockHamiltonian& H, const Matrix& H0, int j);

// A(j, lambda, eta, t) = -lambda + A - B^* (C - lambda + t eta) ((C - lambda)^2 + eta^2)^{-1} B.
// Exactly Hermitian; exactly real when the pieces are real.
Matrix a_matrix(const SchurData& sd, double lambda, double eta, double t);

// Quadrature grids for the triple average over (lambda, t, xi) at smoothing
// eta, realized through the substitutions t = tan(theta) and xi = eta tan(phi)
// with uniform composite midpoint rules.  Each weight system sums to 1.
struct QuadratureSpec {
    int lambda_nodes = 0;  // 0: default max(101, ceil(|I| / eta))
    int t_nodes = 201;
    int xi_nodes = 201;
    std::vector<double> eta_schedule{0.1, 0.05, 0.025};
};

// Im tr(X + iY - i eta)^{-1} (lhs) and its Poisson t-average
// int dt / (pi (1 + t^2)) Im tr(X + tY - i eta)^{-1} (rhs), with the t-grid
// doubled until the rhs is stable to 1e-7.  Requires Y negative semi-definite.
std::pair<double, double> poisson_identity_check(const Matrix& X, const Matrix& Y, double eta,
                                                 const QuadratureSpec& quad = {});

// Triple-average quadrature of a bounded integrand over (lambda in I, t, xi).
double ave_quadrature(const std::function<double(double lambda, double t, double xi)>& f,
                      const Interval& I, double eta, const QuadratureSpec& quad);

// For each eta in the schedule, the quadrature value of
//   |I| sum_j Ave (1/(2 xi)) N(V(j) + A(j, lambda, eta, t), (-xi, xi)),
// which converges to the exact eigenvalue count N(H, I) as eta -> 0.
// H must be a realization of the deformed block model with deformation H0.
std::vector<double> representation_count(const BlockHamiltonian& H, const Matrix& H0,
                                         Interval I, const QuadratureSpec& quad);

// eta-smoothed Perron-Stieltjes count int_I dlambda/pi Im tr(H - lambda - i eta)^{-1},
// with the lambda integral taken in closed form from the spectrum.
double perron_stieltjes_count(const BlockHamiltonian& H, const Interval& I, double eta);
double perron_stieltjes_count(const Eigen::VectorXd& eigenvalues, const Interval& I, double eta);

}  // namespace orbital
