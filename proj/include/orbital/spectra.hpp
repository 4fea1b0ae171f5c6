#pragma once
#include <optional>

#include "orbital/operators.hpp"

namespace orbital {

// Open interval (a, b).  For the ensembles here endpoints are almost surely
// not eigenvalues; counts exclude ties deterministically.
struct Interval {
    double a;
    double b;

    Interval(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b)) throw std::invalid_argument("Interval: need a < b");
    }
    double length() const { return b - a; }
    bool contains(double x) const { return a < x && x < b; }
};

struct Spectrum {
    Eigen::VectorXd eigenvalues;  // sorted ascending
    std::optional<Matrix> eigenvectors;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
};

// Full spectrum of a Hermitian matrix (Eigen selfadjoint solver; real path
// when the imaginary part is exactly zero).
Spectrum eig_hermitian(const Matrix& M, bool with_vectors = false);
Spectrum eig_hermitian(const BlockHamiltonian& H, bool with_vectors = false);

// Eigenvalues only, real symmetric input.
Eigen::VectorXd eigvals_real_sym(const RealMatrix& M);

int count_in_interval(const Spectrum& s, const Interval& I);
int count_in_interval(const Eigen::VectorXd& sorted_eigenvalues, const Interval& I);

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// P_x (H - lambda)^{-1} P_y^*, by dense factorization of H - lambda and a
// solve for the block columns of P_y^*.
Matrix resolvent_block(const BlockHamiltonian& H, double lambda, int x, int y);

// Full resolvent (H - lambda)^{-1}; used when all blocks are needed.
Matrix resolvent_full(const BlockHamiltonian& H, double lambda);

// ||(H - lambda)^{-1}(x, y) v||^s for 0 < s < 1.
double fractional_moment_sample(const BlockHamiltonian& H, double lambda, int x, int y,
                                const Vector& v, double s);

double operator_norm(const Matrix& M);

// Weak interlacing lambda_i(before) <= lambda_i(after) <= lambda_{i+1}(before)
// (rank-one update with tau > 0), with relative tolerance 1e-9.
bool check_interlacing(const Spectrum& before, const Spectrum& after);

// H compressed to the orthogonal complement of the embedded vector P_j^* v:
// the tau -> infinity limit of the rank-one perturbation.
Matrix compress_orthogonal(const BlockHamiltonian& H, int j, const Vector& v);

}  // namespace orbital
