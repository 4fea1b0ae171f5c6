#pragma once
#include <Eigen/Dense>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "orbital/rng.hpp"

namespace orbital {

using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;

enum class SymmetryClass { orthogonal, unitary };

using LatticeVector = std::vector<int>;

// Variance profile psi(r) for band matrices.
//  - sharpCutoff: psi(r) = 1/W for |r| < W, 0 otherwise (d = 1).
//  - scaledProfile: psi(r) = phi(r/W) / W^d for an even nonnegative phi.
//  - susyKernel: psi(r) = (-W^2 Laplacian + 1)^{-1}(0, r) on the infinite
//    lattice Z^d, evaluated by Fourier quadrature and cached.
class ShapeFunction {
  public:
    enum class Kind { sharp_cutoff, scaled_profile, susy_kernel };

    static ShapeFunction sharp_cutoff(int W);
    static ShapeFunction scaled_profile(std::function<double(const std::vector<double>&)> phi,
                                        int W, int d);
    static ShapeFunction susy_kernel(int W, int d);

    double operator()(const LatticeVector& r) const;
    double operator()(int r) const { return (*this)(LatticeVector{r}); }

    Kind kind() const { return kind_; }
    int bandwidth() const { return W_; }
    int dim() const { return d_; }

  private:
    ShapeFunction(Kind kind, int W, int d) : kind_(kind), W_(W), d_(d) {}

    Kind kind_;
    int W_;
    int d_;
    std::function<double(const std::vector<double>&)> phi_;
    mutable std::map<LatticeVector, double> cache_;
};

// Lattice Green function G_W(r) = (-W^2 Laplacian + 1)^{-1}(0, r) on Z^d,
// computed by trapezoid quadrature over the Brillouin zone.  The grid starts
// at max(64 W, minNodes) points per dimension and doubles until two
// successive resolutions agree to `tol`; failure to converge throws.
double susy_kernel_value(int W, int d, const LatticeVector& r,
                         int min_nodes = 0, double tol = 1e-8);

// GOE draw, density prop. to exp(-N/4 tr V^2): real symmetric, Var M_ii = 2/N,
// Var M_ij = 1/N.  Built as (X + X^T)/sqrt(2N) with X iid standard normal.
RealMatrix sample_goe(int N, RngStream& rng);

// GUE draw, density prop. to exp(-N/2 tr V^2): Hermitian, Var M_ii = 1/N,
// E|M_ij|^2 = 1/N.  Built as (X + X^*)/sqrt(2N) with E|X_ij|^2 = 1.
Matrix sample_gue(int N, RngStream& rng);

// iid complex Gaussian entries with E|X_ij|^2 = variance_per_entry
// (real and imaginary parts independent, equal variance).
Matrix sample_complex_gaussian_matrix(int rows, int cols, double variance_per_entry,
                                      RngStream& rng);

// iid real Gaussian entries with Var X_ij = variance_per_entry.
RealMatrix sample_real_gaussian_matrix(int rows, int cols, double variance_per_entry,
                                       RngStream& rng);

}  // namespace orbital
