#include <doctest.h>

#include "orbital/repformula.hpp"

using namespace orbital;

namespace {

BlockHamiltonian deformed(const std::vector<int>& blocks, SymmetryClass sym, double scale,
                          std::uint64_t seed, Matrix* h0_out = nullptr) {
    DeformedBlockSpec spec;
    spec.block_sizes = blocks;
    spec.symmetry = sym;
    int dim = 0;
    for (int b : blocks) dim += b;
    RngStream h0rng(seed, 999);
    spec.H0 = sym == SymmetryClass::orthogonal
                  ? Matrix(scale * sample_goe(dim, h0rng).cast<std::complex<double>>())
                  : Matrix(scale * sample_gue(dim, h0rng));
    if (h0_out) *h0_out = spec.H0;
    RngStream rng(seed, 0);
    return build_deformed_block(spec, rng);
}

}  // namespace

TEST_CASE("schur pieces take A from the deformation and reconstruct C") {
    Matrix H0;
    BlockHamiltonian H = deformed({3, 2, 2}, SymmetryClass::unitary, 0.4, 41, &H0);
    SchurData sd = schur_pieces(H, H0, 1);
    CHECK((sd.A - H0.block(3, 3, 2, 2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(sd.B.rows() == 5);
    CHECK(sd.B.cols() == 2);
    // B stacks the complementary rows of H's column block
    Matrix B_expect(5, 2);
    B_expect.topRows(3) = H.matrix.block(0, 3, 3, 2);
    B_expect.bottomRows(2) = H.matrix.block(5, 3, 2, 2);
    CHECK((sd.B - B_expect).cwiseAbs().maxCoeff() == 0.0);
    // cached eigendecomposition: compare B^* (C - 5)^{-1} B computed directly
    // and through (c_eigs, Bt)
    Matrix R = (sd.C - Matrix::Identity(5, 5) * 5.0).inverse();
    Eigen::VectorXd inv = (sd.c_eigs.array() - 5.0).inverse();
    Matrix lhs = sd.B.adjoint() * R * sd.B;
    Matrix rhs = sd.Bt.adjoint() * inv.asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                 sd.Bt;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("a_matrix against a direct dense evaluation") {
    Matrix H0;
    BlockHamiltonian H = deformed({2, 3}, SymmetryClass::orthogonal, 0.5, 42, &H0);
    SchurData sd = schur_pieces(H, H0, 0);
    const double lambda = 0.3, eta = 0.17, t = -0.8;
    Matrix I3 = Matrix::Identity(3, 3);
    Matrix direct = -lambda * Matrix::Identity(2, 2) + sd.A -
                    sd.B.adjoint() * (sd.C - lambda * I3 + t * eta * I3) *
                        ((sd.C - lambda * I3) * (sd.C - lambda * I3) + eta * eta * I3).inverse() *
                        sd.B;
    Matrix got = a_matrix(sd, lambda, eta, t);
    CHECK((got - direct).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((got - got.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(got.imag().cwiseAbs().maxCoeff() == 0.0);  // orthogonal case stays real
}

TEST_CASE("t-slope of a_matrix is negative semi-definite") {
    Matrix H0;
    BlockHamiltonian H = deformed({3, 3}, SymmetryClass::unitary, 0.4, 43, &H0);
    SchurData sd = schur_pieces(H, H0, 1);
    Matrix Y = a_matrix(sd, 0.1, 0.2, 1.0) - a_matrix(sd, 0.1, 0.2, 0.0);
    Spectrum s = eig_hermitian(Y);
    CHECK(s.eigenvalues.maxCoeff() <= 1e-10);
}

TEST_CASE("poisson identity holds for negative semi-definite Y") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        RngStream rng(500 + seed, 0);
        Matrix X = sample_gue(6, rng);
        Matrix B = sample_complex_gaussian_matrix(6, 6, 0.5, rng);
        Matrix Y = Matrix(-(B * B.adjoint()));
        for (double eta : {0.1, 0.5, 1.0}) {
            auto [lhs, rhs] = poisson_identity_check(X, Y, eta);
            CHECK(std::abs(lhs - rhs) < 1e-6);
        }
    }
    // Y with a positive eigenvalue is rejected
    Matrix X = Matrix::Zero(2, 2);
    Matrix Ypos = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(poisson_identity_check(X, Ypos, 0.5), std::invalid_argument);
}

TEST_CASE("ave quadrature against closed-form integrals") {
    QuadratureSpec quad{0, 801, 801, {0.3}};
    quad.lambda_nodes = 401;
    const double eta = 0.3;
    Interval I(0.0, 1.0);

    SUBCASE("constant integrand") {
        double v = ave_quadrature([](double, double, double) { return 1.0; }, I, eta, quad);
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("separable integrand with known value") {
        // lambda has mean 1/2 on I; 1/(1+t^2) averages to 1/2 under the
        // Cauchy weight; 1/(1+(xi/eta)^2) averages to 1/4 under the xi weight
        auto f = [eta](double lambda, double t, double xi) {
            return lambda / (1 + t * t) / (1 + (xi / eta) * (xi / eta));
        };
        double v = ave_quadrature(f, I, eta, quad);
        CHECK(v == doctest::Approx(1.0 / 16).epsilon(2e-4));
    }
}

TEST_CASE("perron-stieltjes count against explicit lambda quadrature") {
    BlockHamiltonian H = deformed({2, 2}, SymmetryClass::orthogonal, 0.6, 44);
    Interval I(-0.8, 0.9);
    const double eta = 0.07;
    // oracle: trapezoid over lambda of (1/pi) Im tr (H - lambda - i eta)^{-1}
    const int n = 20000;
    double acc = 0;
    Matrix Id = Matrix::Identity(4, 4);
    for (int i = 0; i <= n; ++i) {
        double lambda = I.a + I.length() * i / n;
        std::complex<double> z(lambda, eta);
        Matrix R = (H.matrix - z * Id).inverse();
        double im = R.trace().imag();
        acc += (i == 0 || i == n ? 0.5 : 1.0) * im;
    }
    double oracle = acc / M_PI * I.length() / n;
    CHECK(perron_stieltjes_count(H, I, eta) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("representation count converges to the exact count along the schedule") {
    Matrix H0;
    BlockHamiltonian H = deformed({3, 3}, SymmetryClass::orthogonal, 0.4, 45, &H0);
    Interval I(-1.0, 1.0);
    QuadratureSpec quad;
    auto approx = representation_count(H, H0, I, quad);
    int exact = count_in_interval(eig_hermitian(H), I);
    REQUIRE(approx.size() == 3);
    // errors shrink along the eta schedule and the finest is close
    CHECK(std::abs(approx[2] - exact) < 0.25);
    CHECK(std::abs(approx[2] - exact) <= std::abs(approx[0] - exact) + 0.05);
}
