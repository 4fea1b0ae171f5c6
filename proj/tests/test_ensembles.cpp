#include <doctest.h>

#include "orbital/ensembles.hpp"

using namespace orbital;

TEST_CASE("rng streams are reproducible and decorrelated") {
    RngStream a(123, 5), b(123, 5), c(123, 6);
    for (int i = 0; i < 10; ++i) CHECK(a.normal() == b.normal());
    // distinct streams give a different sequence
    RngStream a2(123, 5);
    bool all_equal = true;
    for (int i = 0; i < 10; ++i) all_equal = all_equal && (a2.normal() == c.normal());
    CHECK_FALSE(all_equal);
}

TEST_CASE("goe draws are exactly symmetric with the right second moments") {
    const int N = 32, draws = 500;
    RngStream rng(7, 0);
    double tr2 = 0, diag_var = 0, offdiag_var = 0;
    for (int k = 0; k < draws; ++k) {
        RealMatrix m = sample_goe(N, rng);
        REQUIRE((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
        tr2 += m.squaredNorm();
        for (int i = 0; i < N; ++i) diag_var += m(i, i) * m(i, i);
        offdiag_var += m(0, 1) * m(0, 1);
    }
    // E tr V^2 = N * 2/N + N(N-1) * 1/N = N + 1
    CHECK(tr2 / draws == doctest::Approx(N + 1).epsilon(0.1));
    CHECK(diag_var / (draws * N) == doctest::Approx(2.0 / N).epsilon(0.15));
    CHECK(offdiag_var / draws == doctest::Approx(1.0 / N).epsilon(0.3));
}

TEST_CASE("gue draws are exactly hermitian with the right second moments") {
    const int N = 32, draws = 500;
    RngStream rng(7, 1);
    double tr2 = 0, diag_var = 0, offdiag_var = 0;
    for (int k = 0; k < draws; ++k) {
        Matrix m = sample_gue(N, rng);
        REQUIRE((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        for (int i = 0; i < N; ++i) REQUIRE(m(i, i).imag() == 0.0);
        tr2 += m.squaredNorm();
        for (int i = 0; i < N; ++i) diag_var += std::norm(m(i, i));
        offdiag_var += std::norm(m(0, 1));
    }
    // E tr V^2 = N * 1/N + N(N-1) * 1/N = N
    CHECK(tr2 / draws == doctest::Approx(N).epsilon(0.1));
    CHECK(diag_var / (draws * N) == doctest::Approx(1.0 / N).epsilon(0.15));
    CHECK(offdiag_var / draws == doctest::Approx(1.0 / N).epsilon(0.3));
}

TEST_CASE("complex gaussian matrix entry variance") {
    RngStream rng(7, 2);
    const int n = 40, draws = 200;
    double v = 0;
    for (int k = 0; k < draws; ++k)
        v += sample_complex_gaussian_matrix(n, n, 0.25, rng).squaredNorm();
    CHECK(v / (draws * n * n) == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("sharp cutoff shape") {
    auto psi = ShapeFunction::sharp_cutoff(5);
    CHECK(psi(0) == 1.0 / 5);
    CHECK(psi(4) == 1.0 / 5);
    CHECK(psi(5) == 0.0);
    CHECK(psi(-3) == psi(3));
    CHECK(psi.bandwidth() == 5);
}

TEST_CASE("scaled profile shape") {
    auto phi = [](const std::vector<double>& u) {
        double s2 = 0;
        for (double x : u) s2 += x * x;
        return std::exp(-s2);
    };
    auto psi = ShapeFunction::scaled_profile(phi, 4, 2);
    CHECK(psi({0, 0}) == doctest::Approx(1.0 / 16).epsilon(1e-12));
    CHECK(psi({4, 0}) == doctest::Approx(std::exp(-1.0) / 16).epsilon(1e-12));
    CHECK(psi({2, -2}) == psi({-2, 2}));
}

TEST_CASE("susy kernel against a 1d chain oracle") {
    // Oracle: solve (-W^2 Lap + 1) u = e_0 on a long finite chain by the
    // tridiagonal Thomas algorithm; far from the ends this matches the
    // infinite-lattice kernel.
    const int W = 3, n = 10001, mid = n / 2;
    std::vector<double> a(n, 1.0 + 2.0 * W * W), b(n, -double(W * W));
    std::vector<double> rhs(n, 0.0);
    rhs[mid] = 1.0;
    // forward sweep
    std::vector<double> cp(n), dp(n);
    cp[0] = b[0] / a[0];
    dp[0] = rhs[0] / a[0];
    for (int i = 1; i < n; ++i) {
        double m = a[i] - b[i - 1] * cp[i - 1];
        cp[i] = b[i] / m;
        dp[i] = (rhs[i] - b[i - 1] * dp[i - 1]) / m;
    }
    std::vector<double> u(n);
    u[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = dp[i] - cp[i] * u[i + 1];

    for (int r = 0; r <= 8; ++r)
        CHECK(susy_kernel_value(W, 1, {r}) == doctest::Approx(u[mid + r]).epsilon(1e-7));
}

TEST_CASE("susy kernel properties") {
    auto psi = ShapeFunction::susy_kernel(2, 2);
    CHECK(psi({1, 2}) == psi({-1, 2}));
    CHECK(psi({1, 2}) == psi({2, 1}));  // coordinate symmetry of the Laplacian
    CHECK(psi({0, 0}) > 0);
    CHECK(psi({0, 0}) > psi({3, 0}));

    // total mass: the k = 0 Fourier coefficient of the kernel is 1
    double total = 0;
    for (int x = -40; x <= 40; ++x)
        for (int y = -40; y <= 40; ++y) total += susy_kernel_value(2, 2, {x, y});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}
