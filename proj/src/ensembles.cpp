#include "orbital/ensembles.hpp"

#include <cmath>
#include <numbers>

namespace orbital {

RealMatrix sample_real_gaussian_matrix(int rows, int cols, double variance_per_entry,
                                       RngStream& rng) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
    if (!(variance_per_entry > 0)) throw std::invalid_argument("variance must be positive");
    const double sd = std::sqrt(variance_per_entry);
    RealMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = sd * rng.normal();
    return m;
}

Matrix sample_complex_gaussian_matrix(int rows, int cols, double variance_per_entry,
                                      RngStream& rng) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
    if (!(variance_per_entry > 0)) throw std::invalid_argument("variance must be positive");
    const double sd = std::sqrt(variance_per_entry / 2.0);
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = std::complex<double>(sd * rng.normal(), sd * rng.normal());
    return m;
}

RealMatrix sample_goe(int N, RngStream& rng) {
    if (N < 1) throw std::invalid_argument("sample_goe: N must be >= 1");
    RealMatrix x = sample_real_gaussian_matrix(N, N, 1.0, rng);
    RealMatrix m = (x + x.transpose()) / std::sqrt(2.0 * N);
    // enforce exact symmetry against fp non-associativity
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < j; ++i) m(j, i) = m(i, j);
    return m;
}

Matrix sample_gue(int N, RngStream& rng) {
    if (N < 1) throw std::invalid_argument("sample_gue: N must be >= 1");
    Matrix x = sample_complex_gaussian_matrix(N, N, 1.0, rng);
    Matrix m = (x + x.adjoint()) / std::sqrt(2.0 * N);
    for (int j = 0; j < N; ++j) {
        m(j, j) = std::complex<double>(m(j, j).real(), 0.0);
        for (int i = 0; i < j; ++i) m(j, i) = std::conj(m(i, j));
    }
    return m;
}

ShapeFunction ShapeFunction::sharp_cutoff(int W) {
    if (W < 1) throw std::invalid_argument("sharp_cutoff: W must be >= 1");
    return ShapeFunction(Kind::sharp_cutoff, W, 1);
}

ShapeFunction ShapeFunction::scaled_profile(std::function<double(const std::vector<double>&)> phi,
                                            int W, int d) {
    if (W < 1) throw std::invalid_argument("scaled_profile: W must be >= 1");
    if (d < 1) throw std::invalid_argument("scaled_profile: d must be >= 1");
    ShapeFunction s(Kind::scaled_profile, W, d);
    s.phi_ = std::move(phi);
    return s;
}

ShapeFunction ShapeFunction::susy_kernel(int W, int d) {
    if (W < 0) throw std::invalid_argument("susy_kernel: W must be >= 0");
    if (d < 1) throw std::invalid_argument("susy_kernel: d must be >= 1");
    return ShapeFunction(Kind::susy_kernel, W, d);
}

double ShapeFunction::operator()(const LatticeVector& r) const {
    if (static_cast<int>(r.size()) != d_)
        throw std::invalid_argument("ShapeFunction: displacement dimension mismatch");
    switch (kind_) {
        case Kind::sharp_cutoff:
            return std::abs(r[0]) < W_ ? 1.0 / W_ : 0.0;
        case Kind::scaled_profile: {
            std::vector<double> rho(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) rho[i] = static_cast<double>(r[i]) / W_;
            double v = phi_(rho);
            return v / std::pow(static_cast<double>(W_), d_);
        }
        case Kind::susy_kernel: {
            if (W_ == 0) {
                for (int c : r)
                    if (c != 0) return 0.0;
                return 1.0;
            }
            LatticeVector key(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) key[i] = std::abs(r[i]);
            std::sort(key.begin(), key.end());  // kernel symmetric under coordinate signs/permutations
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
            double v = susy_kernel_value(W_, d_, key);
            cache_.emplace(key, v);
            return v;
        }
    }
    return 0.0;
}

double susy_kernel_value(int W, int d, const LatticeVector& r, int min_nodes, double tol) {
    if (W < 1) throw std::invalid_argument("susy_kernel_value: W must be >= 1");
    if (d < 1) throw std::invalid_argument("susy_kernel_value: d must be >= 1");
    if (static_cast<int>(r.size()) != d)
        throw std::invalid_argument("susy_kernel_value: displacement dimension mismatch");

    // Periodic trapezoid rule: G(r) = n^{-d} sum_m cos(k_m . r) / denom(k_m).
    auto eval = [&](int n) {
        const double twopi = 2.0 * std::numbers::pi;
        std::vector<long> idx(d, 0);
        double sum = 0.0;
        while (true) {
            double denom = 1.0;
            double phase = 0.0;
            for (int i = 0; i < d; ++i) {
                double k = twopi * idx[i] / n;
                denom += 2.0 * W * static_cast<double>(W) * (1.0 - std::cos(k));
                phase += k * r[i];
            }
            sum += std::cos(phase) / denom;
            int i = 0;
            for (; i < d; ++i) {
                if (++idx[i] < n) break;
                idx[i] = 0;
            }
            if (i == d) break;
        }
        return sum / std::pow(static_cast<double>(n), d);
    };

    int n = std::max({64 * W, min_nodes, 8});
    double prev = eval(n);
    for (int iter = 0; iter < 12; ++iter) {
        n *= 2;
        double cur = eval(n);
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    throw std::runtime_error("susy_kernel_value: quadrature failed to converge");
}

}  // namespace orbital
