#include "orbital/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orbital {

LatticeBox::LatticeBox(int d_, int L_) : d(d_), L(L_) {
    if (d < 1) throw std::invalid_argument("LatticeBox: d must be >= 1");
    if (L < 0) throw std::invalid_argument("LatticeBox: L must be >= 0");
}

int LatticeBox::num_sites() const {
    int n = 1;
    for (int i = 0; i < d; ++i) n *= side();
    return n;
}

LatticeVector LatticeBox::site(int index) const {
    LatticeVector x(d);
    for (int i = d - 1; i >= 0; --i) {
        x[i] = index % side() - L;
        index /= side();
    }
    return x;
}

int LatticeBox::index(const LatticeVector& x) const {
    if (static_cast<int>(x.size()) != d) throw std::invalid_argument("LatticeBox: bad site");
    int idx = 0;
    for (int i = 0; i < d; ++i) {
        if (x[i] < -L || x[i] > L) throw std::invalid_argument("LatticeBox: site outside box");
        idx = idx * side() + (x[i] + L);
    }
    return idx;
}

bool LatticeBox::contains(const LatticeVector& x) const {
    if (static_cast<int>(x.size()) != d) return false;
    for (int c : x)
        if (c < -L || c > L) return false;
    return true;
}

std::vector<int> LatticeBox::neighbors(int index) const {
    LatticeVector x = site(index);
    std::vector<int> out;
    for (int i = 0; i < d; ++i) {
        for (int s : {-1, +1}) {
            LatticeVector y = x;
            y[i] += s;
            if (contains(y)) out.push_back(this->index(y));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int LatticeBox::l1_distance(const LatticeVector& a, const LatticeVector& b) {
    int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

int DeformedBlockSpec::total_dim() const {
    int s = 0;
    for (int n : block_sizes) s += n;
    return s;
}

void DeformedBlockSpec::validate() const {
    if (block_sizes.empty()) throw std::invalid_argument("DeformedBlockSpec: no blocks");
    for (int n : block_sizes)
        if (n < 1) throw std::invalid_argument("DeformedBlockSpec: block sizes must be >= 1");
    if (H0.rows() != total_dim() || H0.cols() != total_dim())
        throw std::invalid_argument("DeformedBlockSpec: H0 dimension mismatch");
    if ((H0 - H0.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + H0.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("DeformedBlockSpec: H0 not Hermitian");
    if (symmetry == SymmetryClass::orthogonal && H0.imag().cwiseAbs().maxCoeff() != 0.0)
        throw std::invalid_argument("DeformedBlockSpec: H0 must be real in the orthogonal case");
}

namespace {

Matrix sample_potential(int N, SymmetryClass sym, RngStream& rng) {
    if (sym == SymmetryClass::orthogonal) return sample_goe(N, rng).cast<std::complex<double>>();
    return sample_gue(N, rng);
}

std::vector<int> uniform_offsets(int k, int N) {
    std::vector<int> off(k + 1);
    for (int j = 0; j <= k; ++j) off[j] = j * N;
    return off;
}

}  // namespace

BlockHamiltonian build_orbital_hamiltonian(const OrbitalModelSpec& spec, RngStream& rng,
                                           const HopSampler& hop) {
    if (spec.N < 1) throw std::invalid_argument("OrbitalModelSpec: N must be >= 1");
    if (spec.g < 0) throw std::invalid_argument("OrbitalModelSpec: g must be >= 0");
    const int ns = spec.box.num_sites();
    const int N = spec.N;
    BlockHamiltonian H;
    H.symmetry = spec.symmetry;
    H.box = spec.box;
    H.offsets = uniform_offsets(ns, N);
    H.sites.resize(ns);
    for (int i = 0; i < ns; ++i) H.sites[i] = i;
    H.matrix = Matrix::Zero(ns * N, ns * N);

    for (int x = 0; x < ns; ++x) {
        Matrix v = sample_potential(N, spec.symmetry, rng);
        if (spec.kind == OrbitalKind::block_anderson)
            v += (2.0 * spec.box.d * spec.g) * Matrix::Identity(N, N);
        H.matrix.block(x * N, x * N, N, N) = v;
    }

    // one hopping draw per unordered edge, iterated in index order
    for (int x = 0; x < ns; ++x) {
        for (int y : spec.box.neighbors(x)) {
            if (y <= x) continue;
            Matrix w;
            if (hop) {
                w = spec.g * hop(spec.box.site(x), spec.box.site(y), rng);
            } else if (spec.kind == OrbitalKind::block_anderson) {
                w = -spec.g * Matrix::Identity(N, N);
            } else {
                if (spec.symmetry == SymmetryClass::orthogonal)
                    w = spec.g *
                        sample_real_gaussian_matrix(N, N, 1.0 / N, rng).cast<std::complex<double>>();
                else
                    w = spec.g * sample_complex_gaussian_matrix(N, N, 1.0 / N, rng);
            }
            H.matrix.block(x * N, y * N, N, N) = w;
            H.matrix.block(y * N, x * N, N, N) = w.adjoint();
        }
    }
    return H;
}

BlockHamiltonian build_orbital_hamiltonian(const OrbitalModelSpec& spec, RngStream& rng) {
    return build_orbital_hamiltonian(spec, rng, HopSampler{});
}

BlockHamiltonian restrict(const BlockHamiltonian& H, const std::vector<int>& blocks) {
    for (int b : blocks)
        if (b < 0 || b >= H.num_blocks())
            throw std::invalid_argument("restrict: block index outside domain");
    std::vector<int> sel = blocks;
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());

    BlockHamiltonian R;
    R.symmetry = H.symmetry;
    R.box = H.box;
    R.offsets.assign(1, 0);
    int dim = 0;
    for (int b : sel) {
        dim += H.block_size(b);
        R.offsets.push_back(dim);
        if (!H.sites.empty()) R.sites.push_back(H.sites[b]);
    }
    R.matrix = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < sel.size(); ++i)
        for (std::size_t j = 0; j < sel.size(); ++j)
            R.matrix.block(R.offsets[i], R.offsets[j], R.block_size(i), R.block_size(j)) =
                H.block(sel[i], sel[j]);
    return R;
}

BlockHamiltonian build_deformed_block(const DeformedBlockSpec& spec, RngStream& rng) {
    spec.validate();
    BlockHamiltonian H;
    H.symmetry = spec.symmetry;
    H.offsets.assign(1, 0);
    for (int n : spec.block_sizes) H.offsets.push_back(H.offsets.back() + n);
    H.matrix = spec.H0;
    for (std::size_t j = 0; j < spec.block_sizes.size(); ++j) {
        const int n = spec.block_sizes[j];
        H.matrix.block(H.offsets[j], H.offsets[j], n, n) += sample_potential(n, spec.symmetry, rng);
    }
    return H;
}

BlockHamiltonian sample_band_matrix(const BandModelSpec& spec, RngStream& rng) {
    const int ns = spec.box.num_sites();
    Matrix x(ns, ns);
    for (int j = 0; j < ns; ++j) {
        LatticeVector sj = spec.box.site(j);
        for (int i = 0; i < ns; ++i) {
            LatticeVector si = spec.box.site(i);
            LatticeVector r(si.size());
            for (std::size_t c = 0; c < r.size(); ++c) r[c] = si[c] - sj[c];
            double var = spec.shape(r);
            if (var == 0.0) {
                x(i, j) = 0.0;
            } else if (spec.symmetry == SymmetryClass::orthogonal) {
                x(i, j) = std::sqrt(var) * rng.normal();
            } else {
                double sd = std::sqrt(var / 2.0);
                x(i, j) = std::complex<double>(sd * rng.normal(), sd * rng.normal());
            }
        }
    }
    BlockHamiltonian H;
    H.symmetry = spec.symmetry;
    H.box = spec.box;
    H.offsets = uniform_offsets(ns, 1);
    H.sites.resize(ns);
    for (int i = 0; i < ns; ++i) H.sites[i] = i;
    H.matrix = (x + x.adjoint()) / std::sqrt(2.0);
    for (int j = 0; j < ns; ++j) {
        H.matrix(j, j) = std::complex<double>(H.matrix(j, j).real(), 0.0);
        for (int i = 0; i < j; ++i) H.matrix(j, i) = std::conj(H.matrix(i, j));
    }
    return H;
}

Matrix rank_one_perturb(const BlockHamiltonian& H, int j, const Vector& v, double tau) {
    if (j < 0 || j >= H.num_blocks()) throw std::invalid_argument("rank_one_perturb: bad block");
    if (v.size() != H.block_size(j))
        throw std::invalid_argument("rank_one_perturb: vector size mismatch");
    if (std::abs(v.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("rank_one_perturb: v must be a unit vector");
    Vector u = Vector::Zero(H.dim());
    u.segment(H.offsets[j], H.block_size(j)) = v;
    return H.matrix + tau * (u * u.adjoint());
}

std::vector<std::vector<int>> block_partition_band(int L, int W, int d) {
    if (W < 0 || W > 2 * L) throw std::invalid_argument("block_partition_band: need 0 <= W <= 2L");
    const int side = 2 * L + 1;
    // greedy 1D intervals of length W+1; the last absorbs the remainder
    std::vector<std::pair<int, int>> intervals;  // [start, end) in 0..side
    int pos = 0;
    while (side - pos >= 2 * (W + 1)) {
        intervals.emplace_back(pos, pos + W + 1);
        pos += W + 1;
    }
    intervals.emplace_back(pos, side);

    LatticeBox box(d, L);
    const int nb1 = static_cast<int>(intervals.size());
    int nboxes = 1;
    for (int i = 0; i < d; ++i) nboxes *= nb1;

    std::vector<std::vector<int>> out;
    out.reserve(nboxes);
    std::vector<int> choice(d, 0);
    while (true) {
        std::vector<int> sites;
        std::vector<int> cursor(d);
        for (int i = 0; i < d; ++i) cursor[i] = intervals[choice[i]].first;
        // enumerate the Cartesian product of the chosen 1D intervals
        std::function<void(int, LatticeVector&)> rec = [&](int axis, LatticeVector& x) {
            if (axis == d) {
                sites.push_back(box.index(x));
                return;
            }
            for (int c = intervals[choice[axis]].first; c < intervals[choice[axis]].second; ++c) {
                x[axis] = c - L;
                rec(axis + 1, x);
            }
        };
        LatticeVector x(d);
        rec(0, x);
        std::sort(sites.begin(), sites.end());
        out.push_back(std::move(sites));

        int i = 0;
        for (; i < d; ++i) {
            if (++choice[i] < nb1) break;
            choice[i] = 0;
        }
        if (i == d) break;
    }
    return out;
}

}  // namespace orbital
