#include "orbital/walk_expansion.hpp"

#include <cstdint>

namespace orbital {

namespace {

// adjacency between block indices via the lattice geometry
bool adjacent(const LatticeBox& box, int site_a, int site_b) {
    return LatticeBox::l1_distance(box.site(site_a), box.site(site_b)) == 1;
}

}  // namespace

std::vector<SAWalk> enumerate_sa_walks(const LatticeBox& box, const std::vector<int>& sites,
                                       int x, int y, int k_max) {
    if (x == y) throw std::invalid_argument("enumerate_sa_walks: x != y required");
    const int n = static_cast<int>(sites.size());
    std::vector<SAWalk> out;
    SAWalk walk{x};
    std::vector<bool> used(n, false);
    used[x] = true;

    std::function<void()> dfs = [&] {
        int cur = walk.back();
        if (static_cast<int>(walk.size()) - 1 >= k_max) return;
        for (int nxt = 0; nxt < n; ++nxt) {
            if (used[nxt]) continue;
            if (!adjacent(box, sites[cur], sites[nxt])) continue;
            walk.push_back(nxt);
            used[nxt] = true;
            if (nxt == y)
                out.push_back(walk);
            else
                dfs();
            used[nxt] = false;
            walk.pop_back();
        }
    };
    dfs();
    return out;
}

Matrix walk_expansion_resolvent(const BlockHamiltonian& H, double lambda, int x, int y,
                                int k_max) {
    if (!H.box) throw std::invalid_argument("walk_expansion_resolvent: lattice model required");
    const int nb = H.num_blocks();
    if (nb > 20) throw std::invalid_argument("walk_expansion_resolvent: box too large");

    // depleted diagonal resolvent G[H_{Lambda \ S}](b, b), memoized on (S, b)
    std::unordered_map<std::uint64_t, Matrix> memo;
    auto depleted_diag = [&](std::uint64_t mask, int b) -> const Matrix& {
        std::uint64_t key = mask * 64 + static_cast<std::uint64_t>(b);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<int> keep;
        int pos = -1;
        for (int j = 0; j < nb; ++j) {
            if (mask & (1ull << j)) continue;
            if (j == b) pos = static_cast<int>(keep.size());
            keep.push_back(j);
        }
        BlockHamiltonian R = restrict(H, keep);
        Matrix A = R.matrix;
        A.diagonal().array() -= lambda;
        Eigen::FullPivLU<Matrix> lu(A);
        if (!lu.isInvertible() || lu.rcond() < 1e-12)
            throw SingularityError("walk_expansion_resolvent: depleted restriction near-singular");
        Matrix rhs = Matrix::Zero(R.dim(), R.block_size(pos));
        rhs.block(R.offsets[pos], 0, R.block_size(pos), R.block_size(pos)).setIdentity();
        Matrix g = lu.solve(rhs).block(R.offsets[pos], 0, R.block_size(pos), R.block_size(pos));
        return memo.emplace(key, std::move(g)).first->second;
    };

    if (x == y) return depleted_diag(0, x);

    Matrix sum = Matrix::Zero(H.block_size(x), H.block_size(y));
    for (const SAWalk& w :
         enumerate_sa_walks(*H.box, H.sites, x, y, std::min<int>(k_max, nb - 1))) {
        const int k = static_cast<int>(w.size()) - 1;
        std::uint64_t mask = 0;
        Matrix term = depleted_diag(mask, w[0]);
        for (int i = 0; i + 1 <= k; ++i) {
            term = term * H.block(w[i], w[i + 1]);
            mask |= 1ull << w[i];
            term = term * depleted_diag(mask, w[i + 1]);
        }
        if (k % 2 == 1) term = -term;
        sum += term;
    }
    return sum;
}

}  // namespace orbital
