#pragma once
#include <functional>
#include <optional>
#include <vector>

#include "orbital/ensembles.hpp"

namespace orbital {

// Finite box {-L,...,L}^d with lexicographic site indexing.
struct LatticeBox {
    int d = 1;
    int L = 0;

    LatticeBox() = default;
    LatticeBox(int d_, int L_);

    int side() const { return 2 * L + 1; }
    int num_sites() const;

    LatticeVector site(int index) const;
    int index(const LatticeVector& x) const;
    bool contains(const LatticeVector& x) const;

    // Neighbors of x at l1 distance 1 inside the box, in a fixed order.
    std::vector<int> neighbors(int index) const;

    static int l1_distance(const LatticeVector& a, const LatticeVector& b);
};

enum class OrbitalKind { block_anderson, wegner_orbital };

struct OrbitalModelSpec {
    LatticeBox box;
    int N = 1;         // orbitals per site
    double g = 0.0;    // coupling constant
    SymmetryClass symmetry = SymmetryClass::orthogonal;
    OrbitalKind kind = OrbitalKind::wegner_orbital;
};

struct DeformedBlockSpec {
    std::vector<int> block_sizes;
    Matrix H0;  // Hermitian, real in the orthogonal case
    SymmetryClass symmetry = SymmetryClass::orthogonal;

    int total_dim() const;
    void validate() const;
};

struct BandModelSpec {
    LatticeBox box;
    ShapeFunction shape;
    SymmetryClass symmetry = SymmetryClass::orthogonal;
};

// Dense Hermitian matrix with an explicit block partition.  For lattice
// models block j corresponds to site j of the box and all blocks have equal
// size.  Matrices are exactly Hermitian by construction; in the orthogonal
// case the imaginary part is exactly zero.
struct BlockHamiltonian {
    Matrix matrix;
    std::vector<int> offsets;  // size k+1, strictly increasing, offsets.back() == dim
    SymmetryClass symmetry = SymmetryClass::orthogonal;
    std::optional<LatticeBox> box;     // set for lattice models
    std::vector<int> sites;            // site index per block (lattice models)

    int num_blocks() const { return static_cast<int>(offsets.size()) - 1; }
    int block_size(int j) const { return offsets[j + 1] - offsets[j]; }
    int dim() const { return static_cast<int>(matrix.rows()); }

    Eigen::Block<const Matrix> block(int i, int j) const {
        return matrix.block(offsets[i], offsets[j], block_size(i), block_size(j));
    }
    bool is_real() const { return symmetry == SymmetryClass::orthogonal; }
};

// Per-edge hopping sampler for the general model: given the edge (x, y) with
// x lexicographically smaller, returns the N x N block W(x, y).  The mirror
// block W(y, x) = W(x, y)^* is filled automatically.
using HopSampler = std::function<Matrix(const LatticeVector& x, const LatticeVector& y,
                                        RngStream& rng)>;

// Lattice orbital Hamiltonian.  Diagonal block at x is V(x) (GOE/GUE), plus
// 2 d g I for the block Anderson model (full-lattice degree, kept under
// restriction).  Off-diagonal blocks: -g I (block Anderson) or g W(x,y) with
// iid N(0, 1/N) entries (Wegner orbital), one draw per unordered edge.
BlockHamiltonian build_orbital_hamiltonian(const OrbitalModelSpec& spec, RngStream& rng);

// General-hopping variant: same diagonal structure as the Wegner orbital
// model, off-diagonal blocks g * hop(x, y).
BlockHamiltonian build_orbital_hamiltonian(const OrbitalModelSpec& spec, RngStream& rng,
                                           const HopSampler& hop);

// Principal submatrix over the selected blocks (P H P^*); block structure and
// lattice bookkeeping are preserved.
BlockHamiltonian restrict(const BlockHamiltonian& H, const std::vector<int>& blocks);

// H0 plus independent GOE/GUE blocks of the declared sizes on the diagonal.
BlockHamiltonian build_deformed_block(const DeformedBlockSpec& spec, RngStream& rng);

// Gaussian matrix with domain Lambda_L^d and shape function psi, built as
// (X + X^*)/sqrt(2) with E|X(x,y)|^2 = psi(x - y).  Blocks are single sites.
BlockHamiltonian sample_band_matrix(const BandModelSpec& spec, RngStream& rng);

// H + tau * (P_j^* v)(P_j^* v)^* for a unit vector v on block j.
Matrix rank_one_perturb(const BlockHamiltonian& H, int j, const Vector& v, double tau);

// Partition of {-L..L}^d into boxes that are Cartesian products of 1D
// intervals of length in [W+1, 2W+1] (greedy from the left; the final
// interval absorbs the remainder).  Returns the site-index sets.
std::vector<std::vector<int>> block_partition_band(int L, int W, int d);

}  // namespace orbital
