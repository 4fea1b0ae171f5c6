#pragma once
#include <unordered_map>

#include "orbital/spectra.hpp"

namespace orbital {

// Self-avoiding walk on the lattice sites underlying a BlockHamiltonian:
// pairwise distinct block indices, consecutive sites at l1 distance 1.
using SAWalk = std::vector<int>;

// All self-avoiding walks from x to y of length <= k_max inside the given
// site set (block indices of H's box).  x != y; the trivial x == y case is
// handled directly by walk_expansion_resolvent.
std::vector<SAWalk> enumerate_sa_walks(const LatticeBox& box, const std::vector<int>& sites,
                                       int x, int y, int k_max);

// Resolvent block G(x, y) as the alternating sum over self-avoiding walks of
// products of depleted diagonal resolvents and hopping blocks.  Exact (to
// solver accuracy) once k_max reaches |sites| - 1.  Depleted resolvents are
// memoized per removed-prefix set.  Near-singular depleted restrictions
// (condition estimate beyond 1e12) raise SingularityError.
Matrix walk_expansion_resolvent(const BlockHamiltonian& H, double lambda, int x, int y,
                                int k_max);

}  // namespace orbital
