#pragma once
#include "kmchev/cartan.hpp"
#include "kmchev/linalg.hpp"
#include "kmchev/rational.hpp"
#include <compare>
#include <vector>

namespace kmchev {

// Element of the root lattice as integer coordinates over simple roots.
using RootCoords = IVec;

// Depth vector k of a module weight lambda - sum k_i alpha_i.
using KVec = std::vector<long>;

// w = w_{word[0]} w_{word[1]} ... (leftmost letter outermost), so the root
// is word-applied to the simple root right to left.
struct Witness {
  std::vector<int> word;
  int simple = 0;
};

struct RealRoot {
  RootCoords coords; // positive
  Witness witness;   // coords = w(alpha_simple)
};

Int height(const RootCoords& r);
bool all_nonneg(const RootCoords& r);
bool all_nonpos(const RootCoords& r);

RootCoords simple_root(size_t rank, int i);

// <alpha, alpha_i^vee> = sum_j a_ij c_j
Int root_pairing(const Gcm& A, const RootCoords& alpha, int i);

// w_i(alpha) = alpha - <alpha, alpha_i^vee> alpha_i
RootCoords reflect(const Gcm& A, int i, const RootCoords& alpha);

// Height first; ties broken lexicographically left to right with the larger
// first differing coordinate the greater root.
int root_order_cmp(const RootCoords& a, const RootCoords& b);

// Positive real roots of height <= h as a breadth-first Weyl-orbit closure
// of the simple roots, each with a shortest-found witness. Complete for the
// stated height bound; ordered by root_order_cmp.
std::vector<RealRoot> real_roots_up_to_height(const Gcm& A, long h);

// Coordinates of alpha^vee = w(alpha_i^vee) over the simple coroots.
IVec coroot_coords(const Gcm& A, const Witness& w);

// A weight lambda - sum k_i alpha_i of V^lambda. lambda is stored by its
// coroot pairings; k may temporarily go negative under Weyl reflections.
struct ModuleWeight {
  IVec lambda;
  KVec k;
};

Int depth(const ModuleWeight& mu);

// lambda_i - sum_j a_ij k_j
Int pairing(const Gcm& A, const ModuleWeight& mu, int i);

ModuleWeight weyl_reflect(const Gcm& A, int i, const ModuleWeight& mu);

// Applies w = w_{word[0]} ... w_{word[m-1]} (rightmost first).
ModuleWeight weyl_apply(const Gcm& A, const std::vector<int>& word, ModuleWeight mu);

// <mu, alpha^vee> for a real root given by its witness.
Int coroot_pairing(const Gcm& A, const ModuleWeight& mu, const Witness& w);

enum class LatticeTag { RootLattice, WeightLattice };

// Basis (as columns, in coroot coordinates) of the h-lattice dual to L.
// Requires det A != 0.
QMat integral_h_lattice(const Gcm& A, LatticeTag L);

} // namespace kmchev
