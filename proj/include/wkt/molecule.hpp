#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wkt/beta_lattice.hpp"
#include "wkt/garden.hpp"

namespace wkt {

enum class BondLabel { PC, LP };

// Directed multigraph of atoms and bonds; self-loops allowed. Each atom has
// at most 2 outgoing and 2 incoming bonds (a self-loop counts once each way)
// and no connected component consists solely of degree-4 atoms.
struct Molecule {
  struct Bond {
    int u = 0, v = 0;  // directed u -> v
    BondLabel label = BondLabel::LP;
    int role_u = -1, role_v = -1;  // 0 = parent slot, 1..3 = child slots; -1 = unset
  };
  int n_atoms = 0;
  std::vector<Bond> bonds;

  int degree(int atom) const;
  int out_degree(int atom) const;
  int in_degree(int atom) const;
  int components() const;  // over all atoms, undirected support
  void validate() const;

  std::string serialize() const;  // edge list `u role_u -> v role_v label`
  static Molecule parse(const std::string&);
};

struct GardenMolecule {
  Molecule mol;
  std::vector<std::pair<int, int>> atom_of;  // atom -> (tree, branching node)
  struct BondOrigin {
    bool is_pc = false;
    int tree = -1, node = -1;  // PC: the child branching node
    int gid1 = -1, gid2 = -1;  // LP: the global leaf pair
  };
  std::vector<BondOrigin> bond_origin;
};

// One atom per branching node; PC bonds for parent/child branching pairs
// (from the atom headed by the node, toward the parent atom, when the node
// sign is +), LP bonds from the minus leaf's atom to the plus leaf's atom.
GardenMolecule garden_to_molecule(const Garden& g);

struct ChiStats {
  int V = 0, E = 0, F = 0, chi = 0;
  bool v_identity = false;  // V == m
  bool e_identity = false;  // E == 2m - R
  bool bound_ok = false;    // chi <= m - R/2 (mixed) or chi == m (multi-couple)
};
ChiStats chi_stats(const Molecule& mol, int m, int R, bool mixed, bool multi_couple);

struct MolecularChains {
  // type I: maximal atom paths linked by opposite-direction double bonds
  std::vector<std::vector<int>> type1;
  // type II: maximal ladders of double-bonded cells linked by opposite-
  // direction pairs of single bonds
  std::vector<std::vector<std::pair<int, int>>> type2;
};
MolecularChains find_molecular_chains(const Molecule& mol);

// All gardens of width 2R mapping to the molecule: enumerates role-code
// assignments consistent with labels and directions, root signs, trivial-tree
// completions and tree orderings. Results deduplicated.
std::vector<Garden> reconstruct_gardens(const Molecule& mol, int R, std::size_t cap = 2'000'000);

// Counting problem of the molecule calculus, solved by exhaustive search.
struct MoleculeCounting {
  Molecule mol;
  int d = 1;
  double L = 1.0;
  BetaVector beta = BetaVector::isotropic(1);
  double window = 1.0;        // |k_l - a_l| <= window
  double gamma_window = 1.0;  // |sum zeta |k_l|^2_beta - Gamma_v| <= gamma_window
  std::vector<std::vector<std::int64_t>> a;  // per bond, numerators
  std::vector<std::vector<std::int64_t>> c;  // per atom, numerators (0 for degree-4 atoms)
  std::vector<double> Gamma;                 // per atom
  std::vector<int> S;                        // degenerate atoms
  std::vector<std::vector<std::int64_t>> f;  // forced value per S entry with degree < 4 (may be empty)
  struct ExtCond {
    int l1 = 0, l2 = 0;
    bool equal = true;  // k_l1 == k_l2 or k_l1 != k_l2
  };
  std::vector<ExtCond> ext;
};
std::uint64_t brute_count_decorations(const MoleculeCounting& prob);

}  // namespace wkt
