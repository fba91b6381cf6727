#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "wkt/beta_lattice.hpp"
#include "wkt/garden.hpp"

namespace wkt {

// Iterated time integral over the nested simplex domain
// { 0 < t_child < t_parent < t }: product over branching nodes of
// exp(i pi alpha_n t_n). Closed-form antidifferentiation with a Taylor-series
// branch when an accumulated phase is below the threshold (removable
// singularity at exact resonance).
std::complex<double> simplex_time_integral_tree(const SignedTree& t,
                                                const std::vector<double>& alpha, double time,
                                                double series_threshold = 1e-6);
// Garden domain factorizes across trees.
std::complex<double> simplex_time_integral(const Garden& g,
                                           const std::vector<std::vector<double>>& alpha,
                                           double time, double series_threshold = 1e-6);

// Exhaustive-decoration evaluation on a tiny lattice: the leaf support is the
// integer box |num_i| <= support_radius; n_in must vanish outside it for the
// expansion sums to truncate exactly.
struct DiagramParams {
  int d = 1;
  double L = 1.0;
  double delta = 0.02;
  BetaVector beta = BetaVector::isotropic(1);
  int support_radius = 2;
  std::function<double(const std::vector<double>&)> n_in;
  std::size_t decoration_cap = 50'000'000;
};

// leaf value universe (integer numerators), lexicographic
std::vector<std::vector<std::int64_t>> lattice_values(const DiagramParams& p);

// Precomputed decoration table for one tree at a fixed root value and time:
// the tree iterate is then a plain sum of coef * prod eta^{sign} over entries.
struct TreeEvalTable {
  struct Entry {
    std::complex<double> coef;
    std::vector<int> leaf_value_idx;  // into lattice_values order, leaf preorder
  };
  std::vector<Entry> entries;
  std::vector<int> leaf_signs;
};
TreeEvalTable build_tree_table(const SignedTree& tree, const std::vector<std::int64_t>& root_k,
                               double time, const DiagramParams& p);
std::complex<double> eval_tree_table(const TreeEvalTable& table,
                                     std::span<const std::complex<double>> eta);

// (J_T)_k(t) for one realization eta (indexed like lattice_values).
std::complex<double> evaluate_tree_iterate(const SignedTree& tree,
                                           std::span<const std::complex<double>> eta,
                                           const std::vector<std::int64_t>& root_k, double time,
                                           const DiagramParams& p);

// M_G(t, k_1..k_2R): prefactor, epsilon coefficients, factorized simplex time
// integral, and the n_in product over plus-sign leaves, summed over all
// boundary-pinned decorations.
std::complex<double> evaluate_garden_expression(const Garden& g,
                                                const std::vector<std::vector<std::int64_t>>& ks,
                                                double time, const DiagramParams& p);

// Over-pairing of the leaves: sign-balanced blocks of even size (global ids).
struct OverPairing {
  std::vector<std::vector<int>> blocks;
  std::vector<int> sizes() const;  // sorted descending: the induced partition
};

// Same as evaluate_garden_expression but all leaves of a block carry equal
// decoration values.
std::complex<double> evaluate_over_garden_expression(
    const std::vector<SignedTree>& trees, const OverPairing& op,
    const std::vector<std::vector<std::int64_t>>& ks, double time, const DiagramParams& p);

// All sign-balanced partitions of the leaves of the given trees.
std::vector<OverPairing> enumerate_over_pairings(const std::vector<SignedTree>& trees);

// Regular over-garden: some pairing refinement is a regular multi-couple and
// every leaf of a block of size >= 4 is the lone leaf of a regular tree.
bool classify_over_garden(const std::vector<SignedTree>& trees, const OverPairing& op);

// All refinements of the over-pairing into opposite-sign leaf pairs, as
// gardens over the same trees.
std::vector<Garden> over_pairing_refinements(const std::vector<SignedTree>& trees,
                                             const OverPairing& op);

}  // namespace wkt
