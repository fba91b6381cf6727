#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wkt/trees.hpp"

namespace wkt {

// Ordered collection of 2R signed trees with all leaves partitioned into
// opposite-sign pairs. Leaves are globally indexed tree-major in preorder.
struct Garden {
  std::vector<SignedTree> trees;
  std::vector<int> pair_of;  // partner global leaf id, involution

  int width() const { return static_cast<int>(trees.size()); }
  int scale() const;
  int n_leaves() const { return static_cast<int>(pair_of.size()); }

  // global leaf id <-> (tree, node)
  std::pair<int, int> leaf_location(int gid) const;
  int leaf_gid(int tree, int node) const;
  std::vector<int> leaf_signs() const;  // per global leaf id

  void validate() const;  // signature balance, pairing involution, signs
  std::string serialize() const;
  static Garden parse(const std::string& text);
  friend bool operator==(const Garden& a, const Garden& b) {
    return a.pair_of == b.pair_of && a.trees == b.trees;
  }

  static Garden trivial_garden(int R);  // R trivial couples
  static Garden couple(const SignedTree& plus, const SignedTree& minus,
                       const std::vector<int>& pair_of);
};

// All gardens with the given per-tree scales and signature. Throws if the
// enumeration would exceed the cap.
std::vector<Garden> enumerate_gardens(const std::vector<int>& scales,
                                      const std::vector<int>& signature,
                                      std::size_t cap = 50'000'000);
void for_each_garden(const std::vector<int>& scales, const std::vector<int>& signature,
                     const std::function<void(const Garden&)>& fn);

Garden random_garden(const std::vector<int>& scales, const std::vector<int>& signature,
                     CounterRng& rng);

struct GardenClass {
  bool is_couple = false;
  bool is_multi_couple = false;
  bool is_mixed = false;
  bool is_regular_couple = false;
  bool is_regular_multi_couple = false;
  bool is_prime = false;
};
GardenClass classify(const Garden& g);

// A saturated paired tree: all leaves paired internally except the lone one.
struct PairedTree {
  SignedTree tree;
  std::vector<std::pair<int, int>> pairs;  // node-id pairs within the tree
  int lone_leaf = 0;

  static PairedTree trivial(int sign);
  bool is_trivial() const { return tree.n_nodes() == 1; }
  bool regular() const;  // forms a regular couple with the trivial tree
};

// couple-as-garden regularity
bool couple_regular(const Garden& couple);

struct Decomposition {
  Garden skeleton;
  // attachments keyed by skeleton coordinates
  std::map<std::pair<int, int>, PairedTree> tree_at;  // (tree, node) -> regular tree
  std::map<std::pair<int, int>, Garden> couple_at;    // sorted global-leaf pair -> regular couple
  std::vector<std::string> log;                       // one line per collapse
};

// Unique prime skeleton together with the regular-tree / regular-couple
// attachments reconstructing the garden. rng, when given, randomizes the
// collapse order (the result is order-independent).
Decomposition decompose(const Garden& g, CounterRng* rng = nullptr);
inline Garden skeleton(const Garden& g, CounterRng* rng = nullptr) {
  return decompose(g, rng).skeleton;
}

// Inverse of decompose: rejects non-regular attachments.
Garden expand_skeleton(const Garden& sk,
                       const std::map<std::pair<int, int>, PairedTree>& tree_at,
                       const std::map<std::pair<int, int>, Garden>& couple_at);

// Forward insertion steps. code enumerates the finitely many valid sign /
// pairing patterns (see mini_couple_codes / mini_tree_codes).
int mini_couple_codes(const Garden& g, int leaf_gid);
Garden insert_mini_couple(const Garden& g, int leaf_gid, int code);
int mini_tree_codes(const Garden& g, int tree, int node);
Garden insert_mini_tree(const Garden& g, int tree, int node, int code);

// Breadth-first closure of the trivial couple under the two insertion steps:
// exact counts of regular couples per scale (index = scale / 2).
std::vector<std::uint64_t> count_regular_couples(int max_scale);

// All regular couples of the given scale (small scales only).
std::vector<Garden> list_regular_couples(int scale);

// Maximal irregular chains: descending node sequences (n_0..n_q), q >= 1,
// where each n_{j+1} is the unique branching child of n_j, the other two
// children of n_j are leaves, and one of them has sign opposite to n_{j+1}
// and is paired to a child of n_{j+1}.
struct NodeRef {
  int tree = 0, node = 0;
  friend bool operator==(const NodeRef& a, const NodeRef& b) = default;
  friend auto operator<=>(const NodeRef& a, const NodeRef& b) = default;
};
std::vector<std::vector<NodeRef>> find_irregular_chains(const Garden& g);

}  // namespace wkt
