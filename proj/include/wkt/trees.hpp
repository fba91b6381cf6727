#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wkt/rng.hpp"

namespace wkt {

// Ordered ternary tree with a root sign; node signs follow the child rule
// (z, -z, z). Nodes are stored in preorder, node 0 is the root.
struct SignedTree {
  struct Node {
    int parent = -1;
    std::array<int, 3> child{{-1, -1, -1}};
  };
  std::vector<Node> nodes;
  int sign = +1;

  static SignedTree trivial(int sign);

  bool is_leaf(int v) const { return nodes[v].child[0] < 0; }
  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int scale() const;                    // number of branching nodes
  std::vector<int> leaves() const;      // leaf node ids, preorder
  std::vector<int> node_signs() const;  // +1/-1 per node id
  std::vector<int> subtree_leaf_counts() const;

  // canonical shape encoding (preorder, 'b' branching / 'o' leaf) with sign
  std::string encode() const;
  friend bool operator==(const SignedTree& a, const SignedTree& b) {
    return a.sign == b.sign && a.encode() == b.encode();
  }
};

// All distinct ordered ternary trees of the given scale; count is the
// ternary Catalan number C(3n, n)/(2n+1).
std::vector<SignedTree> enumerate_trees(int scale, int sign, int cap = 7);
std::uint64_t ternary_catalan(int n);

SignedTree random_tree(int scale, int sign, CounterRng& rng, int cap = 7);

struct SecondMaxCheck {
  std::uint64_t product = 1;  // prod over branching nodes of the second max
  bool holds = true;          // product <= 3^n / (2n+1), checked in integers
};
SecondMaxCheck second_max_product(const SignedTree& t);

}  // namespace wkt
