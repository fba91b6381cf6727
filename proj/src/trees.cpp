#include "wkt/trees.hpp"

#include <map>
#include <stdexcept>

namespace wkt {

SignedTree SignedTree::trivial(int sign) {
  SignedTree t;
  t.nodes.resize(1);
  t.sign = sign;
  return t;
}

int SignedTree::scale() const {
  int n = 0;
  for (int v = 0; v < n_nodes(); ++v)
    if (!is_leaf(v)) ++n;
  return n;
}

std::vector<int> SignedTree::leaves() const {
  std::vector<int> out;
  for (int v = 0; v < n_nodes(); ++v)
    if (is_leaf(v)) out.push_back(v);
  return out;
}

std::vector<int> SignedTree::node_signs() const {
  std::vector<int> s(nodes.size());
  s[0] = sign;
  for (int v = 0; v < n_nodes(); ++v) {
    if (is_leaf(v)) continue;
    s[nodes[v].child[0]] = s[v];
    s[nodes[v].child[1]] = -s[v];
    s[nodes[v].child[2]] = s[v];
  }
  return s;
}

std::vector<int> SignedTree::subtree_leaf_counts() const {
  std::vector<int> c(nodes.size(), 0);
  for (int v = n_nodes() - 1; v >= 0; --v) {
    if (is_leaf(v))
      c[v] = 1;
    else
      c[v] = c[nodes[v].child[0]] + c[nodes[v].child[1]] + c[nodes[v].child[2]];
  }
  return c;
}

std::string SignedTree::encode() const {
  std::string s(1, sign > 0 ? '+' : '-');
  for (int v = 0; v < n_nodes(); ++v) s += is_leaf(v) ? 'o' : 'b';
  return s;
}

namespace {

// shape = flat preorder node list
using Shape = std::vector<SignedTree::Node>;

// append a subtree shape below the given parent slot
void append_shape(Shape& out, const Shape& sub, int parent, int slot) {
  const int base = static_cast<int>(out.size());
  if (parent >= 0) out[parent].child[slot] = base;
  for (const auto& nd : sub) {
    SignedTree::Node n;
    n.parent = nd.parent < 0 ? parent : nd.parent + base;
    for (int c = 0; c < 3; ++c) n.child[c] = nd.child[c] < 0 ? -1 : nd.child[c] + base;
    out.push_back(n);
  }
}

const std::vector<Shape>& shapes_of(int scale) {
  static std::map<int, std::vector<Shape>> memo;
  auto it = memo.find(scale);
  if (it != memo.end()) return it->second;
  std::vector<Shape> result;
  if (scale == 0) {
    result.push_back(Shape(1));
  } else {
    for (int n1 = 0; n1 <= scale - 1; ++n1)
      for (int n2 = 0; n2 + n1 <= scale - 1; ++n2) {
        const int n3 = scale - 1 - n1 - n2;
        for (const Shape& s1 : shapes_of(n1))
          for (const Shape& s2 : shapes_of(n2))
            for (const Shape& s3 : shapes_of(n3)) {
              Shape sh(1);
              append_shape(sh, s1, 0, 0);
              append_shape(sh, s2, 0, 1);
              append_shape(sh, s3, 0, 2);
              result.push_back(std::move(sh));
            }
      }
  }
  return memo.emplace(scale, std::move(result)).first->second;
}

}  // namespace

std::vector<SignedTree> enumerate_trees(int scale, int sign, int cap) {
  if (scale < 0) throw std::invalid_argument("enumerate_trees: scale >= 0");
  if (scale > cap) throw std::invalid_argument("enumerate_trees: scale exceeds cap");
  std::vector<SignedTree> out;
  for (const Shape& sh : shapes_of(scale)) {
    SignedTree t;
    t.nodes = sh;
    t.sign = sign;
    out.push_back(std::move(t));
  }
  return out;
}

std::uint64_t ternary_catalan(int n) {
  // C(3n, n) / (2n + 1), exact in 128-bit intermediate
  unsigned __int128 num = 1;
  for (int i = 1; i <= n; ++i) {
    num = num * static_cast<unsigned>(2 * n + i);
    num /= static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(num / static_cast<unsigned>(2 * n + 1));
}

SignedTree random_tree(int scale, int sign, CounterRng& rng, int cap) {
  const auto list = enumerate_trees(scale, sign, cap);
  const std::size_t i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(list.size()));
  return list[std::min(i, list.size() - 1)];
}

SecondMaxCheck second_max_product(const SignedTree& t) {
  SecondMaxCheck chk;
  const auto counts = t.subtree_leaf_counts();
  for (int v = 0; v < t.n_nodes(); ++v) {
    if (t.is_leaf(v)) continue;
    int a = counts[t.nodes[v].child[0]];
    int b = counts[t.nodes[v].child[1]];
    int c = counts[t.nodes[v].child[2]];
    // second maximum of the three
    if (a < b) std::swap(a, b);
    if (a < c) std::swap(a, c);
    const int second = std::max(b, c);
    chk.product *= static_cast<std::uint64_t>(second);
  }
  const int n = t.scale();
  unsigned __int128 pow3 = 1;
  for (int i = 0; i < n; ++i) pow3 *= 3;
  chk.holds = static_cast<unsigned __int128>(chk.product) *
                  static_cast<unsigned>(2 * n + 1) <=
              pow3;
  return chk;
}

}  // namespace wkt
