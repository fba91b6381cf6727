#include "wkt/garden.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace wkt {

int Garden::scale() const {
  int m = 0;
  for (const auto& t : trees) m += t.scale();
  return m;
}

std::pair<int, int> Garden::leaf_location(int gid) const {
  int off = 0;
  for (int t = 0; t < width(); ++t) {
    const auto lv = trees[t].leaves();
    if (gid < off + static_cast<int>(lv.size())) return {t, lv[gid - off]};
    off += static_cast<int>(lv.size());
  }
  throw std::out_of_range("Garden::leaf_location");
}

int Garden::leaf_gid(int tree, int node) const {
  int off = 0;
  for (int t = 0; t < tree; ++t) off += static_cast<int>(trees[t].leaves().size());
  const auto lv = trees[tree].leaves();
  for (std::size_t i = 0; i < lv.size(); ++i)
    if (lv[i] == node) return off + static_cast<int>(i);
  throw std::out_of_range("Garden::leaf_gid: not a leaf");
}

std::vector<int> Garden::leaf_signs() const {
  std::vector<int> out;
  for (const auto& t : trees) {
    const auto s = t.node_signs();
    for (int v : t.leaves()) out.push_back(s[v]);
  }
  return out;
}

void Garden::validate() const {
  if (width() % 2 != 0) throw std::invalid_argument("Garden: width must be even");
  int plus = 0;
  for (const auto& t : trees) plus += t.sign > 0 ? 1 : 0;
  if (plus * 2 != width()) throw std::invalid_argument("Garden: signature must have R plus signs");
  const auto signs = leaf_signs();
  if (static_cast<int>(pair_of.size()) != static_cast<int>(signs.size()))
    throw std::invalid_argument("Garden: pairing size mismatch");
  for (int i = 0; i < n_leaves(); ++i) {
    const int j = pair_of[i];
    if (j < 0 || j >= n_leaves() || j == i || pair_of[j] != i)
      throw std::invalid_argument("Garden: pairing is not an involution");
    if (signs[i] + signs[j] != 0)
      throw std::invalid_argument("Garden: paired leaves must have opposite signs");
  }
}

Garden Garden::trivial_garden(int R) {
  Garden g;
  for (int i = 0; i < R; ++i) {
    g.trees.push_back(SignedTree::trivial(+1));
    g.trees.push_back(SignedTree::trivial(-1));
    g.pair_of.push_back(2 * i + 1);
    g.pair_of.push_back(2 * i);
  }
  return g;
}

Garden Garden::couple(const SignedTree& plus, const SignedTree& minus,
                      const std::vector<int>& pair_of) {
  Garden g;
  g.trees = {plus, minus};
  g.pair_of = pair_of;
  g.validate();
  return g;
}

namespace {

void write_sexpr(std::ostream& os, const SignedTree& t, int v) {
  if (t.is_leaf(v)) {
    os << "o";
    return;
  }
  os << "(";
  for (int c = 0; c < 3; ++c) {
    if (c) os << " ";
    write_sexpr(os, t, t.nodes[v].child[c]);
  }
  os << ")";
}

int parse_sexpr(const std::string& s, std::size_t& pos, SignedTree& t, int parent) {
  while (pos < s.size() && s[pos] == ' ') ++pos;
  const int me = t.n_nodes();
  t.nodes.emplace_back();
  t.nodes[me].parent = parent;
  if (pos < s.size() && s[pos] == 'o') {
    ++pos;
    return me;
  }
  if (pos >= s.size() || s[pos] != '(') throw std::invalid_argument("Garden::parse: bad tree");
  ++pos;
  for (int c = 0; c < 3; ++c) t.nodes[me].child[c] = parse_sexpr(s, pos, t, me);
  while (pos < s.size() && s[pos] == ' ') ++pos;
  if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("Garden::parse: bad tree");
  ++pos;
  return me;
}

}  // namespace

std::string Garden::serialize() const {
  std::ostringstream os;
  os << "garden " << width() << "\n";
  for (const auto& t : trees) {
    os << "tree " << (t.sign > 0 ? '+' : '-') << " ";
    write_sexpr(os, t, 0);
    os << "\n";
  }
  os << "pairs";
  for (int i = 0; i < n_leaves(); ++i)
    if (i < pair_of[i]) os << " " << i << "-" << pair_of[i];
  os << "\n";
  return os.str();
}

Garden Garden::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line, word;
  Garden g;
  if (!std::getline(is, line)) throw std::invalid_argument("Garden::parse: empty");
  {
    std::istringstream ls(line);
    ls >> word;
    if (word != "garden") throw std::invalid_argument("Garden::parse: missing header");
  }
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    ls >> word;
    if (word == "tree") {
      std::string sgn;
      ls >> sgn;
      std::string rest;
      std::getline(ls, rest);
      SignedTree t;
      t.sign = sgn == "+" ? +1 : -1;
      std::size_t pos = 0;
      while (pos < rest.size() && rest[pos] == ' ') ++pos;
      parse_sexpr(rest, pos, t, -1);
      g.trees.push_back(std::move(t));
    } else if (word == "pairs") {
      int total = 0;
      for (const auto& t : g.trees) total += static_cast<int>(t.leaves().size());
      g.pair_of.assign(total, -1);
      std::string p;
      while (ls >> p) {
        const auto dash = p.find('-');
        const int a = std::stoi(p.substr(0, dash));
        const int b = std::stoi(p.substr(dash + 1));
        g.pair_of[a] = b;
        g.pair_of[b] = a;
      }
    }
  }
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// mutable workspace for collapse / insertion surgery

namespace {

struct WNode {
  int parent = -1;
  std::array<int, 3> child{{-1, -1, -1}};
  int sign = +1;
  int partner = -1;
  bool alive = true;
  int orig_tree = -1, orig_node = -1;
  int top_tree = -1, top_node = -1;
};

struct Work {
  std::vector<WNode> pool;
  std::vector<int> roots;  // per tree position

  explicit Work(const Garden& g) {
    std::vector<std::vector<int>> ids(g.trees.size());
    for (std::size_t t = 0; t < g.trees.size(); ++t) {
      const auto& tr = g.trees[t];
      ids[t].resize(tr.n_nodes());
      const int base = static_cast<int>(pool.size());
      for (int v = 0; v < tr.n_nodes(); ++v) {
        WNode n;
        n.parent = tr.nodes[v].parent < 0 ? -1 : base + tr.nodes[v].parent;
        for (int c = 0; c < 3; ++c)
          n.child[c] = tr.nodes[v].child[c] < 0 ? -1 : base + tr.nodes[v].child[c];
        n.orig_tree = n.top_tree = static_cast<int>(t);
        n.orig_node = n.top_node = v;
        ids[t][v] = static_cast<int>(pool.size());
        pool.push_back(n);
      }
      pool[base].sign = tr.sign;
      roots.push_back(base);
    }
    for (int gid = 0; gid < g.n_leaves(); ++gid) {
      const auto [t1, v1] = g.leaf_location(gid);
      const auto [t2, v2] = g.leaf_location(g.pair_of[gid]);
      pool[ids[t1][v1]].partner = ids[t2][v2];
    }
    recompute_signs();
  }

  bool is_leaf(int v) const { return pool[v].child[0] < 0; }

  void recompute_signs() {
    for (std::size_t t = 0; t < roots.size(); ++t) {
      // root keeps its sign; propagate (z, -z, z)
      std::vector<int> stack = {roots[t]};
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (is_leaf(v)) continue;
        pool[pool[v].child[0]].sign = pool[v].sign;
        pool[pool[v].child[1]].sign = -pool[v].sign;
        pool[pool[v].child[2]].sign = pool[v].sign;
        for (int c = 0; c < 3; ++c) stack.push_back(pool[v].child[c]);
      }
    }
  }

  int tree_position_of_root(int v) const {
    for (std::size_t t = 0; t < roots.size(); ++t)
      if (roots[t] == v) return static_cast<int>(t);
    return -1;
  }

  // ---- pattern detection -------------------------------------------------

  struct InstanceA {
    int a, b;
  };
  struct InstanceB {
    int a, b, lone;  // lone in 0..4 over slots(a,b)
  };

  std::array<int, 5> slots(int a, int b) const {
    std::array<int, 5> s{};
    int j = 0;
    for (int c = 0; c < 3; ++c)
      if (pool[a].child[c] != b) s[j++] = pool[a].child[c];
    for (int c = 0; c < 3; ++c) s[j++] = pool[b].child[c];
    return s;
  }

  std::vector<InstanceA> detect_mini_couples() const {
    std::vector<InstanceA> out;
    for (int a = 0; a < static_cast<int>(pool.size()); ++a) {
      if (!pool[a].alive || is_leaf(a)) continue;
      bool all_leaf = true;
      for (int c = 0; c < 3; ++c)
        if (!is_leaf(pool[a].child[c])) all_leaf = false;
      if (!all_leaf) continue;
      const int p0 = pool[pool[a].child[0]].partner;
      if (p0 < 0 || pool[p0].parent < 0) continue;
      const int b = pool[p0].parent;
      if (b == a || b <= a) continue;  // dedupe a < b
      if (!pool[b].alive || is_leaf(b)) continue;
      bool ok = true;
      for (int c = 0; c < 3 && ok; ++c)
        if (!is_leaf(pool[b].child[c])) ok = false;
      for (int c = 0; c < 3 && ok; ++c) {
        const int p = pool[pool[a].child[c]].partner;
        if (p < 0 || pool[p].parent != b) ok = false;
      }
      if (ok) out.push_back({a, b});
    }
    return out;
  }

  std::vector<InstanceB> detect_mini_trees() const {
    std::vector<InstanceB> out;
    for (int a = 0; a < static_cast<int>(pool.size()); ++a) {
      if (!pool[a].alive || is_leaf(a)) continue;
      for (int c = 0; c < 3; ++c) {
        const int b = pool[a].child[c];
        if (is_leaf(b)) continue;
        const auto sl = slots(a, b);
        for (int lone = 0; lone < 5; ++lone) {
          bool ok = true;
          for (int s = 0; s < 5 && ok; ++s) {
            if (s == lone) continue;
            const int v = sl[s];
            if (!is_leaf(v)) { ok = false; break; }
            const int p = pool[v].partner;
            bool inside = false;
            for (int s2 = 0; s2 < 5; ++s2)
              if (s2 != lone && sl[s2] == p) inside = true;
            if (!inside) { ok = false; break; }
            // no sibling pairs
            if (pool[p].parent == pool[v].parent) ok = false;
          }
          if (ok) out.push_back({a, b, lone});
        }
      }
    }
    return out;
  }

  // ---- collapse ----------------------------------------------------------

  void collapse_mini_couple(const InstanceA& in) {
    for (int c = 0; c < 3; ++c) {
      pool[pool[in.a].child[c]].alive = false;
      pool[pool[in.b].child[c]].alive = false;
    }
    pool[in.a].child = {{-1, -1, -1}};
    pool[in.b].child = {{-1, -1, -1}};
    pool[in.a].partner = in.b;
    pool[in.b].partner = in.a;
  }

  void collapse_mini_tree(const InstanceB& in) {
    const auto sl = slots(in.a, in.b);
    const int s = sl[in.lone];
    for (int j = 0; j < 5; ++j)
      if (j != in.lone) pool[sl[j]].alive = false;
    pool[in.b].alive = false;
    pool[in.a].alive = false;
    const int parent = pool[in.a].parent;
    pool[s].parent = parent;
    if (parent >= 0) {
      for (int c = 0; c < 3; ++c)
        if (pool[parent].child[c] == in.a) pool[parent].child[c] = s;
    } else {
      roots[tree_position_of_root(in.a)] = s;
    }
    pool[s].top_tree = pool[in.a].top_tree;
    pool[s].top_node = pool[in.a].top_node;
    recompute_signs();
  }

  // ---- freeze ------------------------------------------------------------

  Garden freeze(std::vector<std::pair<int, int>>* pool_of = nullptr) const {
    Garden g;
    std::vector<std::pair<int, int>> where(pool.size(), {-1, -1});
    for (std::size_t t = 0; t < roots.size(); ++t) {
      SignedTree tr;
      tr.sign = pool[roots[t]].sign;
      // preorder copy
      struct Item { int pid, parent, slot; };
      std::vector<Item> stack = {{roots[t], -1, -1}};
      while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const int me = tr.n_nodes();
        tr.nodes.emplace_back();
        tr.nodes[me].parent = it.parent;
        if (it.parent >= 0) tr.nodes[it.parent].child[it.slot] = me;
        where[it.pid] = {static_cast<int>(t), me};
        if (!is_leaf(it.pid))
          for (int c = 2; c >= 0; --c) stack.push_back({pool[it.pid].child[c], me, c});
      }
      g.trees.push_back(std::move(tr));
    }
    // rebuild preorder properly: the stack above emits children in order 0,1,2
    // because we pushed them reversed; pairing next
    int total = 0;
    for (const auto& t : g.trees) total += static_cast<int>(t.leaves().size());
    g.pair_of.assign(total, -1);
    for (int pid = 0; pid < static_cast<int>(pool.size()); ++pid) {
      if (!pool[pid].alive || !is_leaf(pid) || pool[pid].partner < 0) continue;
      const auto [t, v] = where[pid];
      if (t < 0) continue;
      const auto [t2, v2] = where[pool[pid].partner];
      g.pair_of[g.leaf_gid(t, v)] = g.leaf_gid(t2, v2);
    }
    if (pool_of) *pool_of = where;
    g.validate();
    return g;
  }
};

PairedTree extract_paired_tree(const Garden& g, std::pair<int, int> top, std::pair<int, int> lone) {
  const SignedTree& src = g.trees[top.first];
  PairedTree out;
  out.tree.sign = src.node_signs()[top.second];
  std::vector<int> new_id(src.n_nodes(), -1);
  struct Item { int v, parent, slot; };
  std::vector<Item> stack = {{top.second, -1, -1}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const int me = out.tree.n_nodes();
    out.tree.nodes.emplace_back();
    out.tree.nodes[me].parent = it.parent;
    if (it.parent >= 0) out.tree.nodes[it.parent].child[it.slot] = me;
    new_id[it.v] = me;
    const bool prune = (it.v == lone.second);
    if (!prune && !src.is_leaf(it.v))
      for (int c = 2; c >= 0; --c) stack.push_back({src.nodes[it.v].child[c], me, c});
  }
  out.lone_leaf = new_id[lone.second];
  // internal pairs among copied leaves
  for (int v = 0; v < src.n_nodes(); ++v) {
    if (new_id[v] < 0 || v == lone.second || !src.is_leaf(v)) continue;
    if (!out.tree.is_leaf(new_id[v])) continue;
    const int gid = g.leaf_gid(top.first, v);
    const auto [pt, pv] = g.leaf_location(g.pair_of[gid]);
    if (pt != top.first || new_id[pv] < 0)
      throw std::logic_error("extract_paired_tree: pairing leaves the region");
    if (new_id[v] < new_id[pv]) out.pairs.push_back({new_id[v], new_id[pv]});
  }
  return out;
}

Garden extract_couple(const Garden& g, std::pair<int, int> ra, std::pair<int, int> rb) {
  const auto copy_subtree = [&](std::pair<int, int> r, SignedTree& dst, std::vector<int>& id_map) {
    const SignedTree& src = g.trees[r.first];
    dst.sign = src.node_signs()[r.second];
    id_map.assign(src.n_nodes(), -1);
    struct Item { int v, parent, slot; };
    std::vector<Item> stack = {{r.second, -1, -1}};
    while (!stack.empty()) {
      const Item it = stack.back();
      stack.pop_back();
      const int me = dst.n_nodes();
      dst.nodes.emplace_back();
      dst.nodes[me].parent = it.parent;
      if (it.parent >= 0) dst.nodes[it.parent].child[it.slot] = me;
      id_map[it.v] = me;
      if (!src.is_leaf(it.v))
        for (int c = 2; c >= 0; --c) stack.push_back({src.nodes[it.v].child[c], me, c});
    }
  };
  SignedTree ta, tb;
  std::vector<int> ida, idb;
  copy_subtree(ra, ta, ida);
  copy_subtree(rb, tb, idb);
  Garden out;
  if (ta.sign > 0)
    out.trees = {ta, tb};
  else
    out.trees = {tb, ta};
  const bool swapped = !(ta.sign > 0);

  int total = 0;
  for (const auto& t : out.trees) total += static_cast<int>(t.leaves().size());
  out.pair_of.assign(total, -1);
  const auto gid_of = [&](std::pair<int, int> loc) -> int {
    // loc in g -> (tree index in out, node); the two regions are disjoint
    if (loc.first == ra.first && ida[loc.second] >= 0)
      return out.leaf_gid(swapped ? 1 : 0, ida[loc.second]);
    if (loc.first == rb.first && idb[loc.second] >= 0)
      return out.leaf_gid(swapped ? 0 : 1, idb[loc.second]);
    throw std::logic_error("extract_couple: pairing leaves the region");
  };
  for (int v = 0; v < g.trees[ra.first].n_nodes(); ++v) {
    if (ida[v] < 0 || !g.trees[ra.first].is_leaf(v)) continue;
    const int gid = g.leaf_gid(ra.first, v);
    const auto ploc = g.leaf_location(g.pair_of[gid]);
    const int x = gid_of({ra.first, v});
    const int y = gid_of(ploc);
    out.pair_of[x] = y;
    out.pair_of[y] = x;
  }
  for (int v = 0; v < g.trees[rb.first].n_nodes(); ++v) {
    if (idb[v] < 0 || !g.trees[rb.first].is_leaf(v)) continue;
    const int gid = g.leaf_gid(rb.first, v);
    const auto ploc = g.leaf_location(g.pair_of[gid]);
    const int x = gid_of({rb.first, v});
    const int y = gid_of(ploc);
    out.pair_of[x] = y;
    out.pair_of[y] = x;
  }
  out.validate();
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Garden> enumerate_gardens(const std::vector<int>& scales,
                                      const std::vector<int>& signature, std::size_t cap) {
  std::vector<Garden> out;
  for_each_garden(scales, signature, [&](const Garden& g) {
    if (out.size() >= cap) throw std::runtime_error("enumerate_gardens: cap exceeded");
    out.push_back(g);
  });
  return out;
}

void for_each_garden(const std::vector<int>& scales, const std::vector<int>& signature,
                     const std::function<void(const Garden&)>& fn) {
  if (scales.size() != signature.size() || scales.empty())
    throw std::invalid_argument("for_each_garden: scales/signature mismatch");
  const int w = static_cast<int>(scales.size());
  std::vector<std::vector<SignedTree>> lists;
  for (int j = 0; j < w; ++j) lists.push_back(enumerate_trees(scales[j], signature[j]));

  std::vector<std::size_t> pick(w, 0);
  while (true) {
    Garden g;
    for (int j = 0; j < w; ++j) g.trees.push_back(lists[j][pick[j]]);
    const auto signs = g.leaf_signs();
    std::vector<int> plus, minus;
    for (int i = 0; i < static_cast<int>(signs.size()); ++i)
      (signs[i] > 0 ? plus : minus).push_back(i);
    if (plus.size() == minus.size()) {
      std::sort(minus.begin(), minus.end());
      std::vector<int> perm(minus);
      do {
        g.pair_of.assign(signs.size(), -1);
        for (std::size_t i = 0; i < plus.size(); ++i) {
          g.pair_of[plus[i]] = perm[i];
          g.pair_of[perm[i]] = plus[i];
        }
        fn(g);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    int j = 0;
    for (; j < w; ++j) {
      if (++pick[j] < lists[j].size()) break;
      pick[j] = 0;
    }
    if (j == w) break;
  }
}

Garden random_garden(const std::vector<int>& scales, const std::vector<int>& signature,
                     CounterRng& rng) {
  Garden g;
  for (std::size_t j = 0; j < scales.size(); ++j)
    g.trees.push_back(random_tree(scales[j], signature[j], rng));
  const auto signs = g.leaf_signs();
  std::vector<int> plus, minus;
  for (int i = 0; i < static_cast<int>(signs.size()); ++i)
    (signs[i] > 0 ? plus : minus).push_back(i);
  if (plus.size() != minus.size())
    throw std::invalid_argument("random_garden: unbalanced leaf signs");
  for (std::size_t i = minus.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(minus[i - 1], minus[std::min(j, i - 1)]);
  }
  g.pair_of.assign(signs.size(), -1);
  for (std::size_t i = 0; i < plus.size(); ++i) {
    g.pair_of[plus[i]] = minus[i];
    g.pair_of[minus[i]] = plus[i];
  }
  g.validate();
  return g;
}

GardenClass classify(const Garden& g) {
  GardenClass cls;
  cls.is_couple = g.width() == 2;

  // which trees receive each tree's leaf partners; intra-tree pairs count
  const int w = g.width();
  std::vector<std::set<int>> partner_trees(w);
  for (int gid = 0; gid < g.n_leaves(); ++gid) {
    const auto [t, v] = g.leaf_location(gid);
    partner_trees[t].insert(g.leaf_location(g.pair_of[gid]).first);
  }
  // trees j, j' are fully mutually paired when the leaves of their union pair
  // within the union; a tree cannot fully self-pair (odd leaf count), so the
  // candidate partner is unique when it exists
  const auto candidate = [&](int t) {
    std::set<int> others = partner_trees[t];
    others.erase(t);
    return others.size() == 1 ? *others.begin() : -1;
  };
  const auto full_pair = [&](int t, int u) {
    return u >= 0 && u != t && candidate(t) == u && candidate(u) == t;
  };
  bool multi = true;
  for (int t = 0; t < w; ++t)
    if (!full_pair(t, candidate(t))) multi = false;
  cls.is_multi_couple = multi;
  bool any_full_pair = false;
  for (int t = 0; t < w && !any_full_pair; ++t)
    if (full_pair(t, candidate(t))) any_full_pair = true;
  cls.is_mixed = !any_full_pair;

  Work work(g);
  cls.is_prime = work.detect_mini_couples().empty() && work.detect_mini_trees().empty();

  const Garden sk = skeleton(g);
  bool sk_trivial = true;
  for (const auto& t : sk.trees)
    if (t.scale() != 0) sk_trivial = false;
  cls.is_regular_multi_couple = sk_trivial;
  cls.is_regular_couple = sk_trivial && cls.is_couple;
  return cls;
}

PairedTree PairedTree::trivial(int sign) {
  PairedTree pt;
  pt.tree = SignedTree::trivial(sign);
  pt.lone_leaf = 0;
  return pt;
}

bool PairedTree::regular() const {
  // forms a couple with the trivial tree of the opposite sign
  Garden c;
  const SignedTree triv = SignedTree::trivial(-tree.sign);
  if (tree.sign > 0)
    c.trees = {tree, triv};
  else
    c.trees = {triv, tree};
  int total = static_cast<int>(tree.leaves().size()) + 1;
  c.pair_of.assign(total, -1);
  const int tree_idx = tree.sign > 0 ? 0 : 1;
  const int triv_gid = c.leaf_gid(1 - tree_idx, 0);
  const int lone_gid = c.leaf_gid(tree_idx, lone_leaf);
  c.pair_of[triv_gid] = lone_gid;
  c.pair_of[lone_gid] = triv_gid;
  for (const auto& [x, y] : pairs) {
    const int a = c.leaf_gid(tree_idx, x);
    const int b = c.leaf_gid(tree_idx, y);
    c.pair_of[a] = b;
    c.pair_of[b] = a;
  }
  c.validate();
  return couple_regular(c);
}

bool couple_regular(const Garden& couple) {
  if (couple.width() != 2) return false;
  const Garden sk = skeleton(couple);
  for (const auto& t : sk.trees)
    if (t.scale() != 0) return false;
  return true;
}

Decomposition decompose(const Garden& g, CounterRng* rng) {
  g.validate();
  Work work(g);
  Decomposition dec;
  while (true) {
    const auto as = work.detect_mini_couples();
    const auto bs = work.detect_mini_trees();
    const std::size_t total = as.size() + bs.size();
    if (total == 0) break;
    std::size_t pick = 0;
    if (rng) pick = std::min<std::size_t>(total - 1, static_cast<std::size_t>(rng->uniform() * total));
    if (pick < as.size()) {
      work.collapse_mini_couple(as[pick]);
      dec.log.push_back("collapse mini-couple");
    } else {
      work.collapse_mini_tree(bs[pick - as.size()]);
      dec.log.push_back("collapse mini-tree");
    }
  }
  std::vector<std::pair<int, int>> where;
  dec.skeleton = work.freeze(&where);

  // attachments from the provenance tracking
  for (int pid = 0; pid < static_cast<int>(work.pool.size()); ++pid) {
    const WNode& n = work.pool[pid];
    if (!n.alive || where[pid].first < 0) continue;
    const std::pair<int, int> at = where[pid];
    if (!work.is_leaf(pid)) {
      if (n.top_tree != n.orig_tree || n.top_node != n.orig_node)
        dec.tree_at[at] =
            extract_paired_tree(g, {n.top_tree, n.top_node}, {n.orig_tree, n.orig_node});
      continue;
    }
    const int qid = n.partner;
    const WNode& q = work.pool[qid];
    const int gid_p = dec.skeleton.leaf_gid(at.first, at.second);
    const int gid_q = dec.skeleton.leaf_gid(where[qid].first, where[qid].second);
    if (gid_p > gid_q) continue;  // handle each pair once
    const bool p_triv = g.trees[n.top_tree].is_leaf(n.top_node);
    const bool q_triv = g.trees[q.top_tree].is_leaf(q.top_node);
    if (p_triv && q_triv) continue;  // trivial couple attachment
    dec.couple_at[{gid_p, gid_q}] =
        extract_couple(g, {n.top_tree, n.top_node}, {q.top_tree, q.top_node});
  }
  return dec;
}

Garden expand_skeleton(const Garden& sk,
                       const std::map<std::pair<int, int>, PairedTree>& tree_at,
                       const std::map<std::pair<int, int>, Garden>& couple_at) {
  sk.validate();
  for (const auto& [k, pt] : tree_at)
    if (!pt.regular()) throw std::invalid_argument("expand_skeleton: non-regular tree attachment");
  for (const auto& [k, c] : couple_at)
    if (!couple_regular(c))
      throw std::invalid_argument("expand_skeleton: non-regular couple attachment");

  Work work(sk);
  // pool ids of sk nodes: construction order is tree-major preorder
  std::vector<std::vector<int>> pid_of(sk.trees.size());
  {
    int next = 0;
    for (std::size_t t = 0; t < sk.trees.size(); ++t) {
      pid_of[t].resize(sk.trees[t].n_nodes());
      for (int v = 0; v < sk.trees[t].n_nodes(); ++v) pid_of[t][v] = next++;
    }
  }

  const auto add_tree = [&](const SignedTree& t, int at_parent, int at_slot,
                            std::vector<int>& new_ids) {
    new_ids.assign(t.n_nodes(), -1);
    for (int v = 0; v < t.n_nodes(); ++v) {
      WNode n;
      n.orig_tree = n.top_tree = -1;
      new_ids[v] = static_cast<int>(work.pool.size());
      work.pool.push_back(n);
    }
    for (int v = 0; v < t.n_nodes(); ++v) {
      WNode& n = work.pool[new_ids[v]];
      n.parent = t.nodes[v].parent < 0 ? at_parent : new_ids[t.nodes[v].parent];
      for (int c = 0; c < 3; ++c)
        n.child[c] = t.nodes[v].child[c] < 0 ? -1 : new_ids[t.nodes[v].child[c]];
    }
    if (at_parent >= 0) work.pool[at_parent].child[at_slot] = new_ids[0];
  };

  // regular trees above branching nodes
  for (const auto& [key, att] : tree_at) {
    if (att.is_trivial()) continue;
    const int v = pid_of[key.first][key.second];
    if (work.is_leaf(v)) throw std::invalid_argument("expand_skeleton: tree attachment at a leaf");
    const int parent = work.pool[v].parent;
    int slot = -1;
    if (parent >= 0)
      for (int c = 0; c < 3; ++c)
        if (work.pool[parent].child[c] == v) slot = c;
    std::vector<int> ids;
    add_tree(att.tree, parent, slot, ids);
    if (parent < 0) work.roots[work.tree_position_of_root(v)] = ids[0];
    work.pool[ids[0]].sign = work.pool[v].sign;
    // v takes the lone leaf position
    const int lone = ids[att.lone_leaf];
    const int lp = work.pool[lone].parent;
    for (int c = 0; c < 3; ++c)
      if (work.pool[lp].child[c] == lone) work.pool[lp].child[c] = v;
    work.pool[lone].alive = false;
    work.pool[v].parent = lp;
    for (const auto& [x, y] : att.pairs) {
      work.pool[ids[x]].partner = ids[y];
      work.pool[ids[y]].partner = ids[x];
    }
  }

  // regular couples at leaf pairs
  for (const auto& [key, att] : couple_at) {
    const auto [ta, va] = sk.leaf_location(key.first);
    const auto [tb, vb] = sk.leaf_location(key.second);
    int pa = pid_of[ta][va], pb = pid_of[tb][vb];
    if (work.pool[pa].sign < 0) std::swap(pa, pb);
    // att.trees[0] has sign +, trees[1] has sign -
    const SignedTree& plus = att.trees[0];
    const SignedTree& minus = att.trees[1];
    if (plus.n_nodes() == 1 && minus.n_nodes() == 1) continue;  // trivial couple
    std::vector<int> idp, idm;
    const auto splice = [&](const SignedTree& t, int v, std::vector<int>& ids) {
      const int parent = work.pool[v].parent;
      int slot = -1;
      if (parent >= 0)
        for (int c = 0; c < 3; ++c)
          if (work.pool[parent].child[c] == v) slot = c;
      add_tree(t, parent, slot, ids);
      if (parent < 0) work.roots[work.tree_position_of_root(v)] = ids[0];
      work.pool[ids[0]].sign = work.pool[v].sign;
      work.pool[v].alive = false;
    };
    splice(plus, pa, idp);
    splice(minus, pb, idm);
    // partner links across the couple
    for (int gid = 0; gid < att.n_leaves(); ++gid) {
      const int gid2 = att.pair_of[gid];
      if (gid > gid2) continue;
      const auto [t1, v1] = att.leaf_location(gid);
      const auto [t2, v2] = att.leaf_location(gid2);
      const int w1 = (t1 == 0 ? idp : idm)[v1];
      const int w2 = (t2 == 0 ? idp : idm)[v2];
      work.pool[w1].partner = w2;
      work.pool[w2].partner = w1;
    }
  }

  work.recompute_signs();
  return work.freeze();
}

int mini_couple_codes(const Garden&, int) {
  return 2;  // two sign-respecting non-sibling cross matchings
}

Garden insert_mini_couple(const Garden& g, int leaf_gid, int code) {
  const int partner_gid = g.pair_of[leaf_gid];
  // build the couple attachment: a (1,1)-mini couple with the chosen pairing
  SignedTree tp, tm;
  tp.sign = +1;
  tm.sign = -1;
  tp.nodes.resize(4);
  tm.nodes.resize(4);
  for (int c = 0; c < 3; ++c) {
    tp.nodes[0].child[c] = c + 1;
    tp.nodes[c + 1].parent = 0;
    tm.nodes[0].child[c] = c + 1;
    tm.nodes[c + 1].parent = 0;
  }
  // + tree leaves signs (+,-,+); - tree (-,+,-). Cross matchings: mid<->mid
  // forced, outer pair two ways.
  Garden couple;
  couple.trees = {tp, tm};
  couple.pair_of.assign(6, -1);
  const auto link = [&](int a, int b) {
    couple.pair_of[a] = b;
    couple.pair_of[b] = a;
  };
  link(1, 4);  // the two mid leaves (gids: +tree leaves 0,1,2; -tree 3,4,5)
  if (code % 2 == 0) {
    link(0, 3);
    link(2, 5);
  } else {
    link(0, 5);
    link(2, 3);
  }
  couple.validate();

  std::map<std::pair<int, int>, Garden> couple_at;
  const int a = std::min(leaf_gid, partner_gid), b = std::max(leaf_gid, partner_gid);
  couple_at[{a, b}] = couple;
  return expand_skeleton(g, {}, couple_at);
}

namespace {

// the six valid (branch position, lone slot, pairing) mini-tree patterns for
// a given root sign, enumerated programmatically
struct MiniTreePattern {
  PairedTree pt;
};

std::vector<MiniTreePattern> mini_tree_patterns(int root_sign) {
  std::vector<MiniTreePattern> out;
  for (int pb = 0; pb < 3; ++pb) {
    SignedTree t;
    t.sign = root_sign;
    t.nodes.resize(1);
    for (int c = 0; c < 3; ++c) {
      const int me = t.n_nodes();
      t.nodes.emplace_back();
      t.nodes[me].parent = 0;
      t.nodes[0].child[c] = me;
      if (c == pb) {
        for (int cc = 0; cc < 3; ++cc) {
          const int kid = t.n_nodes();
          t.nodes.emplace_back();
          t.nodes[kid].parent = me;
          t.nodes[me].child[cc] = kid;
        }
      }
    }
    const auto signs = t.node_signs();
    const auto leaves = t.leaves();  // 5 leaves
    for (std::size_t lone = 0; lone < leaves.size(); ++lone) {
      if (signs[leaves[lone]] != root_sign) continue;  // subtree must keep its sign
      std::vector<int> rest;
      for (std::size_t i = 0; i < leaves.size(); ++i)
        if (i != lone) rest.push_back(leaves[i]);
      // split rest into 2 opposite-sign non-sibling pairs
      for (int first_mate = 1; first_mate < 4; ++first_mate) {
        const int a = rest[0], b = rest[first_mate];
        std::vector<int> others;
        for (int i = 1; i < 4; ++i)
          if (i != first_mate) others.push_back(rest[i]);
        const int c = others[0], d = others[1];
        const auto valid_pair = [&](int x, int y) {
          return signs[x] + signs[y] == 0 && t.nodes[x].parent != t.nodes[y].parent;
        };
        if (!valid_pair(a, b) || !valid_pair(c, d)) continue;
        MiniTreePattern p;
        p.pt.tree = t;
        p.pt.lone_leaf = leaves[lone];
        p.pt.pairs = {{std::min(a, b), std::max(a, b)}, {std::min(c, d), std::max(c, d)}};
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

}  // namespace

int mini_tree_codes(const Garden& g, int tree, int node) {
  const int sign = g.trees[tree].node_signs()[node];
  return static_cast<int>(mini_tree_patterns(sign).size());
}

Garden insert_mini_tree(const Garden& g, int tree, int node, int code) {
  const int sign = g.trees[tree].node_signs()[node];
  const auto pats = mini_tree_patterns(sign);
  const PairedTree& pt = pats.at(static_cast<std::size_t>(code)).pt;

  if (!g.trees[tree].is_leaf(node)) {
    std::map<std::pair<int, int>, PairedTree> tree_at;
    tree_at[{tree, node}] = pt;
    return expand_skeleton(g, tree_at, {});
  }
  // inserting at a leaf: splice by hand (expand_skeleton only attaches trees
  // at branching nodes)
  Work work(g);
  int pid = -1;
  for (int p = 0; p < static_cast<int>(work.pool.size()); ++p)
    if (work.pool[p].orig_tree == tree && work.pool[p].orig_node == node) pid = p;
  const int parent = work.pool[pid].parent;
  int slot = -1;
  if (parent >= 0)
    for (int c = 0; c < 3; ++c)
      if (work.pool[parent].child[c] == pid) slot = c;
  std::vector<int> ids(pt.tree.n_nodes(), -1);
  for (int v = 0; v < pt.tree.n_nodes(); ++v) {
    WNode n;
    ids[v] = static_cast<int>(work.pool.size());
    work.pool.push_back(n);
  }
  for (int v = 0; v < pt.tree.n_nodes(); ++v) {
    WNode& n = work.pool[ids[v]];
    n.parent = pt.tree.nodes[v].parent < 0 ? parent : ids[pt.tree.nodes[v].parent];
    for (int c = 0; c < 3; ++c)
      n.child[c] = pt.tree.nodes[v].child[c] < 0 ? -1 : ids[pt.tree.nodes[v].child[c]];
  }
  if (parent >= 0)
    work.pool[parent].child[slot] = ids[0];
  else
    work.roots[work.tree_position_of_root(pid)] = ids[0];
  work.pool[ids[0]].sign = work.pool[pid].sign;
  const int lone = ids[pt.lone_leaf];
  const int lp = work.pool[lone].parent;
  for (int c = 0; c < 3; ++c)
    if (work.pool[lp].child[c] == lone) work.pool[lp].child[c] = pid;
  work.pool[lone].alive = false;
  work.pool[pid].parent = lp;
  for (const auto& [x, y] : pt.pairs) {
    work.pool[ids[x]].partner = ids[y];
    work.pool[ids[y]].partner = ids[x];
  }
  work.recompute_signs();
  return work.freeze();
}

std::vector<std::uint64_t> count_regular_couples(int max_scale) {
  std::vector<std::uint64_t> counts;
  std::vector<Garden> level = {Garden::trivial_garden(1)};
  counts.push_back(1);
  for (int m = 2; m <= max_scale; m += 2) {
    std::unordered_set<std::string> seen;
    std::vector<Garden> next;
    for (const Garden& g : level) {
      for (int gid = 0; gid < g.n_leaves(); ++gid) {
        if (gid > g.pair_of[gid]) continue;
        for (int code = 0; code < mini_couple_codes(g, gid); ++code) {
          Garden h = insert_mini_couple(g, gid, code);
          if (seen.insert(h.serialize()).second) next.push_back(std::move(h));
        }
      }
      for (int t = 0; t < g.width(); ++t)
        for (int v = 0; v < g.trees[t].n_nodes(); ++v)
          for (int code = 0; code < mini_tree_codes(g, t, v); ++code) {
            Garden h = insert_mini_tree(g, t, v, code);
            if (seen.insert(h.serialize()).second) next.push_back(std::move(h));
          }
    }
    counts.push_back(static_cast<std::uint64_t>(next.size()));
    level = std::move(next);
  }
  return counts;
}

std::vector<Garden> list_regular_couples(int scale) {
  std::vector<Garden> level = {Garden::trivial_garden(1)};
  for (int m = 2; m <= scale; m += 2) {
    std::unordered_set<std::string> seen;
    std::vector<Garden> next;
    for (const Garden& g : level) {
      for (int gid = 0; gid < g.n_leaves(); ++gid) {
        if (gid > g.pair_of[gid]) continue;
        for (int code = 0; code < mini_couple_codes(g, gid); ++code) {
          Garden h = insert_mini_couple(g, gid, code);
          if (seen.insert(h.serialize()).second) next.push_back(std::move(h));
        }
      }
      for (int t = 0; t < g.width(); ++t)
        for (int v = 0; v < g.trees[t].n_nodes(); ++v)
          for (int code = 0; code < mini_tree_codes(g, t, v); ++code) {
            Garden h = insert_mini_tree(g, t, v, code);
            if (seen.insert(h.serialize()).second) next.push_back(std::move(h));
          }
    }
    level = std::move(next);
  }
  return level;
}

std::vector<std::vector<NodeRef>> find_irregular_chains(const Garden& g) {
  // link (t, n) -> its unique branching child when the chain conditions hold
  std::map<NodeRef, NodeRef> next_of;
  std::set<NodeRef> has_pred;
  for (int t = 0; t < g.width(); ++t) {
    const auto& tr = g.trees[t];
    const auto signs = tr.node_signs();
    for (int n = 0; n < tr.n_nodes(); ++n) {
      if (tr.is_leaf(n)) continue;
      int branching_child = -1, leaf_count = 0;
      for (int c = 0; c < 3; ++c) {
        const int ch = tr.nodes[n].child[c];
        if (tr.is_leaf(ch))
          ++leaf_count;
        else
          branching_child = ch;
      }
      if (leaf_count != 2 || branching_child < 0) continue;
      bool link = false;
      for (int c = 0; c < 3 && !link; ++c) {
        const int m = tr.nodes[n].child[c];
        if (!tr.is_leaf(m) || signs[m] != -signs[branching_child]) continue;
        const int partner = g.pair_of[g.leaf_gid(t, m)];
        const auto [pt, pv] = g.leaf_location(partner);
        if (pt == t && tr.nodes[pv].parent == branching_child) link = true;
      }
      if (link) {
        next_of[{t, n}] = {t, branching_child};
        has_pred.insert({t, branching_child});
      }
    }
  }
  std::vector<std::vector<NodeRef>> chains;
  for (const auto& [start, first] : next_of) {
    if (has_pred.count(start)) continue;  // not maximal upward
    std::vector<NodeRef> chain = {start};
    NodeRef cur = start;
    while (true) {
      auto it = next_of.find(cur);
      if (it == next_of.end()) break;
      cur = it->second;
      chain.push_back(cur);
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace wkt
