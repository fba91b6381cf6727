#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "wkt/garden.hpp"

using namespace wkt;

namespace {

// independent brute-force scan for irregular chains: test all descending node
// sequences against the definition, then keep the maximal ones
std::vector<std::vector<NodeRef>> chains_oracle(const Garden& g) {
  const auto link_ok = [&](int t, int n, int c) {
    const auto& tr = g.trees[t];
    if (tr.is_leaf(n) || tr.is_leaf(c)) return false;
    bool is_child = false;
    int leaf_children = 0;
    for (int s = 0; s < 3; ++s) {
      if (tr.nodes[n].child[s] == c) is_child = true;
      if (tr.is_leaf(tr.nodes[n].child[s])) ++leaf_children;
    }
    if (!is_child || leaf_children != 2) return false;
    const auto signs = tr.node_signs();
    for (int s = 0; s < 3; ++s) {
      const int m = tr.nodes[n].child[s];
      if (!tr.is_leaf(m) || signs[m] != -signs[c]) continue;
      const int partner = g.pair_of[g.leaf_gid(t, m)];
      const auto [pt, pv] = g.leaf_location(partner);
      if (pt == t && g.trees[t].nodes[pv].parent == c) return true;
    }
    return false;
  };
  // collect all maximal descending link paths
  std::vector<std::vector<NodeRef>> all;
  for (int t = 0; t < g.width(); ++t)
    for (int n = 0; n < g.trees[t].n_nodes(); ++n) {
      // must not be extendable upward
      const int par = g.trees[t].nodes[n].parent;
      if (par >= 0 && link_ok(t, par, n)) continue;
      std::vector<NodeRef> chain = {{t, n}};
      int cur = n;
      while (true) {
        int next = -1;
        for (int s = 0; s < 3; ++s) {
          const int c = g.trees[t].nodes[cur].child[s];
          if (c >= 0 && link_ok(t, cur, c)) next = c;
        }
        if (next < 0) break;
        chain.push_back({t, next});
        cur = next;
      }
      if (chain.size() >= 2) all.push_back(chain);
    }
  return all;
}

}  // namespace

TEST_CASE("tree enumeration matches the ternary Catalan numbers") {
  const std::uint64_t expect[] = {1, 1, 3, 12, 55, 273, 1428};
  for (int n = 0; n <= 6; ++n) {
    CHECK(enumerate_trees(n, +1).size() == expect[n]);
    CHECK(ternary_catalan(n) == expect[n]);
  }
  // distinctness
  std::set<std::string> seen;
  for (const auto& t : enumerate_trees(4, +1)) seen.insert(t.encode());
  CHECK(seen.size() == 55);
  CHECK_THROWS(enumerate_trees(9, +1));
}

TEST_CASE("tree bookkeeping") {
  for (int n = 0; n <= 4; ++n)
    for (const auto& t : enumerate_trees(n, -1)) {
      CHECK(t.scale() == n);
      CHECK(static_cast<int>(t.leaves().size()) == 2 * n + 1);
      CHECK(t.n_nodes() == 3 * n + 1);
      // sign rule (z, -z, z) at every branching node
      const auto s = t.node_signs();
      for (int v = 0; v < t.n_nodes(); ++v) {
        if (t.is_leaf(v)) continue;
        CHECK(s[t.nodes[v].child[0]] == s[v]);
        CHECK(s[t.nodes[v].child[1]] == -s[v]);
        CHECK(s[t.nodes[v].child[2]] == s[v]);
      }
    }
}

TEST_CASE("second max product bound") {
  // n = 1: product 1, bound 3/3 = 1 (equality)
  const auto t1 = enumerate_trees(1, +1)[0];
  CHECK(second_max_product(t1).product == 1);
  CHECK(second_max_product(t1).holds);
  // trivial tree: empty product
  CHECK(second_max_product(SignedTree::trivial(+1)).product == 1);
  // exhaustive for scale <= 5
  for (int n = 0; n <= 5; ++n)
    for (const auto& t : enumerate_trees(n, +1)) CHECK(second_max_product(t).holds);
}

TEST_CASE("garden enumeration small counts") {
  CHECK(enumerate_gardens({0, 0}, {+1, -1}).size() == 1);  // the trivial couple
  CHECK(enumerate_gardens({1, 0}, {+1, -1}).size() == 2);  // two sign matchings
  CHECK(enumerate_gardens({1, 0}, {+1, +1}).empty());      // unbalanced signs
  for (const auto& g : enumerate_gardens({1, 1}, {+1, -1})) g.validate();
  CHECK(enumerate_gardens({1, 1}, {+1, -1}).size() == 6);  // 3! matchings of (3+,3-)
}

TEST_CASE("classification") {
  SUBCASE("trivial garden is a regular multi-couple") {
    for (int R : {1, 2, 3}) {
      const auto cls = classify(Garden::trivial_garden(R));
      CHECK(cls.is_regular_multi_couple);
      CHECK(cls.is_multi_couple);
      CHECK(!cls.is_mixed);
    }
  }
  SUBCASE("mini couples are regular couples") {
    const Garden g = Garden::trivial_garden(1);
    for (int code = 0; code < mini_couple_codes(g, 0); ++code) {
      const Garden mc = insert_mini_couple(g, 0, code);
      const auto cls = classify(mc);
      CHECK(cls.is_couple);
      CHECK(cls.is_regular_couple);
      CHECK(mc.scale() == 2);
    }
  }
  SUBCASE("width-4 scale-1 cross-paired garden is mixed") {
    // one scale-1 tree, three trivial trees, the three leaves paired across
    Garden g;
    g.trees.push_back(enumerate_trees(1, +1)[0]);  // leaves (+,-,+)
    g.trees.push_back(SignedTree::trivial(-1));
    g.trees.push_back(SignedTree::trivial(+1));
    g.trees.push_back(SignedTree::trivial(-1));
    g.pair_of = {3, 4, 5, 0, 1, 2};
    g.validate();
    const auto cls = classify(g);
    CHECK(cls.is_mixed);
    CHECK(!cls.is_multi_couple);
  }
}

TEST_CASE("skeleton") {
  CounterRng rng(31, 0);
  SUBCASE("prime garden maps to itself with empty log") {
    const Garden g = Garden::trivial_garden(2);
    const auto dec = decompose(g);
    CHECK(dec.skeleton == g);
    CHECK(dec.log.empty());
  }
  SUBCASE("insertion steps collapse back") {
    Garden g = Garden::trivial_garden(1);
    g = insert_mini_couple(g, 0, 1);
    g = insert_mini_tree(g, 0, 2, 3);
    const Garden sk = skeleton(g);
    for (const auto& t : sk.trees) CHECK(t.scale() == 0);
  }
  SUBCASE("regular multi-couples reduce to the trivial garden, and only they do") {
    for (int trial = 0; trial < 60; ++trial) {
      const Garden g = random_garden({1, 1, 1, 0}, {+1, -1, -1, +1}, rng);
      const auto cls = classify(g);
      const Garden sk = skeleton(g);
      bool trivial = true;
      for (const auto& t : sk.trees)
        if (t.scale() != 0) trivial = false;
      CHECK(trivial == cls.is_regular_multi_couple);
    }
  }
  SUBCASE("confluence under random reduction orders") {
    for (int trial = 0; trial < 300; ++trial) {
      const Garden g = random_garden({2, 1, 1, 0}, {+1, -1, +1, -1}, rng);
      CounterRng r1(5, trial), r2(977, trial);
      CHECK(skeleton(g, &r1) == skeleton(g, &r2));
    }
  }
}

TEST_CASE("decompose and expand are inverse") {
  CounterRng rng(47, 0);
  int nontrivial = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::vector<int> scales = {static_cast<int>(rng.uniform() * 3),
                                     static_cast<int>(rng.uniform() * 2),
                                     static_cast<int>(rng.uniform() * 2),
                                     static_cast<int>(rng.uniform() * 2)};
    const Garden g = random_garden(scales, {+1, -1, +1, -1}, rng);
    const auto dec = decompose(g);
    if (!dec.log.empty()) ++nontrivial;
    const Garden back = expand_skeleton(dec.skeleton, dec.tree_at, dec.couple_at);
    CHECK(back == g);
  }
  CHECK(nontrivial > 10);  // the sample actually exercises reductions
}

TEST_CASE("expand rejects non-regular attachments") {
  const Garden sk = Garden::trivial_garden(1);
  // a couple of two scale-1 trees with a sibling pairing is not regular
  Garden bad;
  bad.trees = {enumerate_trees(1, +1)[0], enumerate_trees(1, -1)[0]};
  // leaves: (+,-,+) then (-,+,-): sibling pairings are legal but irreducible
  bad.pair_of = {3, 2, 1, 0, 5, 4};
  bad.validate();
  CHECK(!couple_regular(bad));
  std::map<std::pair<int, int>, Garden> couple_at;
  couple_at[{0, 1}] = bad;
  CHECK_THROWS(expand_skeleton(sk, {}, couple_at));
}

TEST_CASE("regular couple counts") {
  const auto counts = count_regular_couples(6);
  REQUIRE(counts.size() == 4);
  CHECK(counts[0] == 1);
  // scale 2: two mini-couple codes at the pair, six mini-tree codes at each
  // of the two nodes
  CHECK(counts[1] == 2 + 2 * 6);

  // brute force: all couples of scale 2, count the ones with trivial skeleton
  std::uint64_t brute2 = 0;
  for (const auto& scales : std::vector<std::vector<int>>{{2, 0}, {1, 1}, {0, 2}})
    for (const auto& g : enumerate_gardens(scales, {+1, -1}))
      if (classify(g).is_regular_couple) ++brute2;
  CHECK(brute2 == counts[1]);

  // growth stays exponential-looking: ratios bounded
  CHECK(counts[2] > 0);
  CHECK(counts[3] > 0);
  const double r1 = static_cast<double>(counts[2]) / counts[1];
  const double r2 = static_cast<double>(counts[3]) / counts[2];
  CHECK(r2 < 3.0 * r1);
}

TEST_CASE("mini pattern code counts") {
  const Garden g = Garden::trivial_garden(1);
  CHECK(mini_couple_codes(g, 0) == 2);
  CHECK(mini_tree_codes(g, 0, 0) == 6);
  CHECK(mini_tree_codes(g, 1, 0) == 6);
}

TEST_CASE("irregular chains") {
  SUBCASE("trivial couple has none") {
    CHECK(find_irregular_chains(Garden::trivial_garden(1)).empty());
  }
  SUBCASE("oracle equivalence and disjointness on random gardens") {
    CounterRng rng(53, 0);
    for (int trial = 0; trial < 200; ++trial) {
      const std::vector<int> scales = {static_cast<int>(rng.uniform() * 4),
                                       static_cast<int>(rng.uniform() * 3)};
      Garden g;
      try {
        g = random_garden(scales, {+1, -1}, rng);
      } catch (const std::exception&) {
        continue;  // unbalanced sign draw
      }
      auto got = find_irregular_chains(g);
      auto want = chains_oracle(g);
      const auto key = [](const std::vector<NodeRef>& c) {
        std::string s;
        for (const auto& n : c) s += std::to_string(n.tree) + ":" + std::to_string(n.node) + ",";
        return s;
      };
      std::set<std::string> a, b;
      for (const auto& c : got) a.insert(key(c));
      for (const auto& c : want) b.insert(key(c));
      CHECK(a == b);
      // maximal chains are vertex-disjoint
      std::set<std::pair<int, int>> used;
      bool disjoint = true;
      for (const auto& c : got)
        for (const auto& n : c)
          if (!used.insert({n.tree, n.node}).second) disjoint = false;
      CHECK(disjoint);
    }
  }
}

TEST_CASE("serialization") {
  Garden g = Garden::trivial_garden(1);
  g = insert_mini_couple(g, 0, 0);
  const std::string text = g.serialize();
  const Garden back = Garden::parse(text);
  CHECK(back == g);
  // golden form is stable
  const std::string golden =
      "garden 2\n"
      "tree + (o o o)\n"
      "tree - (o o o)\n"
      "pairs 0-3 1-4 2-5\n";
  CHECK(text == golden);
}
