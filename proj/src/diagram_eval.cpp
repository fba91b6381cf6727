#include "wkt/diagram_eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wkt {

namespace {

constexpr double kPi = 3.14159265358979323846;
using cplx = std::complex<double>;

// exponential-polynomial in one variable: sum c e^{i pi a s} s^m
struct ExpPoly {
  struct Term {
    cplx c;
    double a;
    int m;
  };
  std::vector<Term> terms;

  void add(cplx c, double a, int m) {
    if (c == cplx(0.0, 0.0)) return;
    for (auto& t : terms) {
      if (t.m == m && std::fabs(t.a - a) <= 1e-12 * (1.0 + std::fabs(t.a) + std::fabs(a))) {
        t.c += c;
        return;
      }
    }
    terms.push_back({c, a, m});
  }

  static ExpPoly one() {
    ExpPoly p;
    p.terms.push_back({cplx(1.0, 0.0), 0.0, 0});
    return p;
  }

  ExpPoly mul(const ExpPoly& o) const {
    ExpPoly out;
    for (const auto& x : terms)
      for (const auto& y : o.terms) out.add(x.c * y.c, x.a + y.a, x.m + y.m);
    return out;
  }

  // multiply by e^{i pi a s}
  ExpPoly shift(double a) const {
    ExpPoly out;
    for (const auto& t : terms) out.add(t.c, t.a + a, t.m);
    return out;
  }

  // term-wise antiderivative from 0 to s
  ExpPoly integrate(double series_threshold) const {
    ExpPoly out;
    for (const auto& t : terms) {
      if (std::fabs(t.a) < series_threshold) {
        // int_0^s e^{i pi a tau} tau^m dtau, 8-term series in (i pi a)
        cplx pw(1.0, 0.0);
        for (int j = 0; j < 8; ++j) {
          out.add(t.c * pw / static_cast<double>(t.m + j + 1), 0.0, t.m + j + 1);
          pw *= cplx(0.0, kPi * t.a) / static_cast<double>(j + 1);
        }
      } else {
        // by parts: int e^{c tau} tau^m = e^{c s} sum_{j<=m} (-1)^j m!/(m-j)! s^{m-j}/c^{j+1}
        //           - (-1)^m m!/c^{m+1} at 0
        const cplx c(0.0, kPi * t.a);
        cplx coef = t.c / c;
        for (int j = 0; j <= t.m; ++j) {
          out.add(coef, t.a, t.m - j);
          coef *= -static_cast<double>(t.m - j) / c;
        }
        // lower limit: only the j = m term survives at tau = 0
        cplx lower = t.c / c;
        for (int j = 1; j <= t.m; ++j) lower *= -static_cast<double>(t.m - j + 1) / c;
        out.add(-lower, 0.0, 0);
      }
    }
    return out;
  }

  cplx eval(double s) const {
    cplx v = 0;
    for (const auto& t : terms) v += t.c * std::exp(cplx(0.0, kPi * t.a * s)) * std::pow(s, t.m);
    return v;
  }
};

// F_v(s) = int_0^s e^{i pi a_v tau} prod_children F_c(tau) dtau for branching v
ExpPoly node_integral(const SignedTree& t, const std::vector<double>& alpha, int v,
                      double series_threshold) {
  ExpPoly prod = ExpPoly::one();
  for (int c = 0; c < 3; ++c) {
    const int ch = t.nodes[v].child[c];
    if (!t.is_leaf(ch)) prod = prod.mul(node_integral(t, alpha, ch, series_threshold));
  }
  return prod.shift(alpha[v]).integrate(series_threshold);
}

int count_branching(const Garden& g) {
  int n = 0;
  for (const auto& t : g.trees) n += t.scale();
  return n;
}

}  // namespace

cplx simplex_time_integral_tree(const SignedTree& t, const std::vector<double>& alpha, double time,
                                double series_threshold) {
  if (t.scale() > 12) throw std::invalid_argument("simplex_time_integral: depth cap exceeded");
  if (t.is_leaf(0)) return cplx(1.0, 0.0);
  return node_integral(t, alpha, 0, series_threshold).eval(time);
}

cplx simplex_time_integral(const Garden& g, const std::vector<std::vector<double>>& alpha,
                           double time, double series_threshold) {
  if (count_branching(g) > 12) throw std::invalid_argument("simplex_time_integral: depth cap");
  cplx v(1.0, 0.0);
  for (int j = 0; j < g.width(); ++j)
    v *= simplex_time_integral_tree(g.trees[j], alpha[j], time, series_threshold);
  return v;
}

std::vector<std::vector<std::int64_t>> lattice_values(const DiagramParams& p) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> cur(p.d, -p.support_radius);
  while (true) {
    out.push_back(cur);
    int i = 0;
    for (; i < p.d; ++i) {
      if (++cur[i] <= p.support_radius) break;
      cur[i] = -p.support_radius;
    }
    if (i == p.d) break;
  }
  return out;
}

namespace {

struct DecorationScan {
  const SignedTree& tree;
  const DiagramParams& p;
  std::vector<std::vector<std::int64_t>> values;  // lattice value universe
  std::vector<int> leaves;
  std::vector<int> signs;
  std::vector<std::vector<std::int64_t>> node_k;  // per node numerator
  std::vector<double> norm_cache;                 // |k|_beta^2 per value index

  explicit DecorationScan(const SignedTree& t, const DiagramParams& params)
      : tree(t), p(params), values(lattice_values(params)) {
    leaves = tree.leaves();
    signs = tree.node_signs();
    node_k.assign(tree.n_nodes(), std::vector<std::int64_t>(p.d, 0));
  }

  double beta_norm(const std::vector<std::int64_t>& num) const {
    double s = 0;
    for (int i = 0; i < p.d; ++i) {
      const double c = static_cast<double>(num[i]) / p.L;
      s += p.beta[i] * c * c;
    }
    return s;
  }

  // fills node_k bottom-up from the current leaf assignment; preorder means
  // children come after parents, so iterate in reverse
  void derive() {
    for (int v = tree.n_nodes() - 1; v >= 0; --v) {
      if (tree.is_leaf(v)) continue;
      const auto& k1 = node_k[tree.nodes[v].child[0]];
      const auto& k2 = node_k[tree.nodes[v].child[1]];
      const auto& k3 = node_k[tree.nodes[v].child[2]];
      for (int i = 0; i < p.d; ++i) node_k[v][i] = k1[i] - k2[i] + k3[i];
    }
  }

  int epsilon() const {
    int e = 1;
    for (int v = 0; v < tree.n_nodes(); ++v) {
      if (tree.is_leaf(v)) continue;
      const auto& k1 = node_k[tree.nodes[v].child[0]];
      const auto& k2 = node_k[tree.nodes[v].child[1]];
      const auto& k3 = node_k[tree.nodes[v].child[2]];
      const bool eq12 = k1 == k2, eq23 = k2 == k3;
      if (!eq12 && !eq23) continue;
      if (eq12 && eq23) {
        e = -e;
        continue;
      }
      return 0;
    }
    return e;
  }

  std::vector<double> alphas() const {
    std::vector<double> a(tree.n_nodes(), 0.0);
    for (int v = 0; v < tree.n_nodes(); ++v) {
      if (tree.is_leaf(v)) continue;
      const double omega = beta_norm(node_k[tree.nodes[v].child[0]]) -
                           beta_norm(node_k[tree.nodes[v].child[1]]) +
                           beta_norm(node_k[tree.nodes[v].child[2]]) - beta_norm(node_k[v]);
      a[v] = static_cast<double>(signs[v]) * p.delta * p.L * p.L * omega;
    }
    return a;
  }
};

cplx tree_prefactor(const SignedTree& t, const DiagramParams& p) {
  const int n = t.scale();
  cplx pref = std::pow(p.delta / (2.0 * std::pow(p.L, p.d - 1)), n);
  const auto signs = t.node_signs();
  for (int v = 0; v < t.n_nodes(); ++v)
    if (!t.is_leaf(v)) pref *= cplx(0.0, static_cast<double>(signs[v]));
  return pref;
}

}  // namespace

TreeEvalTable build_tree_table(const SignedTree& tree, const std::vector<std::int64_t>& root_k,
                               double time, const DiagramParams& p) {
  DecorationScan scan(tree, p);
  TreeEvalTable table;
  for (int l : scan.leaves) table.leaf_signs.push_back(scan.signs[l]);

  const std::size_t nv = scan.values.size();
  const std::size_t n_leaves = scan.leaves.size();
  double combos = 1;
  for (std::size_t i = 0; i < n_leaves; ++i) combos *= static_cast<double>(nv);
  if (combos > static_cast<double>(p.decoration_cap))
    throw std::runtime_error("build_tree_table: decoration count cap exceeded");

  std::vector<double> sqrt_nin(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    std::vector<double> x(p.d);
    for (int a = 0; a < p.d; ++a) x[a] = static_cast<double>(scan.values[i][a]) / p.L;
    const double v = p.n_in(x);
    if (v < 0) throw std::invalid_argument("build_tree_table: n_in must be nonnegative");
    sqrt_nin[i] = std::sqrt(v);
  }
  const cplx pref = tree_prefactor(tree, p);

  std::vector<int> idx(n_leaves, 0);
  while (true) {
    double weight = 1;
    for (std::size_t i = 0; i < n_leaves; ++i) weight *= sqrt_nin[idx[i]];
    if (weight != 0) {
      for (std::size_t i = 0; i < n_leaves; ++i) scan.node_k[scan.leaves[i]] = scan.values[idx[i]];
      scan.derive();
      if (scan.node_k[0] == root_k) {
        const int eps = scan.epsilon();
        if (eps != 0) {
          const cplx tint = simplex_time_integral_tree(tree, scan.alphas(), time);
          const cplx coef = pref * static_cast<double>(eps) * tint * weight;
          table.entries.push_back({coef, idx});
        }
      }
    }
    std::size_t i = 0;
    for (; i < n_leaves; ++i) {
      if (static_cast<std::size_t>(++idx[i]) < nv) break;
      idx[i] = 0;
    }
    if (i == n_leaves) break;
  }
  return table;
}

cplx eval_tree_table(const TreeEvalTable& table, std::span<const cplx> eta) {
  cplx total = 0;
  for (const auto& e : table.entries) {
    cplx prod = e.coef;
    for (std::size_t i = 0; i < e.leaf_value_idx.size(); ++i) {
      const cplx v = eta[static_cast<std::size_t>(e.leaf_value_idx[i])];
      prod *= table.leaf_signs[i] > 0 ? v : std::conj(v);
    }
    total += prod;
  }
  return total;
}

cplx evaluate_tree_iterate(const SignedTree& tree, std::span<const cplx> eta,
                           const std::vector<std::int64_t>& root_k, double time,
                           const DiagramParams& p) {
  return eval_tree_table(build_tree_table(tree, root_k, time, p), eta);
}

namespace {

// shared scan over block-constrained garden decorations; fn(eps, time_integral,
// n_in_product) is called per admissible decoration
void scan_garden(const std::vector<SignedTree>& trees, const std::vector<std::vector<int>>& groups,
                 const std::vector<std::vector<std::int64_t>>& ks, double time,
                 const DiagramParams& p, cplx& total) {
  const auto values = lattice_values(p);
  const std::size_t nv = values.size();

  std::vector<DecorationScan> scans;
  scans.reserve(trees.size());
  for (const auto& t : trees) scans.emplace_back(t, p);

  // global leaf id -> (tree, leaf order)
  std::vector<std::pair<int, int>> leaf_loc;
  for (std::size_t t = 0; t < trees.size(); ++t)
    for (std::size_t l = 0; l < scans[t].leaves.size(); ++l)
      leaf_loc.push_back({static_cast<int>(t), static_cast<int>(l)});

  std::vector<double> nin(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    std::vector<double> x(p.d);
    for (int a = 0; a < p.d; ++a) x[a] = static_cast<double>(values[i][a]) / p.L;
    nin[i] = p.n_in(x);
    if (nin[i] < 0) throw std::invalid_argument("evaluate_garden: n_in must be nonnegative");
  }

  const std::size_t n_groups = groups.size();
  double combos = 1;
  for (std::size_t i = 0; i < n_groups; ++i) combos *= static_cast<double>(nv);
  if (combos > static_cast<double>(p.decoration_cap))
    throw std::runtime_error("evaluate_garden: decoration count cap exceeded");

  // plus-leaf multiplicity per group: the n_in product only depends on the
  // group values
  std::vector<int> plus_count(n_groups, 0);
  {
    std::vector<int> signs;
    for (std::size_t t = 0; t < trees.size(); ++t)
      for (std::size_t l = 0; l < scans[t].leaves.size(); ++l)
        signs.push_back(scans[t].signs[scans[t].leaves[l]]);
    for (std::size_t gi = 0; gi < n_groups; ++gi)
      for (int gid : groups[gi])
        if (signs[static_cast<std::size_t>(gid)] > 0) ++plus_count[gi];
  }

  cplx pref(1.0, 0.0);
  for (const auto& t : trees) pref *= tree_prefactor(t, p);

  std::vector<int> idx(n_groups, 0);
  total = 0;
  while (true) {
    double nin_prod = 1;
    for (std::size_t gi = 0; gi < n_groups; ++gi)
      for (int c = 0; c < plus_count[gi]; ++c) nin_prod *= nin[static_cast<std::size_t>(idx[gi])];
    if (nin_prod != 0) {
      for (std::size_t gi = 0; gi < n_groups; ++gi)
        for (int gid : groups[gi]) {
          const auto [t, l] = leaf_loc[static_cast<std::size_t>(gid)];
          scans[t].node_k[scans[t].leaves[l]] = values[idx[gi]];
        }
      bool roots_ok = true;
      for (std::size_t t = 0; t < trees.size() && roots_ok; ++t) {
        scans[t].derive();
        if (scans[t].node_k[0] != ks[t]) roots_ok = false;
      }
      if (roots_ok) {
        int eps = 1;
        for (std::size_t t = 0; t < trees.size() && eps != 0; ++t) eps *= scans[t].epsilon();
        if (eps != 0) {
          cplx tint(1.0, 0.0);
          for (std::size_t t = 0; t < trees.size(); ++t)
            tint *= simplex_time_integral_tree(trees[t], scans[t].alphas(), time);
          total += pref * static_cast<double>(eps) * tint * nin_prod;
        }
      }
    }
    std::size_t i = 0;
    for (; i < n_groups; ++i) {
      if (static_cast<std::size_t>(++idx[i]) < nv) break;
      idx[i] = 0;
    }
    if (i == n_groups) break;
  }
}

}  // namespace

cplx evaluate_garden_expression(const Garden& g, const std::vector<std::vector<std::int64_t>>& ks,
                                double time, const DiagramParams& p) {
  g.validate();
  if (static_cast<int>(ks.size()) != g.width())
    throw std::invalid_argument("evaluate_garden_expression: one root value per tree");
  std::vector<std::vector<int>> groups;
  for (int gid = 0; gid < g.n_leaves(); ++gid)
    if (gid < g.pair_of[gid]) groups.push_back({gid, g.pair_of[gid]});
  cplx total;
  scan_garden(g.trees, groups, ks, time, p, total);
  return total;
}

std::vector<int> OverPairing::sizes() const {
  std::vector<int> s;
  for (const auto& b : blocks) s.push_back(static_cast<int>(b.size()));
  std::sort(s.begin(), s.end(), std::greater<int>());
  return s;
}

cplx evaluate_over_garden_expression(const std::vector<SignedTree>& trees, const OverPairing& op,
                                     const std::vector<std::vector<std::int64_t>>& ks, double time,
                                     const DiagramParams& p) {
  cplx total;
  scan_garden(trees, op.blocks, ks, time, p, total);
  return total;
}

std::vector<OverPairing> enumerate_over_pairings(const std::vector<SignedTree>& trees) {
  std::vector<int> signs;
  for (const auto& t : trees) {
    const auto s = t.node_signs();
    for (int l : t.leaves()) signs.push_back(s[l]);
  }
  const int n = static_cast<int>(signs.size());
  std::vector<OverPairing> out;
  std::vector<std::vector<int>> blocks;

  // recursive: place the lowest unassigned leaf into an existing or new block;
  // a block is closed only when sign-balanced, all blocks closed at the end
  std::function<void(int)> rec = [&](int next) {
    if (next == n) {
      for (const auto& b : blocks) {
        int bal = 0;
        for (int gid : b) bal += signs[gid];
        if (bal != 0) return;
      }
      OverPairing op;
      op.blocks = blocks;
      out.push_back(std::move(op));
      return;
    }
    // index loop: the recursion below grows and shrinks the blocks vector
    const std::size_t n_blocks = blocks.size();
    for (std::size_t bi = 0; bi < n_blocks; ++bi) {
      blocks[bi].push_back(next);
      int bal = 0;
      for (int gid : blocks[bi]) bal += signs[gid];
      // prune: a block can absorb at most the remaining sign imbalance
      if (std::abs(bal) <= n - next - 1) rec(next + 1);
      blocks[bi].pop_back();
    }
    blocks.push_back({next});
    rec(next + 1);
    blocks.pop_back();
  };
  rec(0);
  return out;
}

std::vector<Garden> over_pairing_refinements(const std::vector<SignedTree>& trees,
                                             const OverPairing& op) {
  std::vector<int> signs;
  for (const auto& t : trees) {
    const auto s = t.node_signs();
    for (int l : t.leaves()) signs.push_back(s[l]);
  }
  std::vector<Garden> out;
  std::vector<int> pair_of(signs.size(), -1);

  std::function<void(std::size_t)> rec_block = [&](std::size_t bi) {
    if (bi == op.blocks.size()) {
      Garden g;
      g.trees = trees;
      g.pair_of = pair_of;
      g.validate();
      out.push_back(std::move(g));
      return;
    }
    const auto& block = op.blocks[bi];
    std::vector<int> plus, minus;
    for (int gid : block) (signs[gid] > 0 ? plus : minus).push_back(gid);
    if (plus.size() != minus.size()) return;
    std::sort(minus.begin(), minus.end());
    std::vector<int> perm(minus);
    do {
      for (std::size_t i = 0; i < plus.size(); ++i) {
        pair_of[plus[i]] = perm[i];
        pair_of[perm[i]] = plus[i];
      }
      rec_block(bi + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  rec_block(0);
  return out;
}

bool classify_over_garden(const std::vector<SignedTree>& trees, const OverPairing& op) {
  for (const Garden& g : over_pairing_refinements(trees, op)) {
    const GardenClass cls = classify(g);
    if (!cls.is_regular_multi_couple) continue;
    bool cond2 = true;
    for (const auto& block : op.blocks) {
      if (block.size() < 4) continue;
      for (int gid : block) {
        const auto [t, v] = g.leaf_location(gid);
        // the tree restricted to the refinement pairing must be a saturated
        // paired tree with this leaf as its lone leaf, and regular
        PairedTree pt;
        pt.tree = g.trees[t];
        pt.lone_leaf = v;
        bool saturated = true;
        const auto lv = g.trees[t].leaves();
        for (int leaf : lv) {
          if (leaf == v) continue;
          const int partner = g.pair_of[g.leaf_gid(t, leaf)];
          const auto [pt2, pv2] = g.leaf_location(partner);
          if (pt2 != t) {
            saturated = false;
            break;
          }
          if (leaf < pv2) pt.pairs.push_back({leaf, pv2});
        }
        if (!saturated || !pt.regular()) {
          cond2 = false;
          break;
        }
      }
      if (!cond2) break;
    }
    if (cond2) return true;
  }
  return false;
}

}  // namespace wkt
