#include "wkt/molecule.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace wkt {

int Molecule::degree(int atom) const {
  int d = 0;
  for (const auto& b : bonds) {
    if (b.u == atom) ++d;
    if (b.v == atom) ++d;
  }
  return d;
}

int Molecule::out_degree(int atom) const {
  int d = 0;
  for (const auto& b : bonds)
    if (b.u == atom) ++d;
  return d;
}

int Molecule::in_degree(int atom) const {
  int d = 0;
  for (const auto& b : bonds)
    if (b.v == atom) ++d;
  return d;
}

int Molecule::components() const {
  std::vector<int> root(n_atoms);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) { return root[x] == x ? x : root[x] = find(root[x]); };
  for (const auto& b : bonds) root[find(b.u)] = find(b.v);
  std::set<int> roots;
  for (int i = 0; i < n_atoms; ++i) roots.insert(find(i));
  return static_cast<int>(roots.size());
}

void Molecule::validate() const {
  for (const auto& b : bonds)
    if (b.u < 0 || b.u >= n_atoms || b.v < 0 || b.v >= n_atoms)
      throw std::invalid_argument("Molecule: bond endpoint out of range");
  for (int a = 0; a < n_atoms; ++a)
    if (out_degree(a) > 2 || in_degree(a) > 2)
      throw std::invalid_argument("Molecule: atom exceeds 2 outgoing / 2 incoming bonds");
  // no saturated component
  std::vector<int> root(n_atoms);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) { return root[x] == x ? x : root[x] = find(root[x]); };
  for (const auto& b : bonds) root[find(b.u)] = find(b.v);
  std::map<int, bool> all4;
  for (int a = 0; a < n_atoms; ++a) {
    const int r = find(a);
    if (!all4.count(r)) all4[r] = true;
    if (degree(a) < 4) all4[r] = false;
  }
  for (const auto& [r, sat] : all4)
    if (sat) throw std::invalid_argument("Molecule: saturated component");
}

std::string Molecule::serialize() const {
  std::ostringstream os;
  os << "molecule " << n_atoms << "\n";
  for (const auto& b : bonds)
    os << b.u << " " << b.role_u << " -> " << b.v << " " << b.role_v << " "
       << (b.label == BondLabel::PC ? "PC" : "LP") << "\n";
  return os.str();
}

Molecule Molecule::parse(const std::string& text) {
  std::istringstream is(text);
  std::string word;
  Molecule m;
  is >> word >> m.n_atoms;
  if (word != "molecule") throw std::invalid_argument("Molecule::parse: bad header");
  Bond b;
  std::string arrow, label;
  while (is >> b.u >> b.role_u >> arrow >> b.v >> b.role_v >> label) {
    if (arrow != "->") throw std::invalid_argument("Molecule::parse: bad bond");
    b.label = label == "PC" ? BondLabel::PC : BondLabel::LP;
    m.bonds.push_back(b);
  }
  m.validate();
  return m;
}

GardenMolecule garden_to_molecule(const Garden& g) {
  g.validate();
  GardenMolecule out;
  // atoms: branching nodes, tree-major preorder
  std::map<std::pair<int, int>, int> atom_id;
  for (int t = 0; t < g.width(); ++t)
    for (int v = 0; v < g.trees[t].n_nodes(); ++v)
      if (!g.trees[t].is_leaf(v)) {
        atom_id[{t, v}] = static_cast<int>(out.atom_of.size());
        out.atom_of.push_back({t, v});
      }
  out.mol.n_atoms = static_cast<int>(out.atom_of.size());

  const auto child_slot = [&](int t, int v) {
    const int parent = g.trees[t].nodes[v].parent;
    for (int c = 0; c < 3; ++c)
      if (g.trees[t].nodes[parent].child[c] == v) return c + 1;
    throw std::logic_error("garden_to_molecule: bad child");
  };

  // PC bonds: one per non-root branching node
  for (int t = 0; t < g.width(); ++t) {
    const auto signs = g.trees[t].node_signs();
    for (int v = 0; v < g.trees[t].n_nodes(); ++v) {
      if (g.trees[t].is_leaf(v) || g.trees[t].nodes[v].parent < 0) continue;
      const int head_atom = atom_id.at({t, v});
      const int parent_atom = atom_id.at({t, g.trees[t].nodes[v].parent});
      Molecule::Bond b;
      b.label = BondLabel::PC;
      if (signs[v] > 0) {
        b.u = head_atom;
        b.role_u = 0;
        b.v = parent_atom;
        b.role_v = child_slot(t, v);
      } else {
        b.u = parent_atom;
        b.role_u = child_slot(t, v);
        b.v = head_atom;
        b.role_v = 0;
      }
      out.mol.bonds.push_back(b);
      out.bond_origin.push_back({true, t, v, -1, -1});
    }
  }
  // LP bonds: leaf pairs whose both leaves are children of branching nodes
  const auto leaf_signs = g.leaf_signs();
  for (int gid = 0; gid < g.n_leaves(); ++gid) {
    const int gid2 = g.pair_of[gid];
    if (gid > gid2) continue;
    const auto [t1, v1] = g.leaf_location(gid);
    const auto [t2, v2] = g.leaf_location(gid2);
    if (g.trees[t1].nodes[v1].parent < 0 || g.trees[t2].nodes[v2].parent < 0) continue;
    const int minus_gid = leaf_signs[gid] < 0 ? gid : gid2;
    const int plus_gid = leaf_signs[gid] < 0 ? gid2 : gid;
    const auto [tm, vm] = g.leaf_location(minus_gid);
    const auto [tp, vp] = g.leaf_location(plus_gid);
    Molecule::Bond b;
    b.label = BondLabel::LP;
    b.u = atom_id.at({tm, g.trees[tm].nodes[vm].parent});
    b.role_u = child_slot(tm, vm);
    b.v = atom_id.at({tp, g.trees[tp].nodes[vp].parent});
    b.role_v = child_slot(tp, vp);
    out.mol.bonds.push_back(b);
    out.bond_origin.push_back({false, -1, -1, minus_gid, plus_gid});
  }
  out.mol.validate();
  return out;
}

ChiStats chi_stats(const Molecule& mol, int m, int R, bool mixed, bool multi_couple) {
  ChiStats st;
  st.V = mol.n_atoms;
  st.E = static_cast<int>(mol.bonds.size());
  st.F = mol.components();
  st.chi = st.E - st.V + st.F;
  st.v_identity = (st.V == m);
  st.e_identity = (st.E == 2 * m - R);
  if (multi_couple)
    st.bound_ok = (st.chi == m);
  else if (mixed)
    st.bound_ok = (2 * st.chi <= 2 * m - R);
  else
    st.bound_ok = true;
  return st;
}

namespace {

// pairs of atoms joined by exactly two bonds of opposite directions
std::map<std::pair<int, int>, bool> double_bond_map(const Molecule& mol) {
  std::map<std::pair<int, int>, std::vector<int>> mult;
  for (int i = 0; i < static_cast<int>(mol.bonds.size()); ++i) {
    const auto& b = mol.bonds[i];
    if (b.u == b.v) continue;
    mult[{std::min(b.u, b.v), std::max(b.u, b.v)}].push_back(i);
  }
  std::map<std::pair<int, int>, bool> out;
  for (const auto& [key, idx] : mult) {
    if (idx.size() != 2) continue;
    const auto& b1 = mol.bonds[idx[0]];
    const auto& b2 = mol.bonds[idx[1]];
    out[key] = (b1.u == b2.v && b1.v == b2.u);
  }
  return out;
}

bool single_bond_between(const Molecule& mol, int x, int y, std::vector<int>& idx) {
  idx.clear();
  for (int i = 0; i < static_cast<int>(mol.bonds.size()); ++i) {
    const auto& b = mol.bonds[i];
    if ((b.u == x && b.v == y) || (b.u == y && b.v == x)) idx.push_back(i);
  }
  return idx.size() == 1;
}

}  // namespace

MolecularChains find_molecular_chains(const Molecule& mol) {
  MolecularChains chains;
  const auto dmap = double_bond_map(mol);

  // type I: graph on atoms with opposite-direction double-bond edges
  std::map<int, std::vector<int>> adj;
  for (const auto& [key, opp] : dmap) {
    if (!opp) continue;
    adj[key.first].push_back(key.second);
    adj[key.second].push_back(key.first);
  }
  std::set<int> used;
  for (const auto& [start, nbrs] : adj) {
    if (used.count(start) || nbrs.size() > 1) continue;  // path endpoints only
    std::vector<int> path = {start};
    used.insert(start);
    int cur = start, prev = -1;
    while (true) {
      int next = -1;
      for (int nb : adj[cur])
        if (nb != prev && !used.count(nb)) next = nb;
      if (next < 0) break;
      path.push_back(next);
      used.insert(next);
      prev = cur;
      cur = next;
    }
    if (path.size() >= 2) chains.type1.push_back(std::move(path));
  }
  // cycles left over
  for (const auto& [start, nbrs] : adj) {
    if (used.count(start)) continue;
    std::vector<int> path = {start};
    used.insert(start);
    int cur = start, prev = -1;
    while (true) {
      int next = -1;
      for (int nb : adj[cur])
        if (nb != prev && !used.count(nb)) next = nb;
      if (next < 0) break;
      path.push_back(next);
      used.insert(next);
      prev = cur;
      cur = next;
    }
    chains.type1.push_back(std::move(path));
  }

  // type II: ladders of double-bonded cells; consecutive cells joined by two
  // single bonds of opposite directions (one each way between the rails)
  std::vector<std::pair<int, int>> cells;
  for (const auto& [key, opp] : dmap)
    if (opp) cells.push_back(key);
  const auto linked = [&](std::pair<int, int> c1, std::pair<int, int> c2) {
    // two disjoint single bonds between {c1} and {c2} atoms, opposite senses
    std::vector<int> idx;
    std::vector<std::pair<int, int>> rails;
    for (int x : {c1.first, c1.second})
      for (int y : {c2.first, c2.second})
        if (single_bond_between(mol, x, y, idx)) rails.push_back({idx[0], x});
    if (rails.size() != 2) return false;
    const auto& b1 = mol.bonds[rails[0].first];
    const auto& b2 = mol.bonds[rails[1].first];
    if (rails[0].second == rails[1].second) return false;  // must leave both rails
    const bool fwd1 = (b1.u == rails[0].second);
    const bool fwd2 = (b2.u == rails[1].second);
    return fwd1 != fwd2;
  };
  std::map<int, std::vector<int>> cadj;
  for (int i = 0; i < static_cast<int>(cells.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(cells.size()); ++j)
      if (linked(cells[i], cells[j])) {
        cadj[i].push_back(j);
        cadj[j].push_back(i);
      }
  std::set<int> cused;
  for (int start = 0; start < static_cast<int>(cells.size()); ++start) {
    if (cused.count(start)) continue;
    if (cadj.count(start) && cadj[start].size() > 1) continue;
    std::vector<int> path = {start};
    cused.insert(start);
    int cur = start, prev = -1;
    while (true) {
      int next = -1;
      if (cadj.count(cur))
        for (int nb : cadj[cur])
          if (nb != prev && !cused.count(nb)) next = nb;
      if (next < 0) break;
      path.push_back(next);
      cused.insert(next);
      prev = cur;
      cur = next;
    }
    if (path.size() >= 2) {
      std::vector<std::pair<int, int>> ladder;
      for (int i : path) ladder.push_back(cells[i]);
      chains.type2.push_back(std::move(ladder));
    }
  }
  return chains;
}

// ---------------------------------------------------------------------------
// reconstruction

namespace {

struct RoleAssign {
  // per bond: roles at u and v
  std::vector<std::pair<int, int>> roles;
};

void enumerate_roles(const Molecule& mol, std::vector<RoleAssign>& out, std::size_t cap) {
  const int nb = static_cast<int>(mol.bonds.size());
  std::vector<std::vector<int>> used(mol.n_atoms);  // roles taken per atom
  RoleAssign cur;
  cur.roles.assign(nb, {-1, -1});

  const auto take = [&](int atom, int role) {
    for (int r : used[atom])
      if (r == role) return false;
    used[atom].push_back(role);
    return true;
  };
  const auto drop = [&](int atom) { used[atom].pop_back(); };

  std::function<void(int)> rec = [&](int i) {
    if (out.size() >= cap) throw std::runtime_error("reconstruct_gardens: cap exceeded");
    if (i == nb) {
      out.push_back(cur);
      return;
    }
    const auto& b = mol.bonds[i];
    if (b.label == BondLabel::PC) {
      // one end is the parent slot (role 0), the other a child slot
      for (int head_at_u = 0; head_at_u < 2; ++head_at_u) {
        const int a0 = head_at_u ? b.u : b.v;
        const int a1 = head_at_u ? b.v : b.u;
        if (!take(a0, 0)) continue;
        for (int slot = 1; slot <= 3; ++slot) {
          if (!take(a1, slot)) continue;
          cur.roles[i] = head_at_u ? std::make_pair(0, slot) : std::make_pair(slot, 0);
          rec(i + 1);
          drop(a1);
        }
        drop(a0);
      }
    } else {
      for (int ru = 1; ru <= 3; ++ru) {
        if (!take(b.u, ru)) continue;
        for (int rv = 1; rv <= 3; ++rv) {
          if (b.u == b.v && rv == ru) continue;
          if (!take(b.v, rv)) continue;
          cur.roles[i] = {ru, rv};
          rec(i + 1);
          drop(b.v);
        }
        drop(b.u);
      }
    }
  };
  rec(0);
}

}  // namespace

std::vector<Garden> reconstruct_gardens(const Molecule& mol, int R, std::size_t cap) {
  mol.validate();
  if (mol.n_atoms > 8) throw std::invalid_argument("reconstruct_gardens: atom cap exceeded");
  std::vector<RoleAssign> assigns;
  enumerate_roles(mol, assigns, cap);

  std::unordered_set<std::string> seen;
  std::vector<Garden> results;

  for (const auto& asg : assigns) {
    // parent-of relation between atoms from PC bonds
    std::vector<int> parent_atom(mol.n_atoms, -1), parent_slot(mol.n_atoms, -1);
    bool ok = true;
    for (int i = 0; i < static_cast<int>(mol.bonds.size()) && ok; ++i) {
      const auto& b = mol.bonds[i];
      if (b.label != BondLabel::PC) continue;
      const auto [ru, rv] = asg.roles[i];
      const int head = ru == 0 ? b.u : b.v;
      const int par = ru == 0 ? b.v : b.u;
      const int slot = ru == 0 ? rv : ru;
      if (parent_atom[head] >= 0) ok = false;
      parent_atom[head] = par;
      parent_slot[head] = slot;
    }
    if (!ok) continue;
    // forest check
    for (int a = 0; a < mol.n_atoms && ok; ++a) {
      int steps = 0, cur = a;
      while (cur >= 0 && steps <= mol.n_atoms) {
        cur = parent_atom[cur];
        ++steps;
      }
      if (steps > mol.n_atoms) ok = false;
    }
    if (!ok) continue;

    // build one tree per root atom
    std::vector<int> root_atoms;
    for (int a = 0; a < mol.n_atoms; ++a)
      if (parent_atom[a] < 0) root_atoms.push_back(a);
    const int n_nontrivial = static_cast<int>(root_atoms.size());

    // children per atom: atom or leaf
    std::vector<std::array<int, 3>> child_atom(mol.n_atoms, {{-1, -1, -1}});
    for (int a = 0; a < mol.n_atoms; ++a)
      if (parent_atom[a] >= 0) child_atom[parent_atom[a]][parent_slot[a] - 1] = a;

    struct LeafInfo {
      int atom, slot;  // 1..3
    };
    // leaf pairs from LP bonds; remaining leaf slots pair with trivial trees
    std::map<std::pair<int, int>, std::pair<int, int>> lp_partner;  // (atom,slot)->(atom,slot)
    std::set<std::pair<int, int>> lp_used;
    bool lp_ok = true;
    for (int i = 0; i < static_cast<int>(mol.bonds.size()) && lp_ok; ++i) {
      const auto& b = mol.bonds[i];
      if (b.label != BondLabel::LP) continue;
      const auto [ru, rv] = asg.roles[i];
      const std::pair<int, int> pu{b.u, ru}, pv{b.v, rv};
      if (child_atom[b.u][ru - 1] >= 0 || child_atom[b.v][rv - 1] >= 0) lp_ok = false;
      if (lp_used.count(pu) || lp_used.count(pv)) lp_ok = false;
      if (lp_ok) {
        lp_partner[pu] = pv;
        lp_partner[pv] = pu;
        lp_used.insert(pu);
        lp_used.insert(pv);
      }
    }
    if (!lp_ok) continue;

    std::vector<LeafInfo> dangling;  // leaf slots paired to trivial trees
    for (int a = 0; a < mol.n_atoms; ++a)
      for (int s = 1; s <= 3; ++s)
        if (child_atom[a][s - 1] < 0 && !lp_used.count({a, s})) dangling.push_back({a, s});

    const int n_dangling = static_cast<int>(dangling.size());
    const int extra = 2 * R - n_nontrivial - n_dangling;
    if (extra < 0 || extra % 2 != 0) continue;

    // enumerate root signs of the nontrivial trees
    for (int mask = 0; mask < (1 << n_nontrivial); ++mask) {
      // build trees and node signs
      std::vector<SignedTree> trees(static_cast<std::size_t>(n_nontrivial));
      std::vector<std::map<std::pair<int, int>, int>> leaf_node(trees.size());
      std::vector<int> atom_tree(mol.n_atoms, -1), atom_node(mol.n_atoms, -1);
      for (int r = 0; r < n_nontrivial; ++r) {
        SignedTree& tr = trees[static_cast<std::size_t>(r)];
        tr.sign = (mask >> r) & 1 ? +1 : -1;
        std::function<int(int, int)> build = [&](int atom, int parent_node) -> int {
          const int me = tr.n_nodes();
          tr.nodes.emplace_back();
          tr.nodes[me].parent = parent_node;
          atom_tree[atom] = r;
          atom_node[atom] = me;
          for (int s = 0; s < 3; ++s) {
            if (child_atom[atom][s] >= 0) {
              tr.nodes[me].child[s] = build(child_atom[atom][s], me);
            } else {
              const int kid = tr.n_nodes();
              tr.nodes.emplace_back();
              tr.nodes[kid].parent = me;
              tr.nodes[me].child[s] = kid;
              leaf_node[static_cast<std::size_t>(r)][{atom, s + 1}] = kid;
            }
          }
          return me;
        };
        build(root_atoms[static_cast<std::size_t>(r)], -1);
      }
      // check PC bond directions against node signs
      bool dir_ok = true;
      std::vector<std::vector<int>> signs_of;
      for (const auto& tr : trees) signs_of.push_back(tr.node_signs());
      for (int i = 0; i < static_cast<int>(mol.bonds.size()) && dir_ok; ++i) {
        const auto& b = mol.bonds[i];
        if (b.label != BondLabel::PC) continue;
        const auto [ru, rv] = asg.roles[i];
        const int head = ru == 0 ? b.u : b.v;
        const int sgn = signs_of[static_cast<std::size_t>(atom_tree[head])]
                                [static_cast<std::size_t>(atom_node[head])];
        // bond goes head-atom -> parent-atom iff the node sign is +
        const bool points_out = (b.u == head);
        if ((sgn > 0) != points_out) dir_ok = false;
      }
      if (!dir_ok) continue;
      // check LP bond directions: minus leaf atom -> plus leaf atom
      for (int i = 0; i < static_cast<int>(mol.bonds.size()) && dir_ok; ++i) {
        const auto& b = mol.bonds[i];
        if (b.label != BondLabel::LP) continue;
        const auto [ru, rv] = asg.roles[i];
        const int tu = atom_tree[b.u];
        const int nu = leaf_node[static_cast<std::size_t>(tu)].at({b.u, ru});
        const int su = signs_of[static_cast<std::size_t>(tu)][static_cast<std::size_t>(nu)];
        const int tv = atom_tree[b.v];
        const int nv = leaf_node[static_cast<std::size_t>(tv)].at({b.v, rv});
        const int sv = signs_of[static_cast<std::size_t>(tv)][static_cast<std::size_t>(nv)];
        if (!(su < 0 && sv > 0)) dir_ok = false;
      }
      if (!dir_ok) continue;

      // assemble the garden: nontrivial trees, then one trivial tree per
      // dangling leaf (opposite sign), then (+,-) trivial couples
      Garden g;
      g.trees = trees;
      for (const auto& leaf : dangling) {
        const int t = atom_tree[leaf.atom];
        const int n = leaf_node[static_cast<std::size_t>(t)].at({leaf.atom, leaf.slot});
        const int s = signs_of[static_cast<std::size_t>(t)][static_cast<std::size_t>(n)];
        g.trees.push_back(SignedTree::trivial(-s));
      }
      for (int e = 0; e < extra / 2; ++e) {
        g.trees.push_back(SignedTree::trivial(+1));
        g.trees.push_back(SignedTree::trivial(-1));
      }
      int plus = 0;
      for (const auto& t : g.trees) plus += t.sign > 0;
      if (plus != R) continue;

      // pairing
      g.pair_of.assign(static_cast<std::size_t>(
                           [&] {
                             int total = 0;
                             for (const auto& t : g.trees) total += static_cast<int>(t.leaves().size());
                             return total;
                           }()),
                       -1);
      const auto link = [&](int x, int y) {
        g.pair_of[x] = y;
        g.pair_of[y] = x;
      };
      for (const auto& [pu, pv] : lp_partner) {
        if (pu > pv) continue;
        const int tu = atom_tree[pu.first];
        const int nu = leaf_node[static_cast<std::size_t>(tu)].at(pu);
        const int tv = atom_tree[pv.first];
        const int nv = leaf_node[static_cast<std::size_t>(tv)].at(pv);
        link(g.leaf_gid(tu, nu), g.leaf_gid(tv, nv));
      }
      for (int i = 0; i < n_dangling; ++i) {
        const auto& leaf = dangling[static_cast<std::size_t>(i)];
        const int t = atom_tree[leaf.atom];
        const int n = leaf_node[static_cast<std::size_t>(t)].at({leaf.atom, leaf.slot});
        link(g.leaf_gid(t, n), g.leaf_gid(n_nontrivial + i, 0));
      }
      for (int e = 0; e < extra / 2; ++e) {
        const int t0 = n_nontrivial + n_dangling + 2 * e;
        link(g.leaf_gid(t0, 0), g.leaf_gid(t0 + 1, 0));
      }
      try {
        g.validate();
      } catch (const std::exception&) {
        continue;
      }

      // all orderings of the trees
      std::vector<int> perm(g.trees.size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        Garden h;
        h.trees.resize(g.trees.size());
        std::vector<int> gid_map(g.pair_of.size());
        // position of old tree j in h is perm[j]
        std::vector<int> offset_new(g.trees.size() + 1, 0);
        {
          std::vector<int> sizes(g.trees.size());
          for (std::size_t j = 0; j < g.trees.size(); ++j)
            sizes[static_cast<std::size_t>(perm[j])] =
                static_cast<int>(g.trees[j].leaves().size());
          for (std::size_t j = 0; j < g.trees.size(); ++j)
            offset_new[j + 1] = offset_new[j] + sizes[j];
        }
        std::vector<int> offset_old(g.trees.size() + 1, 0);
        for (std::size_t j = 0; j < g.trees.size(); ++j)
          offset_old[j + 1] = offset_old[j] + static_cast<int>(g.trees[j].leaves().size());
        for (std::size_t j = 0; j < g.trees.size(); ++j) {
          h.trees[static_cast<std::size_t>(perm[j])] = g.trees[j];
          for (int l = 0; l < offset_old[j + 1] - offset_old[j]; ++l)
            gid_map[static_cast<std::size_t>(offset_old[j] + l)] =
                offset_new[static_cast<std::size_t>(perm[j])] + l;
        }
        h.pair_of.assign(g.pair_of.size(), -1);
        for (std::size_t x = 0; x < g.pair_of.size(); ++x)
          h.pair_of[static_cast<std::size_t>(gid_map[x])] =
              gid_map[static_cast<std::size_t>(g.pair_of[x])];
        const std::string key = h.serialize();
        if (seen.insert(key).second) {
          if (results.size() >= cap) throw std::runtime_error("reconstruct_gardens: cap exceeded");
          results.push_back(std::move(h));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  return results;
}

std::uint64_t brute_count_decorations(const MoleculeCounting& prob) {
  const Molecule& mol = prob.mol;
  const int nb = static_cast<int>(mol.bonds.size());
  if (nb == 0) return 1;  // the empty assignment
  if (prob.d > 2) throw std::invalid_argument("brute_count_decorations: d must be 1 or 2");
  if (static_cast<int>(prob.a.size()) != nb)
    throw std::invalid_argument("brute_count_decorations: need one center per bond");

  // candidate numerators per bond: |k - a| <= window
  const int span = static_cast<int>(std::floor(prob.window * prob.L + 1e-9));
  if (span > static_cast<int>(5 * prob.L))
    throw std::invalid_argument("brute_count_decorations: window too large for brute force");
  std::vector<std::vector<std::vector<std::int64_t>>> candidates(nb);
  for (int l = 0; l < nb; ++l) {
    std::vector<std::int64_t> cur(prob.d);
    std::vector<int> off(prob.d, -span);
    while (true) {
      double nrm = 0;
      for (int i = 0; i < prob.d; ++i) {
        cur[i] = prob.a[l][i] + off[i];
        const double dv = static_cast<double>(off[i]) / prob.L;
        nrm += dv * dv;
      }
      if (nrm <= prob.window * prob.window + 1e-12) candidates[l].push_back(cur);
      int i = 0;
      for (; i < prob.d; ++i) {
        if (++off[i] <= span) break;
        off[i] = -span;
      }
      if (i == prob.d) break;
    }
  }

  // per atom: incident bonds with orientation (+1 out, -1 in; self-loops net 0
  // for the sums but participate in the degeneracy conditions)
  struct Incident {
    int bond;
    int zeta;       // net orientation coefficient
    bool self_loop;
  };
  std::vector<std::vector<Incident>> inc(mol.n_atoms);
  for (int l = 0; l < nb; ++l) {
    const auto& b = mol.bonds[l];
    if (b.u == b.v) {
      inc[b.u].push_back({l, 0, true});
    } else {
      inc[b.u].push_back({l, +1, false});
      inc[b.v].push_back({l, -1, false});
    }
  }
  std::vector<int> degree(mol.n_atoms, 0);
  for (int a = 0; a < mol.n_atoms; ++a) degree[a] = mol.degree(a);
  std::vector<int> s_index(mol.n_atoms, -1);
  for (std::size_t i = 0; i < prob.S.size(); ++i) s_index[prob.S[i]] = static_cast<int>(i);

  // last bond index per atom, to trigger the atom checks
  std::vector<int> last_bond(mol.n_atoms, -1);
  for (int a = 0; a < mol.n_atoms; ++a)
    for (const auto& ic : inc[a]) last_bond[a] = std::max(last_bond[a], ic.bond);

  std::vector<const std::vector<std::int64_t>*> value(nb, nullptr);

  const auto beta_norm = [&](const std::vector<std::int64_t>& num) {
    double s = 0;
    for (int i = 0; i < prob.d; ++i) {
      const double c = static_cast<double>(num[i]) / prob.L;
      s += prob.beta[i] * c * c;
    }
    return s;
  };

  const auto atom_ok = [&](int a) {
    // momentum
    for (int i = 0; i < prob.d; ++i) {
      std::int64_t s = 0;
      for (const auto& ic : inc[a]) s += ic.zeta * (*value[ic.bond])[i];
      if (s != prob.c[a][i]) return false;
    }
    // resonance window
    double g = 0;
    for (const auto& ic : inc[a]) g += ic.zeta * beta_norm(*value[ic.bond]);
    if (std::fabs(g - prob.Gamma[a]) > prob.gamma_window + 1e-12) return false;
    // degeneracy conditions
    if (s_index[a] >= 0) {
      for (const auto& ic : inc[a])
        if (*value[ic.bond] != *value[inc[a][0].bond]) return false;
      if (degree[a] < 4 && !prob.f.empty() &&
          !prob.f[static_cast<std::size_t>(s_index[a])].empty() &&
          *value[inc[a][0].bond] != prob.f[static_cast<std::size_t>(s_index[a])])
        return false;
    } else {
      for (std::size_t i = 0; i < inc[a].size(); ++i) {
        // a self-loop is outgoing and incoming at once: it pairs with itself,
        // so a non-degenerate atom cannot carry one
        if (inc[a][i].self_loop) return false;
        for (std::size_t j = i + 1; j < inc[a].size(); ++j) {
          const auto& bi = inc[a][i];
          const auto& bj = inc[a][j];
          if (bi.zeta != bj.zeta && *value[bi.bond] == *value[bj.bond]) return false;
        }
      }
    }
    return true;
  };

  std::uint64_t count = 0;
  std::function<void(int)> rec = [&](int l) {
    if (l == nb) {
      ++count;
      return;
    }
    for (const auto& cand : candidates[l]) {
      value[l] = &cand;
      bool ok = true;
      for (const auto& e : prob.ext) {
        if (std::max(e.l1, e.l2) != l) continue;
        const bool eq = *value[e.l1] == *value[e.l2];
        if (eq != e.equal) ok = false;
      }
      if (ok)
        for (int a = 0; a < mol.n_atoms && ok; ++a)
          if (last_bond[a] == l && !atom_ok(a)) ok = false;
      if (ok) rec(l + 1);
    }
    value[l] = nullptr;
  };
  rec(0);
  return count;
}

}  // namespace wkt
