#include "wkt/cumulants.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace wkt {

namespace {

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

EvenPartition EvenPartition::of(std::vector<int> p) {
  for (int x : p)
    if (x <= 0 || x % 2 != 0) throw std::invalid_argument("EvenPartition: parts even and >= 2");
  std::sort(p.begin(), p.end(), std::greater<int>());
  EvenPartition out;
  out.parts = std::move(p);
  return out;
}

int EvenPartition::n() const {
  int s = 0;
  for (int x : parts) s += x;
  return s;
}

int EvenPartition::q() const {
  int s = 0;
  for (int x : parts)
    if (x >= 4) s += x;
  return s;
}

std::string EvenPartition::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "+" : "") << parts[i];
  return os.str();
}

std::vector<EvenPartition> even_partitions(int n) {
  if (n % 2 != 0 || n < 0) return {};
  std::vector<EvenPartition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rest, int max_part) {
    if (rest == 0) {
      out.push_back(EvenPartition{cur});
      return;
    }
    for (int p = std::min(rest, max_part); p >= 2; p -= 2) {
      cur.push_back(p);
      rec(rest - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

BigInt xi_coefficient(const EvenPartition& O, const EvenPartition& Op) {
  if (O.n() != Op.n()) return 0;
  // distribute the multiset Op among the parts of O; for one part 2a split as
  // (2b_1..2b_q) the count of balanced sub-partitions is
  // (a!)^2 / (prod (b_i!)^2 * prod multiplicity!)
  std::map<int, int> pool;
  for (int x : Op.parts) pool[x]++;

  std::function<BigInt(std::size_t)> rec = [&](std::size_t i) -> BigInt {
    if (i == O.parts.size()) {
      for (const auto& [part, cnt] : pool)
        if (cnt != 0) return 0;
      return 1;
    }
    const int a = O.parts[i] / 2;
    BigInt total = 0;
    // enumerate sub-multisets of the pool summing to 2a
    std::vector<std::pair<int, int>> taken;  // (part, count)
    std::function<void(std::map<int, int>::iterator, int)> pick =
        [&](std::map<int, int>::iterator it, int rest) {
          if (rest == 0) {
            // factor for this block
            BigInt denom = 1;
            for (const auto& [part, cnt] : taken) {
              const BigInt bf = factorial(part / 2);
              for (int c = 0; c < cnt; ++c) denom *= bf * bf;
              denom *= factorial(cnt);
            }
            const BigInt af = factorial(a);
            total += (af * af / denom) * rec(i + 1);
            return;
          }
          if (it == pool.end()) return;
          auto next = std::next(it);
          const int part = it->first;
          const int avail = it->second;
          for (int take = 0; take <= avail && take * part <= rest; ++take) {
            it->second = avail - take;
            if (take > 0) taken.push_back({part, take});
            pick(next, rest - take * part);
            if (take > 0) taken.pop_back();
          }
          it->second = avail;
        };
    pick(pool.begin(), 2 * a);
    return total;
  };
  return rec(0);
}

std::map<EvenPartition, BigRat> lambda_coefficients(int n, const std::vector<BigRat>& mu) {
  if (n % 2 != 0 || n <= 0) throw std::invalid_argument("lambda_coefficients: n even positive");
  if (n > 16) throw std::invalid_argument("lambda_coefficients: n cap exceeded");
  if (mu.size() < static_cast<std::size_t>(n / 2) + 1)
    throw std::invalid_argument("lambda_coefficients: mu too short (need mu_0..mu_{n/2})");
  if (mu[1] != 1) throw std::invalid_argument("lambda_coefficients: mu_1 must be 1");

  auto parts = even_partitions(n);
  // finest first: descending number of parts
  std::sort(parts.begin(), parts.end(), [](const EvenPartition& a, const EvenPartition& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.parts < b.parts;
  });
  std::map<EvenPartition, BigRat> lam;
  for (const auto& O : parts) {
    BigRat value = 1;
    for (int p : O.parts) value *= mu[static_cast<std::size_t>(p / 2)];
    for (const auto& [Op, l] : lam) {
      if (Op == O) continue;
      const BigInt xi = xi_coefficient(O, Op);
      if (xi != 0) value -= BigRat(xi) * l;
    }
    lam[O] = value;  // xi(O, O) = 1
  }
  return lam;
}

bool stability_property(const std::map<EvenPartition, BigRat>& lam_big,
                        const std::map<EvenPartition, BigRat>& lam_small) {
  if (lam_big.empty() || lam_small.empty()) return false;
  const int n_big = lam_big.begin()->first.n();
  const int n_small = lam_small.begin()->first.n();
  if ((n_big - n_small) % 2 != 0 || n_big < n_small) return false;
  const int pad = (n_big - n_small) / 2;
  for (const auto& [O, l] : lam_small) {
    std::vector<int> padded = O.parts;
    for (int i = 0; i < pad; ++i) padded.push_back(2);
    const auto it = lam_big.find(EvenPartition::of(padded));
    if (it == lam_big.end() || it->second != l) return false;
  }
  return true;
}

LambdaBoundReport lambda_bound_audit(const std::map<EvenPartition, BigRat>& lam, int n, int C0) {
  LambdaBoundReport rep;
  rep.factorial_bound_holds = true;
  for (const auto& [O, l] : lam) {
    BigRat bound = BigRat(factorial(n / 2)) / BigRat(factorial(O.size()));
    for (int p : O.parts) bound *= BigRat(factorial(C0 * (p / 2)));
    const BigRat mag = l < 0 ? BigRat(-l) : l;
    if (mag > bound) rep.factorial_bound_holds = false;
    if (bound != 0) {
      const double ratio = static_cast<double>(BigRat(mag / bound));
      rep.worst_factorial_ratio = std::max(rep.worst_factorial_ratio, ratio);
    }
  }
  for (int c1 = 1; c1 <= 64; ++c1) {
    bool ok = true;
    for (const auto& [O, l] : lam) {
      BigRat bound = 1;
      for (int i = 0; i < n; ++i) bound *= c1;
      for (int i = 0; i < c1 * O.q(); ++i) bound *= n;
      const BigRat mag = l < 0 ? BigRat(-l) : l;
      if (mag > bound) ok = false;
    }
    if (ok) {
      rep.fitted_c1 = c1;
      break;
    }
  }
  return rep;
}

MomentIdentity moment_bruteforce(const std::vector<std::pair<int, int>>& entries,
                                 const std::vector<BigRat>& mu) {
  const int n = static_cast<int>(entries.size());
  if (n > 12) throw std::invalid_argument("moment_bruteforce: n cap exceeded");
  MomentIdentity out;

  // LHS: group equal values
  std::map<int, std::pair<int, int>> groups;  // value -> (plus, minus)
  for (const auto& [k, s] : entries) (s > 0 ? groups[k].first : groups[k].second)++;
  bool balanced = true;
  for (const auto& [k, pm] : groups)
    if (pm.first != pm.second) balanced = false;
  if (balanced) {
    out.lhs = 1;
    for (const auto& [k, pm] : groups) out.lhs *= mu[static_cast<std::size_t>(pm.first)];
  } else {
    out.lhs = 0;
  }

  // RHS: sum over sign-balanced k-constant set partitions of lambda(sizes)
  std::map<EvenPartition, BigRat> lam;
  if (n > 0 && n % 2 == 0) lam = lambda_coefficients(n, mu);
  out.rhs = 0;
  std::vector<std::vector<int>> blocks;
  std::function<void(int)> rec = [&](int next) {
    if (next == n) {
      std::vector<int> sizes;
      for (const auto& b : blocks) {
        int bal = 0;
        for (int j : b) bal += entries[static_cast<std::size_t>(j)].second;
        if (bal != 0) return;
        for (std::size_t i = 1; i < b.size(); ++i)
          if (entries[static_cast<std::size_t>(b[i])].first !=
              entries[static_cast<std::size_t>(b[0])].first)
            return;
        sizes.push_back(static_cast<int>(b.size()));
      }
      out.rhs += lam.at(EvenPartition::of(sizes));
      return;
    }
    const std::size_t n_blocks = blocks.size();  // the recursion grows the vector
    for (std::size_t bi = 0; bi < n_blocks; ++bi) {
      blocks[bi].push_back(next);
      rec(next + 1);
      blocks[bi].pop_back();
    }
    blocks.push_back({next});
    rec(next + 1);
    blocks.pop_back();
  };
  if (n > 0 && n % 2 == 0) rec(0);
  out.equal = (out.lhs == out.rhs);
  return out;
}

std::string lambda_table_csv(const std::map<EvenPartition, BigRat>& lam) {
  std::ostringstream os;
  os << "partition,lambda_num,lambda_den\n";
  for (const auto& [O, l] : lam)
    os << O.str() << "," << boost::multiprecision::numerator(l) << ","
       << boost::multiprecision::denominator(l) << "\n";
  return os.str();
}

}  // namespace wkt
