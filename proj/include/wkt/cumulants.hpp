#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

namespace wkt {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Partition of n into even positive parts, sorted descending.
struct EvenPartition {
  std::vector<int> parts;

  static EvenPartition of(std::vector<int> p);
  int n() const;
  int size() const { return static_cast<int>(parts.size()); }
  // sum of the parts that are >= 4
  int q() const;
  std::string str() const;  // "4+2+2"

  friend bool operator==(const EvenPartition& a, const EvenPartition& b) {
    return a.parts == b.parts;
  }
  friend bool operator<(const EvenPartition& a, const EvenPartition& b) {
    return a.parts < b.parts;
  }
};

std::vector<EvenPartition> even_partitions(int n);

// Number of refinements of a fixed sign-balanced partition of type O into one
// of type O_prime; 0 when O_prime does not refine O. Exact integers.
BigInt xi_coefficient(const EvenPartition& O, const EvenPartition& O_prime);

// Solves the triangular recursion prod mu_b = sum_{O' <= O} xi(O, O') lambda(O')
// for all even partitions of n. mu[b] are the modulus moments, mu[0] = mu[1] = 1.
std::map<EvenPartition, BigRat> lambda_coefficients(int n, const std::vector<BigRat>& mu);

// lambda(2,...,2, O) == lambda(O) for every O with both tables computed.
bool stability_property(const std::map<EvenPartition, BigRat>& lam_big,
                        const std::map<EvenPartition, BigRat>& lam_small);

struct LambdaBoundReport {
  bool factorial_bound_holds = false;  // |lambda(O)| <= (n/2)!/|O|! prod (C0 b)!
  double worst_factorial_ratio = 0;    // max |lambda| / bound
  int fitted_c1 = 0;                   // smallest integer C1 with |lambda| <= C1^n n^(C1 q)
};
LambdaBoundReport lambda_bound_audit(const std::map<EvenPartition, BigRat>& lam, int n, int C0);

struct MomentIdentity {
  BigRat lhs;  // prod over values of mu_{a_i} (0 when signs unbalanced)
  BigRat rhs;  // sum over k-constant sign-balanced partitions of lambda
  bool equal = false;
};
// Verifies the cumulant substitute for the pairing theorem on one raw moment
// E prod eta_{k_j}^{sign_j}: entries are (k value id, sign). n <= 12.
MomentIdentity moment_bruteforce(const std::vector<std::pair<int, int>>& entries,
                                 const std::vector<BigRat>& mu);

// `partition,lambda_num,lambda_den` rows
std::string lambda_table_csv(const std::map<EvenPartition, BigRat>& lam);

}  // namespace wkt
