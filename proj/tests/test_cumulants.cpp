#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wkt/cumulants.hpp"
#include "wkt/rng.hpp"

using namespace wkt;

namespace {

std::vector<BigRat> gaussian_mu(int n_half) {
  std::vector<BigRat> mu(n_half + 1);
  mu[0] = 1;
  for (int i = 1; i <= n_half; ++i) mu[i] = mu[i - 1] * i;
  return mu;
}

std::vector<BigRat> uniform_phase_mu(int n_half) {
  return std::vector<BigRat>(n_half + 1, BigRat(1));
}

std::vector<BigRat> random_mu(int n_half, CounterRng& rng) {
  std::vector<BigRat> mu(n_half + 1);
  mu[0] = mu[1] = 1;
  for (int i = 2; i <= n_half; ++i)
    mu[i] = BigRat(1 + static_cast<int>(rng.uniform() * 40),
                   1 + static_cast<int>(rng.uniform() * 9));
  return mu;
}

}  // namespace

TEST_CASE("even partitions") {
  CHECK(even_partitions(2).size() == 1);
  CHECK(even_partitions(4).size() == 2);
  CHECK(even_partitions(12).size() == 11);  // partitions of 6
  CHECK(even_partitions(3).empty());
}

TEST_CASE("xi coefficients") {
  const auto P = [](std::vector<int> v) { return EvenPartition::of(std::move(v)); };
  CHECK(xi_coefficient(P({4}), P({4})) == 1);
  CHECK(xi_coefficient(P({4}), P({2, 2})) == 2);
  CHECK(xi_coefficient(P({2, 2}), P({2, 2})) == 1);
  CHECK(xi_coefficient(P({2, 2}), P({4})) == 0);  // not a refinement
  CHECK(xi_coefficient(P({6}), P({2, 2, 2})) == 6);

  // xi to the all-pairs partition is the product of b! for n <= 12
  for (int n = 2; n <= 12; n += 2) {
    std::vector<int> twos(n / 2, 2);
    for (const auto& O : even_partitions(n)) {
      BigInt prod = 1;
      for (int p : O.parts) {
        BigInt f = 1;
        for (int i = 2; i <= p / 2; ++i) f *= i;
        prod *= f;
      }
      CHECK(xi_coefficient(O, EvenPartition::of(twos)) == prod);
    }
  }
}

TEST_CASE("lambda recursion") {
  SUBCASE("all-pairs coefficient is one, Gaussian kills the rest") {
    for (int n = 2; n <= 12; n += 2) {
      const auto lam = lambda_coefficients(n, gaussian_mu(n / 2));
      for (const auto& [O, l] : lam) {
        if (O.parts.front() == 2)
          CHECK(l == 1);
        else
          CHECK(l == 0);
      }
    }
  }
  SUBCASE("lambda((4)) = mu_2 - 2") {
    CounterRng rng(5, 1);
    for (int trial = 0; trial < 20; ++trial) {
      const auto mu = random_mu(2, rng);
      const auto lam = lambda_coefficients(4, mu);
      CHECK(lam.at(EvenPartition::of({4})) == mu[2] - 2);
      CHECK(lam.at(EvenPartition::of({2, 2})) == 1);
    }
    // uniform phase: mu_2 = 1 so lambda((4)) = -1
    const auto lam = lambda_coefficients(4, uniform_phase_mu(2));
    CHECK(lam.at(EvenPartition::of({4})) == -1);
  }
  SUBCASE("padding by pair blocks is invisible") {
    CounterRng rng(6, 2);
    for (int n = 4; n <= 10; n += 2) {
      const auto mu = random_mu(n / 2, rng);
      const auto big = lambda_coefficients(n, mu);
      const auto small2 = lambda_coefficients(n - 2, mu);
      CHECK(stability_property(big, small2));
    }
    // spot values quoted directly
    const auto mu = random_mu(4, rng);
    CHECK(lambda_coefficients(6, mu).at(EvenPartition::of({2, 4})) ==
          lambda_coefficients(4, mu).at(EvenPartition::of({4})));
    CHECK(lambda_coefficients(8, mu).at(EvenPartition::of({2, 2, 4})) ==
          lambda_coefficients(4, mu).at(EvenPartition::of({4})));
  }
  SUBCASE("triangularity: lambda depends only on the moments it can see") {
    CounterRng rng(7, 3);
    auto mu1 = random_mu(4, rng);
    auto mu2 = mu1;
    mu2[4] = mu2[4] + 17;  // change mu_4 only
    const auto l1 = lambda_coefficients(8, mu1);
    const auto l2 = lambda_coefficients(8, mu2);
    for (const auto& [O, v] : l1) {
      if (O.parts.front() <= 6)
        CHECK(l2.at(O) == v);
      else
        CHECK(l2.at(O) != v);
    }
  }
}

TEST_CASE("lambda bound audit") {
  SUBCASE("Gaussian: only pair partitions survive") {
    const auto lam = lambda_coefficients(10, gaussian_mu(5));
    const auto rep = lambda_bound_audit(lam, 10, 1 + 40);
    CHECK(rep.factorial_bound_holds);
  }
  SUBCASE("uniform phase with margin") {
    const auto lam = lambda_coefficients(12, uniform_phase_mu(6));
    const auto rep = lambda_bound_audit(lam, 12, 1 + 40);
    CHECK(rep.factorial_bound_holds);
    CHECK(rep.worst_factorial_ratio < 1.0);
    CHECK(rep.fitted_c1 >= 1);
  }
  SUBCASE("adversarial moments at half the induction envelope") {
    const int C0 = 3 + 40;
    std::vector<BigRat> mu(5);
    mu[0] = mu[1] = 1;
    for (int r = 2; r <= 4; ++r) {
      BigInt f = 1;
      for (int i = 2; i <= C0 * r; ++i) f *= i;
      mu[r] = BigRat(f, 2);
    }
    const auto lam = lambda_coefficients(8, mu);
    CHECK(lambda_bound_audit(lam, 8, C0).factorial_bound_holds);
  }
}

TEST_CASE("moment identity") {
  SUBCASE("distinct paired values give 1 = 1") {
    std::vector<std::pair<int, int>> entries = {{0, +1}, {0, -1}, {1, +1}, {1, -1}};
    const auto res = moment_bruteforce(entries, gaussian_mu(2));
    CHECK(res.lhs == 1);
    CHECK(res.equal);
  }
  SUBCASE("unbalanced signs vanish on both sides") {
    std::vector<std::pair<int, int>> entries = {{0, +1}, {0, +1}, {0, -1}, {1, -1}};
    const auto res = moment_bruteforce(entries, gaussian_mu(2));
    CHECK(res.lhs == 0);
    CHECK(res.rhs == 0);
    CHECK(res.equal);
  }
  SUBCASE("four equal values, signs ++--") {
    CounterRng rng(9, 4);
    for (int trial = 0; trial < 20; ++trial) {
      const auto mu = random_mu(2, rng);
      std::vector<std::pair<int, int>> entries = {{7, +1}, {7, +1}, {7, -1}, {7, -1}};
      const auto res = moment_bruteforce(entries, mu);
      CHECK(res.lhs == mu[2]);
      CHECK(res.equal);
    }
  }
  SUBCASE("random sign-balanced configurations n <= 8") {
    CounterRng rng(10, 5);
    for (int trial = 0; trial < 200; ++trial) {
      const int half = 1 + static_cast<int>(rng.uniform() * 4);
      const auto mu = random_mu(4, rng);
      std::vector<std::pair<int, int>> entries;
      for (int i = 0; i < half; ++i) {
        entries.push_back({static_cast<int>(rng.uniform() * 3), +1});
        entries.push_back({static_cast<int>(rng.uniform() * 3), -1});
      }
      CHECK(moment_bruteforce(entries, mu).equal);
    }
  }
}

TEST_CASE("lambda table export") {
  const auto lam = lambda_coefficients(4, uniform_phase_mu(2));
  const std::string csv = lambda_table_csv(lam);
  CHECK(csv.find("partition,lambda_num,lambda_den\n") == 0);
  CHECK(csv.find("4,-1,1") != std::string::npos);
  CHECK(csv.find("2+2,1,1") != std::string::npos);
}
