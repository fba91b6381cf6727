#include "wkt/beta_lattice.hpp"

#include <cmath>
#include <cstdlib>

#include "wkt/rng.hpp"

namespace wkt {

BetaVector::BetaVector(std::vector<double> entries) : b_(std::move(entries)) {
  if (b_.empty()) throw std::invalid_argument("BetaVector: dimension must be >= 1");
  for (double v : b_)
    if (!(v > 0)) throw std::invalid_argument("BetaVector: entries must be strictly positive");
}

BetaVector BetaVector::generic(int d, std::uint64_t seed) {
  CounterRng rng(seed, /*stream=*/0x62657461u);
  std::vector<double> b(d);
  for (int i = 0; i < d; ++i) b[i] = 1.0 + rng.uniform();
  return BetaVector(std::move(b));
}

std::vector<double> LatticePoint::real() const {
  std::vector<double> x(num.size());
  for (size_t i = 0; i < num.size(); ++i) x[i] = static_cast<double>(num[i]) / scale;
  return x;
}

KineticScaling kinetic_parameters(double L, int d, double gamma) {
  if (!(L > 1)) throw std::invalid_argument("kinetic_parameters: L must be > 1");
  if (gamma < 0) throw std::invalid_argument("kinetic_parameters: gamma must be >= 0");
  KineticScaling s;
  s.L = L;
  s.gamma = gamma;
  s.alpha = std::pow(L, -gamma);
  s.lambda = std::sqrt(s.alpha * std::pow(L, d));
  s.t_kin = 1.0 / (2.0 * s.alpha * s.alpha);
  s.iterated_limit = (gamma == 0.0);
  return s;
}

static void check_dim(size_t a, size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double beta_inner(std::span<const double> k, std::span<const double> l, const BetaVector& beta) {
  check_dim(k.size(), l.size(), "beta_inner");
  check_dim(k.size(), static_cast<size_t>(beta.dim()), "beta_inner");
  double s = 0;
  for (size_t i = 0; i < k.size(); ++i) s += beta[static_cast<int>(i)] * k[i] * l[i];
  return s;
}

double beta_inner(const LatticePoint& k, const LatticePoint& l, const BetaVector& beta) {
  check_dim(k.num.size(), l.num.size(), "beta_inner");
  check_dim(k.num.size(), static_cast<size_t>(beta.dim()), "beta_inner");
  double s = 0;
  const double inv = 1.0 / (k.scale * l.scale);
  for (size_t i = 0; i < k.num.size(); ++i)
    s += beta[static_cast<int>(i)] * static_cast<double>(k.num[i]) * static_cast<double>(l.num[i]);
  return s * inv;
}

double beta_norm_sq(std::span<const double> k, const BetaVector& beta) {
  return beta_inner(k, k, beta);
}

double beta_norm_sq(const LatticePoint& k, const BetaVector& beta) {
  return beta_inner(k, k, beta);
}

double resonance_factor(std::span<const double> k1, std::span<const double> k2,
                        std::span<const double> k3, std::span<const double> k,
                        const BetaVector& beta) {
  return beta_norm_sq(k1, beta) - beta_norm_sq(k2, beta) + beta_norm_sq(k3, beta) -
         beta_norm_sq(k, beta);
}

double resonance_factor(const LatticePoint& k1, const LatticePoint& k2, const LatticePoint& k3,
                        const LatticePoint& k, const BetaVector& beta) {
  return beta_norm_sq(k1, beta) - beta_norm_sq(k2, beta) + beta_norm_sq(k3, beta) -
         beta_norm_sq(k, beta);
}

int epsilon_coeff(const LatticePoint& k1, const LatticePoint& k2, const LatticePoint& k3) {
  const bool eq12 = (k1 == k2);
  const bool eq23 = (k2 == k3);
  if (!eq12 && !eq23) return 1;
  if (eq12 && eq23) return -1;
  return 0;
}

GenericityReport generic_beta_audit(const BetaVector& beta, int k_max, double c0,
                                    std::vector<int> pair_radii) {
  if (beta.dim() < 2) throw std::invalid_argument("generic_beta_audit: needs d >= 2");
  if (k_max < 1) throw std::invalid_argument("generic_beta_audit: k_max >= 1");
  GenericityReport rep;
  const int d = beta.dim();
  rep.generic_exponent = 3.0 * d - 4.0 + 1.0 / 6.0;

  for (std::int64_t K1 = -k_max; K1 <= k_max; ++K1) {
    for (std::int64_t K2 = -k_max; K2 <= k_max; ++K2) {
      const std::int64_t s = std::llabs(K1) + std::llabs(K2);
      if (s == 0 || s > k_max) continue;
      const double value = std::fabs(beta[0] * static_cast<double>(K1) +
                                     beta[1] * static_cast<double>(K2));
      const double lg = std::log(2.0 + static_cast<double>(s));
      const double bound = c0 / (1.0 + static_cast<double>(s)) / (lg * lg * lg * lg);
      if (value < bound) rep.violations.push_back({K1, K2, value, bound});
    }
  }

  // Triple-correlation count of (generic2), using the factorization
  // #{(X,Y,Z)} = sum_X N(X)^2 with N(X) = #{Y: |Y|<=R, |<X,Y>_b|<=1}.
  for (int R : pair_radii) {
    std::vector<std::vector<std::int64_t>> pts;
    {
      std::vector<std::int64_t> cur(d, -R);
      while (true) {
        double nrm = 0;
        for (int i = 0; i < d; ++i) nrm += static_cast<double>(cur[i]) * static_cast<double>(cur[i]);
        if (nrm <= static_cast<double>(R) * R) pts.push_back(cur);
        int i = 0;
        for (; i < d; ++i) {
          if (++cur[i] <= R) break;
          cur[i] = -R;
        }
        if (i == d) break;
      }
    }
    std::uint64_t total = 0;
    for (const auto& X : pts) {
      bool zero = true;
      for (int i = 0; i < d; ++i)
        if (X[i] != 0) zero = false;
      if (zero) continue;
      std::uint64_t n_inner = 0;
      for (const auto& Y : pts) {
        double ip = 0;
        for (int i = 0; i < d; ++i)
          ip += beta[i] * static_cast<double>(X[i]) * static_cast<double>(Y[i]);
        if (std::fabs(ip) <= 1.0) ++n_inner;
      }
      total += n_inner * n_inner;
    }
    rep.pair_counts.push_back({R, total});
  }

  if (rep.pair_counts.size() >= 2) {
    // least-squares slope of log(count) against log(R)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rep.pair_counts.size());
    for (const auto& pc : rep.pair_counts) {
      const double x = std::log(static_cast<double>(pc.radius));
      const double y = std::log(static_cast<double>(pc.count > 0 ? pc.count : 1));
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    rep.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return rep;
}

}  // namespace wkt
