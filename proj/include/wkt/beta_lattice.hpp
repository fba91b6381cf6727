#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wkt {

// Anisotropy weights of the torus. All entries strictly positive.
class BetaVector {
 public:
  explicit BetaVector(std::vector<double> entries);
  static BetaVector isotropic(int d) { return BetaVector(std::vector<double>(d, 1.0)); }
  // Seeded-uniform draw from [1,2]^d, the generic-torus default.
  static BetaVector generic(int d, std::uint64_t seed);

  int dim() const { return static_cast<int>(b_.size()); }
  double operator[](int i) const { return b_[i]; }
  const std::vector<double>& entries() const { return b_; }

 private:
  std::vector<double> b_;
};

// Point of Z_L^d stored as exact integer numerators over scale L, so that
// equality tests (needed by the interaction coefficient and pairing
// constraints) are integer comparisons.
struct LatticePoint {
  std::vector<std::int64_t> num;
  double scale = 1.0;  // L

  LatticePoint() = default;
  LatticePoint(std::vector<std::int64_t> n, double L) : num(std::move(n)), scale(L) {}
  int dim() const { return static_cast<int>(num.size()); }
  double coord(int i) const { return static_cast<double>(num[i]) / scale; }
  std::vector<double> real() const;

  friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
    return a.num == b.num;
  }
};

struct KineticScaling {
  double L = 0;
  double lambda = 0;
  double alpha = 0;
  double t_kin = 0;
  double gamma = 0;
  // gamma == 0 means alpha does not vary with L; the limits are iterated.
  bool iterated_limit = false;
};

// alpha = L^-gamma, lambda = sqrt(alpha L^d), t_kin = 1/(2 alpha^2).
KineticScaling kinetic_parameters(double L, int d, double gamma);

double beta_inner(std::span<const double> k, std::span<const double> l, const BetaVector& beta);
double beta_inner(const LatticePoint& k, const LatticePoint& l, const BetaVector& beta);
double beta_norm_sq(std::span<const double> k, const BetaVector& beta);
double beta_norm_sq(const LatticePoint& k, const BetaVector& beta);

// Omega = |k1|_b^2 - |k2|_b^2 + |k3|_b^2 - |k|_b^2. On momentum-conserving
// quadruples (k1 - k2 + k3 = k) this equals 2<k1 - k, k - k3>_b.
double resonance_factor(std::span<const double> k1, std::span<const double> k2,
                        std::span<const double> k3, std::span<const double> k,
                        const BetaVector& beta);
double resonance_factor(const LatticePoint& k1, const LatticePoint& k2,
                        const LatticePoint& k3, const LatticePoint& k,
                        const BetaVector& beta);

// Interaction coefficient: 1 if k2 is distinct from both k1 and k3,
// -1 if k1 = k2 = k3, 0 otherwise. Exact integer comparisons.
int epsilon_coeff(const LatticePoint& k1, const LatticePoint& k2, const LatticePoint& k3);

struct GenericityViolation {
  std::int64_t K1 = 0, K2 = 0;
  double value = 0;   // |beta^1 K1 + beta^2 K2|
  double bound = 0;   // c0 (1+|K1|+|K2|)^-1 log^-4(2+|K1|+|K2|)
};

struct PairCorrelationCount {
  int radius = 0;
  std::uint64_t count = 0;  // #{(X,Y,Z): |X|,|Y|,|Z|<=R, X!=0, max(|<X,Y>|,|<X,Z>|)<=1}
};

struct GenericityReport {
  std::vector<GenericityViolation> violations;
  std::vector<PairCorrelationCount> pair_counts;
  double fitted_exponent = 0;   // log-log slope of pair counts vs R
  double generic_exponent = 0;  // 3d - 4 + 1/6
};

// Numerical audit of the two Diophantine conditions a generic beta satisfies.
// A violation is data, not an error. pair_radii selects the R values for the
// triple-correlation count (empty = skip).
GenericityReport generic_beta_audit(const BetaVector& beta, int k_max, double c0,
                                    std::vector<int> pair_radii = {});

}  // namespace wkt
