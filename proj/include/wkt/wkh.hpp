#pragma once

#include <functional>
#include <vector>

#include "wkt/wke.hpp"

namespace wkt {

// Finite mixture of factorized states: the forward Hewitt-Savage
// representation of admissible correlation tensors. Atoms share a common
// total mass X.
struct Mixture {
  KineticGrid grid;
  std::vector<double> weights;
  std::vector<Field> profiles;

  std::size_t atoms() const { return weights.size(); }
  double common_mass() const;  // X
  // throws if weights don't sum to 1 (1e-12), a profile is negative, or
  // atom masses disagree beyond 1e-6 relative
  void validate() const;
};

// Order-r correlation values evaluated lazily at index tuples.
class CorrelationTensor {
 public:
  using Evaluator = std::function<double(const std::vector<std::size_t>&)>;
  CorrelationTensor(int order, Evaluator ev) : r_(order), ev_(std::move(ev)) {}
  static CorrelationTensor from_mixture(const Mixture& mix, int order);

  int order() const { return r_; }
  double operator()(const std::vector<std::size_t>& tuple) const { return ev_(tuple); }

 private:
  int r_;
  Evaluator ev_;
};

// n_r(k_1..k_r) = sum_i w_i prod_j m_i(k_j) at the given index tuples.
std::vector<double> assemble_correlations(const Mixture& mix, int r,
                                          const std::vector<std::vector<std::size_t>>& tuples);

struct AdmissibilityReport {
  double worst_marginal_deviation = 0;  // relative to X * n_(r-1)
  double mass_deviation = 0;            // |int n_1 - X| / X
};

// Checks int n_r dk_r = X n_(r-1) at the sampled base tuples, orders 2..R,
// and int n_1 = X.
AdmissibilityReport check_admissible(const std::vector<CorrelationTensor>& tensors,
                                     const KineticGrid& grid, double X,
                                     const std::vector<std::vector<std::size_t>>& base_tuples);

struct MixtureTrajectory {
  std::vector<double> weights;
  std::vector<KineticTrajectory> atom_trajs;  // aligned snapshot times

  std::vector<double> times() const;
  Mixture at(std::size_t snapshot) const;
};

// Evolves every atom independently by the WKE; weights unchanged. By
// linearity the assembled tensors solve the hierarchy.
MixtureTrajectory evolve_mixture(const Mixture& mix, const BetaVector& beta,
                                 const ResonantQuadrature& quad, const WkeConfig& cfg);

struct WkhResidualStats {
  double max_resid = 0;
  double mean_resid = 0;
};

// Evaluates the order-r hierarchy right-hand side with the shared resonant
// quadrature at the given index tuples and compares against the centered time
// derivative of n_r around the given snapshot.
WkhResidualStats wkh_residual(const MixtureTrajectory& traj, const BetaVector& beta,
                              const ResonantQuadrature& quad, int r,
                              const std::vector<std::vector<std::size_t>>& tuples,
                              std::size_t snapshot);

// Order-r right-hand side alone (used by the r=1 vs collision identity test).
std::vector<double> wkh_rhs(const Mixture& mix, const BetaVector& beta,
                            const ResonantQuadrature& quad, int r,
                            const std::vector<std::vector<std::size_t>>& tuples);

// Mixture manifest: a text file listing `atom <weight> <profile-file>` lines;
// profiles stored as raw little-endian doubles next to the manifest.
void save_mixture(const std::string& manifest_path, const Mixture& mix);
Mixture load_mixture(const std::string& manifest_path, const KineticGrid& grid);

}  // namespace wkt
