#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wkt/kinetic_grid.hpp"
#include "wkt/resonant_quad.hpp"

namespace wkt {

// State of the kinetic density at one time, with the optional tangential /
// non-tangential companions n = n0 + n_plus.
struct KineticState {
  double t = 0;
  Field n;
  std::optional<Field> n0;
  std::optional<Field> n_plus;
};

struct KineticTrajectory {
  KineticGrid grid;
  BetaVector beta;
  std::vector<KineticState> states;
  std::vector<double> mass;    // per snapshot
  std::vector<double> energy;  // beta-energy per snapshot

  const KineticState& at(std::size_t i) const { return states[i]; }
  std::size_t size() const { return states.size(); }
};

struct WkeConfig {
  double delta = 0.1;          // kinetic horizon
  double dt = 0;               // 0 = delta / 256
  int snapshot_every = 16;     // store every k-th step (plus endpoints)
  int stride = 1;              // >1: strided collision evaluation + interpolation
  double blowup_bound = 1e6;   // abort if max |n| exceeds
  double negativity_tol = 1e-4;  // abort if min n dips below -tol * max n_in
};

// RK4 time stepping of dn/dt = K(n, n, n).
KineticTrajectory solve_wke(const KineticGrid& grid, const BetaVector& beta,
                            const ResonantQuadrature& quad, const Field& n_in,
                            const WkeConfig& cfg);

// Per-snapshot sigma/gamma at a fixed output point.
struct DriftDiffusionPath {
  std::vector<double> times;
  std::vector<double> sigma;
  std::vector<double> gamma;
};
DriftDiffusionPath sigma_gamma_path(const KineticTrajectory& traj, const ResonantQuadrature& quad,
                                    std::size_t ik);

struct Wke0Result {
  KineticTrajectory n0_traj;          // linear equation d n0/dt = gamma_k(t) n0
  KineticTrajectory n_plus_traj;      // n - n0
  KineticTrajectory n0_closed_form;   // n_in * exp(int_0^t gamma_k ds), cross-check
};

// Solves the tangential part along an already computed trajectory. The
// per-point rate gamma_k(t) is evaluated on the trajectory snapshots with the
// same quadrature, then the linear ODE is integrated per grid point.
Wke0Result solve_wke0(const KineticTrajectory& n_traj, const ResonantQuadrature& quad);

// mu_q = sum_p C(q,p)^2 (q-p)! mu_p n0^p nplus^(q-p)
double moment_mu_q(double n0, double n_plus, const std::vector<double>& mu, int q);

// 1 + sup over snapshots and grid points of |n|
double m_kin(const KineticTrajectory& traj);

// Snapshot persistence: one file per snapshot, little-endian doubles in
// lexicographic order after a text header line.
void save_snapshot(const std::string& path, const KineticTrajectory& traj, std::size_t i,
                   std::uint64_t config_hash);
KineticState load_snapshot(const std::string& path, const KineticGrid& expected_grid);

// Summary report rows `t,mass,energy,max_n,min_n`.
std::string trajectory_summary_csv(const KineticTrajectory& traj);

}  // namespace wkt
