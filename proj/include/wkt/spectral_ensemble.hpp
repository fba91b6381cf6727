#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wkt/beta_lattice.hpp"
#include "wkt/random_law.hpp"

namespace wkt {

// Truncated Fourier lattice of the torus: modes k = n/L with |n|_inf <= N,
// N = floor(cutoff * L), lexicographic over numerators.
struct BetaTorus {
  int d = 3;
  double L = 8.0;
  BetaVector beta = BetaVector::isotropic(3);
  double mode_cutoff = 1.0;

  int half_span() const { return static_cast<int>(mode_cutoff * L + 1e-9); }
  int per_axis() const { return 2 * half_span() + 1; }
  std::size_t n_modes() const;
  std::vector<std::int64_t> mode_numerator(std::size_t idx) const;
  std::vector<double> mode_point(std::size_t idx) const;
  std::size_t mode_index(const std::vector<std::int64_t>& num) const;
};

// Batch of realizations of the Fourier coefficients, with per-realization
// running diagnostics. Realization r is a deterministic function of
// (master_seed, r).
struct SpectralEnsemble {
  BetaTorus torus;
  double time = 0;  // microscopic time
  std::uint64_t master_seed = 0;
  std::vector<std::vector<std::complex<double>>> coeffs;  // [realization][mode]
  std::vector<double> mass0;      // at sampling time
  std::vector<double> z2_max;     // running sup of the Z-norm square
  double max_mass_drift = 0;

  std::size_t realizations() const { return coeffs.size(); }
  double mass_of(std::size_t r) const;      // L^-d sum |a_k|^2
  double z_norm_sq_of(std::size_t r) const;  // instantaneous
};

SpectralEnsemble sample_initial_data(const std::function<double(const std::vector<double>&)>& n_in,
                                     const RandomLaw& law, const BetaTorus& torus, std::size_t M,
                                     std::uint64_t seed);

struct NlsEvolveConfig {
  double dt = 0;             // 0 = auto from the pi/8 linear-phase rule
  double lambda = 1.0;       // coupling; alpha = lambda^2 L^-d
  bool record_z_norm = true;
};

// Strang-split pseudo-spectral stepping of the cubic NLS: exact Fourier-side
// linear flow (eigenvalue -2 pi |k|_beta^2), exact pointwise modulus-
// preserving rotation for the cubic term, 2/3-rule dealiasing mask.
void evolve_nls(SpectralEnsemble& ens, double t_end, const NlsEvolveConfig& cfg);

// a_k(t) = exp(-i delta pi L^2 |k|_b^2 t) exp(-2 i lambda^2 M delta T_kin t) u_hat
// (forward) or its inverse; t is kinetic time, u_hat at microscopic time
// delta T_kin t.
std::vector<std::complex<double>> gauge_transform(
    const std::vector<std::complex<double>>& u_hat, double t_kinetic, double delta,
    const KineticScaling& scaling, double mass, const BetaTorus& torus, bool forward);

struct MomentSpec {
  struct Entry {
    std::vector<std::int64_t> k_num;
    int p = 1, q = 1;
  };
  std::vector<Entry> entries;  // k_j pairwise distinct
  void validate(const BetaTorus& torus) const;
};

struct MomentEstimate {
  std::complex<double> value;
  double stderr_est = 0;
};

// Unbiased Monte Carlo estimate of the joint moment
// E prod u_hat(k_j)^{p_j} conj(u_hat(k_j))^{q_j} with batch-means standard
// error; reduction over realizations is in fixed index order, so results do
// not depend on the worker count.
MomentEstimate estimate_moment(const SpectralEnsemble& ens, const MomentSpec& spec);
std::vector<MomentEstimate> estimate_moments(const SpectralEnsemble& ens,
                                             const std::vector<MomentSpec>& specs);

// `k,p,q,re,im,stderr,n_realizations` rows, one per spec
std::string moment_report_csv(const SpectralEnsemble& ens, const std::vector<MomentSpec>& specs,
                              const std::vector<MomentEstimate>& est);

struct ZMassDiag {
  std::vector<double> z_norm;  // sqrt of the running sup per realization
  std::vector<double> mass;
};
ZMassDiag z_norm_mass_diag(const SpectralEnsemble& ens);

// binary record per realization: text header (d, L, K, seed, t, config), then
// little-endian complex doubles in lexicographic mode order
void save_realization(const std::string& path, const SpectralEnsemble& ens, std::size_t r,
                      std::uint64_t config_hash);
std::vector<std::complex<double>> load_realization(const std::string& path,
                                                   const BetaTorus& expected);

}  // namespace wkt
