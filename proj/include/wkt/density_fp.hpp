#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "wkt/random_law.hpp"
#include "wkt/wke.hpp"

namespace wkt {

// Radial density on C ~ R^2 stored on a finite-volume cell grid:
// faces[0] = 0 < faces[1] < ... < faces[N]; values are cell averages.
struct RadialDensity {
  std::vector<double> faces;
  std::vector<double> values;

  std::size_t cells() const { return values.size(); }
  double center(std::size_t i) const { return 0.5 * (faces[i] + faces[i + 1]); }
  double cell_area(std::size_t i) const;  // 2D annulus area
  double mass() const;                    // 2 pi int rho r dr
  double min_value() const;

  // geometric stretching toward r_max
  static RadialDensity geometric_grid(double r_max, std::size_t n_cells, double stretch = 1.005);
};

// Tabulate a law's radial density rho_* on a grid (cell-averaged by midpoint).
RadialDensity tabulate_law(const RandomLaw& law, double r_max, std::size_t n_cells);

// rho_k(0, v) = rho_*(v / sqrt(n_in_k)) / n_in_k; exact measure-preserving
// rescale of the grid. Requires n_in_k > 0 (undefined otherwise).
RadialDensity initial_density(const RadialDensity& rho_star, double n_in_k);

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<RadialDensity> states;
};

struct DensityConfig {
  double dt = 0;        // 0 = from drift CFL
  double cfl = 0.4;
  int snapshot_every = 8;
};

// d rho/dt = (sigma(t)/4) Lap rho - (gamma(t)/2) div(v rho), radial form,
// conservative finite volumes, diffusion implicit / drift explicit.
DensityTrajectory evolve_density(const RadialDensity& rho0, const DriftDiffusionPath& path,
                                 const DensityConfig& cfg = {});

// int |v|^(2r) rho = 2 pi int rho(s) s^(2r+1) ds, exact per cell.
double density_moments(const RadialDensity& rho, int r);

// `r,rho` rows after a header line carrying (t, k, sigma, gamma)
std::string density_snapshot_csv(const RadialDensity& rho, double t,
                                 const std::vector<double>& k, double sigma, double gamma);

struct CharacteristicResult {
  std::vector<std::complex<double>> L;   // values at the requested xi points
  bool left_domain = false;              // characteristic escaped the xi bound
  double max_excursion = 0;              // max |xi(s)| / |xi(t)| along the flow
};

// Solves dL/dt = gamma xi dL/dxi + sigma (i xi + i xi^2 dL/dxi) by backward
// characteristics; initial data L(0, xi) from the law's squared-modulus
// characteristic function at variance n_in_k. xi may be complex.
CharacteristicResult characteristic_flow(const RandomLaw& law, double n_in_k,
                                         const DriftDiffusionPath& path, double t_end,
                                         const std::vector<std::complex<double>>& xi_grid,
                                         double xi_domain_bound = 1e3, int substeps_per_sample = 4);

// Taylor coefficients of L at xi = 0 through order r_max via the Cauchy
// integral over a circle of the given radius.
std::vector<std::complex<double>> taylor_by_cauchy(
    const std::function<std::complex<double>(std::complex<double>)>& f, int r_max, double radius,
    int n_points = 64);

}  // namespace wkt
