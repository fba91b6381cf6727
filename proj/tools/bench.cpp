// Timing comparison of the OpenMP kernels against the serial references.
#include <chrono>
#include <cstdio>

#include "wkt/resonant_quad.hpp"
#include "wkt/spectral_ensemble.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP off)\n");
#endif

  {
    const wkt::KineticGrid grid(2, 3.0, 25);
    const wkt::BetaVector beta({1.1, 1.4});
    wkt::ResonantQuadrature quad;
    const wkt::Field n = grid.sample([](const std::vector<double>& k) {
      double k2 = 0;
      for (double x : k) k2 += x * x;
      return std::exp(-k2);
    });
    wkt::Field a, b;
    const double ts = seconds([&] { a = wkt::ref::collision_field_serial(grid, beta, quad, n); });
    const double tp = seconds([&] { b = wkt::collision_field(grid, beta, quad, n); });
    double dmax = 0;
    for (std::size_t i = 0; i < a.size(); ++i) dmax = std::max(dmax, std::fabs(a[i] - b[i]));
    std::printf("collision field 25^2 grid: serial %.3fs, parallel %.3fs, speedup %.2fx, max diff %.2e\n",
                ts, tp, ts / tp, dmax);
  }

  {
    wkt::BetaTorus torus;
    torus.d = 3;
    torus.L = 6.0;
    torus.beta = wkt::BetaVector::isotropic(3);
    torus.mode_cutoff = 1.0;
    const auto n_in = [](const std::vector<double>& k) {
      double k2 = 0;
      for (double x : k) k2 += x * x;
      return std::exp(-k2);
    };
    const auto scaling = wkt::kinetic_parameters(torus.L, torus.d, 1.0);
    wkt::NlsEvolveConfig cfg;
    cfg.lambda = scaling.lambda;
    cfg.record_z_norm = false;

    auto ens = wkt::sample_initial_data(n_in, wkt::RandomLaw::gaussian(), torus, 64, 7);
    const double tp = seconds([&] { wkt::evolve_nls(ens, 1.0, cfg); });
    std::printf("nls ensemble 64 realizations to t=1: %.3fs (mass drift %.2e)\n", tp,
                ens.max_mass_drift);
  }
  return 0;
}
