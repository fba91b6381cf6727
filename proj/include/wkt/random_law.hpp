#pragma once

#include <complex>
#include <vector>

#include "wkt/rng.hpp"

namespace wkt {

enum class LawKind { Gaussian, UniformPhase, RadialTabulated };

// Law of the i.i.d. coefficients eta_k: rotation symmetric by construction
// (only the modulus law is specified, the phase is uniform), E eta = 0,
// E|eta|^2 = 1.
class RandomLaw {
 public:
  static RandomLaw gaussian();
  static RandomLaw uniform_phase();
  // rho is the radial density on C ~ R^2 sampled at the given radii
  // (normalization 2*pi*int rho(r) r dr = 1, mu_1 = 1 enforced within tol).
  static RandomLaw radial_tabulated(std::vector<double> radii, std::vector<double> rho,
                                    int n_moments = 8);

  LawKind kind() const { return kind_; }

  // mu_r = E |eta|^(2r); mu_0 = 1.
  double moment(int r) const;
  const std::vector<double>& moments() const { return mu_; }

  std::complex<double> sample(CounterRng& rng) const;

  // L0(xi) = E exp(i xi |eta|^2 n), the squared-modulus characteristic
  // function of sqrt(n) * eta; xi may be complex (entire in xi for bounded
  // moduli, and for the Gaussian case as the closed form 1/(1 - i xi n)).
  std::complex<double> modulus_char(std::complex<double> xi, double n) const;

  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& density() const { return rho_; }

 private:
  RandomLaw() = default;
  LawKind kind_ = LawKind::Gaussian;
  std::vector<double> mu_;           // mu_0..mu_max
  std::vector<double> radii_, rho_;  // tabulated law only
  std::vector<double> cdf_;          // cdf over radii, for inverse sampling
};

}  // namespace wkt
