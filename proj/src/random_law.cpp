#include "wkt/random_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wkt {

namespace {
constexpr double kTwoPi = 6.283185307179586476925;

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// trapezoid of f(r lattice) against 2 pi r dr
double radial_integral(const std::vector<double>& r, const std::vector<double>& f) {
  double s = 0;
  for (size_t i = 0; i + 1 < r.size(); ++i) {
    const double a = f[i] * r[i], b = f[i + 1] * r[i + 1];
    s += 0.5 * (a + b) * (r[i + 1] - r[i]);
  }
  return kTwoPi * s;
}
}  // namespace

RandomLaw RandomLaw::gaussian() {
  RandomLaw law;
  law.kind_ = LawKind::Gaussian;
  law.mu_.resize(21);
  for (int r = 0; r <= 20; ++r) law.mu_[r] = factorial(r);
  return law;
}

RandomLaw RandomLaw::uniform_phase() {
  RandomLaw law;
  law.kind_ = LawKind::UniformPhase;
  law.mu_.assign(21, 1.0);
  return law;
}

RandomLaw RandomLaw::radial_tabulated(std::vector<double> radii, std::vector<double> rho,
                                      int n_moments) {
  if (radii.size() != rho.size() || radii.size() < 2)
    throw std::invalid_argument("radial_tabulated: radii/rho size mismatch");
  if (radii.front() != 0.0) throw std::invalid_argument("radial_tabulated: radii must start at 0");
  for (size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i] < radii[i + 1]))
      throw std::invalid_argument("radial_tabulated: radii must increase");
  for (double v : rho)
    if (v < 0) throw std::invalid_argument("radial_tabulated: rho must be nonnegative");

  RandomLaw law;
  law.kind_ = LawKind::RadialTabulated;
  const double mass = radial_integral(radii, rho);
  if (std::fabs(mass - 1.0) > 1e-6)
    throw std::invalid_argument("radial_tabulated: density not normalized");
  std::vector<double> f(radii.size());
  law.mu_.resize(n_moments + 1);
  for (int m = 0; m <= n_moments; ++m) {
    for (size_t i = 0; i < radii.size(); ++i) f[i] = rho[i] * std::pow(radii[i], 2 * m);
    law.mu_[m] = radial_integral(radii, f);
  }
  if (std::fabs(law.mu_[1] - 1.0) > 1e-10)
    throw std::invalid_argument("radial_tabulated: second moment must be 1 (mu_1 = 1)");
  law.mu_[0] = 1.0;

  // cdf for inverse sampling of the modulus
  law.cdf_.assign(radii.size(), 0.0);
  for (size_t i = 0; i + 1 < radii.size(); ++i) {
    const double a = rho[i] * radii[i], b = rho[i + 1] * radii[i + 1];
    law.cdf_[i + 1] = law.cdf_[i] + kTwoPi * 0.5 * (a + b) * (radii[i + 1] - radii[i]);
  }
  for (double& c : law.cdf_) c /= law.cdf_.back();
  law.radii_ = std::move(radii);
  law.rho_ = std::move(rho);
  return law;
}

double RandomLaw::moment(int r) const {
  if (r < 0) throw std::invalid_argument("moment: r >= 0");
  if (r >= static_cast<int>(mu_.size()))
    throw std::invalid_argument("moment: order beyond tabulated range");
  return mu_[r];
}

std::complex<double> RandomLaw::sample(CounterRng& rng) const {
  switch (kind_) {
    case LawKind::Gaussian:
      return rng.complex_gaussian();
    case LawKind::UniformPhase:
      return rng.unit_phase();
    case LawKind::RadialTabulated: {
      const double u = rng.uniform();
      const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
      size_t hi = std::min<size_t>(cdf_.size() - 1,
                                   static_cast<size_t>(std::max<std::ptrdiff_t>(
                                       1, it - cdf_.begin())));
      const size_t lo = hi - 1;
      const double span = cdf_[hi] - cdf_[lo];
      const double w = span > 0 ? (u - cdf_[lo]) / span : 0.0;
      const double r = radii_[lo] + w * (radii_[hi] - radii_[lo]);
      return r * rng.unit_phase();
    }
  }
  return {};
}

std::complex<double> RandomLaw::modulus_char(std::complex<double> xi, double n) const {
  const std::complex<double> I(0.0, 1.0);
  switch (kind_) {
    case LawKind::Gaussian:
      // |eta|^2 is exponential(1)
      return 1.0 / (1.0 - I * xi * n);
    case LawKind::UniformPhase:
      return std::exp(I * xi * n);
    case LawKind::RadialTabulated: {
      std::complex<double> s = 0;
      for (size_t i = 0; i + 1 < radii_.size(); ++i) {
        const auto g = [&](size_t j) {
          return rho_[j] * radii_[j] * std::exp(I * xi * n * radii_[j] * radii_[j]);
        };
        s += 0.5 * (g(i) + g(i + 1)) * (radii_[i + 1] - radii_[i]);
      }
      return kTwoPi * s;
    }
  }
  return {};
}

}  // namespace wkt
