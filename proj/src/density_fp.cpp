#include "wkt/density_fp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wkt {

namespace {
constexpr double kPi = 3.14159265358979323846;

double interp(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
  if (ts.empty()) throw std::invalid_argument("empty path");
  if (t <= ts.front()) return vs.front();
  if (t >= ts.back()) return vs.back();
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
  return vs[lo] + w * (vs[hi] - vs[lo]);
}
}  // namespace

double RadialDensity::cell_area(std::size_t i) const {
  return kPi * (faces[i + 1] * faces[i + 1] - faces[i] * faces[i]);
}

double RadialDensity::mass() const {
  double m = 0;
  for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * cell_area(i);
  return m;
}

double RadialDensity::min_value() const {
  double m = values.empty() ? 0.0 : values[0];
  for (double v : values) m = std::min(m, v);
  return m;
}

RadialDensity RadialDensity::geometric_grid(double r_max, std::size_t n_cells, double stretch) {
  if (!(r_max > 0) || n_cells < 4) throw std::invalid_argument("geometric_grid: bad arguments");
  RadialDensity rho;
  rho.faces.resize(n_cells + 1);
  double w = 1.0, total = 0.0;
  std::vector<double> widths(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    widths[i] = w;
    total += w;
    w *= stretch;
  }
  rho.faces[0] = 0;
  for (std::size_t i = 0; i < n_cells; ++i)
    rho.faces[i + 1] = rho.faces[i] + widths[i] * r_max / total;
  rho.faces[n_cells] = r_max;
  rho.values.assign(n_cells, 0.0);
  return rho;
}

RadialDensity tabulate_law(const RandomLaw& law, double r_max, std::size_t n_cells) {
  RadialDensity rho = RadialDensity::geometric_grid(r_max, n_cells);
  switch (law.kind()) {
    case LawKind::Gaussian:
      for (std::size_t i = 0; i < n_cells; ++i) {
        const double r = rho.center(i);
        rho.values[i] = std::exp(-r * r) / kPi;
      }
      break;
    case LawKind::UniformPhase:
      throw std::invalid_argument("tabulate_law: the unit-circle law has no planar density");
    case LawKind::RadialTabulated: {
      const auto& rr = law.radii();
      const auto& vv = law.density();
      for (std::size_t i = 0; i < n_cells; ++i) {
        const double r = rho.center(i);
        rho.values[i] = r >= rr.back() ? 0.0 : interp(rr, vv, r);
      }
      break;
    }
  }
  // renormalize the cell-averaged table so mass() is 1 exactly
  const double m = rho.mass();
  if (!(m > 0)) throw std::invalid_argument("tabulate_law: degenerate table");
  for (double& v : rho.values) v /= m;
  return rho;
}

RadialDensity initial_density(const RadialDensity& rho_star, double n_in_k) {
  if (!(n_in_k > 0)) throw std::invalid_argument("initial_density: requires n_in(k) > 0");
  const double s = std::sqrt(n_in_k);
  RadialDensity out;
  out.faces.resize(rho_star.faces.size());
  for (std::size_t i = 0; i < out.faces.size(); ++i) out.faces[i] = rho_star.faces[i] * s;
  out.values.resize(rho_star.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = rho_star.values[i] / n_in_k;
  return out;
}

DensityTrajectory evolve_density(const RadialDensity& rho0, const DriftDiffusionPath& path,
                                 const DensityConfig& cfg) {
  if (path.times.empty()) throw std::invalid_argument("evolve_density: empty path");
  const double t_end = path.times.back();
  const std::size_t n = rho0.cells();

  double gamma_max = 0;
  for (double g : path.gamma) gamma_max = std::max(gamma_max, std::fabs(g));
  for (double s : path.sigma)
    if (s < -1e-12) throw std::runtime_error("evolve_density: sigma < 0 along the path");

  double dt = cfg.dt;
  if (dt <= 0) {
    double lim = t_end;
    for (std::size_t i = 0; i < n; ++i) {
      const double width = rho0.faces[i + 1] - rho0.faces[i];
      const double speed = 0.5 * gamma_max * rho0.faces[i + 1] + 1e-30;
      lim = std::min(lim, cfg.cfl * width / speed);
    }
    dt = lim;
  }
  const int n_steps = std::max(1, static_cast<int>(std::ceil(t_end / dt)));
  dt = t_end / n_steps;

  DensityTrajectory traj;
  RadialDensity rho = rho0;
  traj.times.push_back(0.0);
  traj.states.push_back(rho);

  std::vector<double> area(n), rc(n);
  for (std::size_t i = 0; i < n; ++i) {
    area[i] = rho.cell_area(i);
    rc[i] = rho.center(i);
  }

  // Bernoulli function x / (e^x - 1)
  const auto bern = [](double x) {
    if (std::fabs(x) < 1e-8) return 1.0 - 0.5 * x + x * x / 12.0;
    return x / std::expm1(x);
  };

  // Scharfetter-Gummel face flux, Crank-Nicolson in time: the flux operator
  // L is assembled at the step midpoint and (A/dt - L/2) rho' = (A/dt + L/2) rho
  // is solved; zero flux through r = 0 and r = r_max keeps mass exact.
  std::vector<double> lower(n), diag(n), upper(n), rhsv(n);
  std::vector<double> f_lo(n + 1, 0.0), f_hi(n + 1, 0.0);  // F_f = f_lo rho_{i-1} + f_hi rho_i
  for (int step = 0; step < n_steps; ++step) {
    const double t_mid = (step + 0.5) * dt;
    const double sig = interp(path.times, path.sigma, t_mid);
    const double gam = interp(path.times, path.gamma, t_mid);
    const double D = 0.25 * sig;

    for (std::size_t f = 1; f < n; ++f) {
      const double rf = rho.faces[f];
      const double v = 0.5 * gam * rf;  // outward drift velocity
      const double dr = rc[f] - rc[f - 1];
      double cl, cr;  // F = 2 pi r_f (cl rho_{f-1} + cr rho_f)
      if (D > 1e-14 * std::max(1.0, std::fabs(v) * dr)) {
        const double pe = v * dr / D;
        cl = D / dr * bern(-pe);
        cr = -D / dr * bern(pe);
      } else {  // vanishing diffusion: upwind
        cl = v > 0 ? v : 0.0;
        cr = v > 0 ? 0.0 : v;
      }
      f_lo[f] = 2.0 * kPi * rf * cl;
      f_hi[f] = 2.0 * kPi * rf * cr;
    }

    // (L rho)_i = F_i - F_{i+1}
    const auto apply_L = [&](const std::vector<double>& x, std::size_t i) {
      const double fin = i > 0 ? f_lo[i] * x[i - 1] + f_hi[i] * x[i] : 0.0;
      const double fout = i + 1 < n ? f_lo[i + 1] * x[i] + f_hi[i + 1] * x[i + 1] : 0.0;
      return fin - fout;
    };
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = area[i] / dt;
      lower[i] = upper[i] = 0.0;
      rhsv[i] = area[i] / dt * rho.values[i] + 0.5 * apply_L(rho.values, i);
      if (i > 0) {
        lower[i] -= 0.5 * f_lo[i];
        diag[i] -= 0.5 * f_hi[i];
      }
      if (i + 1 < n) {
        diag[i] += 0.5 * f_lo[i + 1];
        upper[i] += 0.5 * f_hi[i + 1];
      }
    }
    // Thomas solve
    for (std::size_t i = 1; i < n; ++i) {
      const double m = lower[i] / diag[i - 1];
      diag[i] -= m * upper[i - 1];
      rhsv[i] -= m * rhsv[i - 1];
    }
    rho.values[n - 1] = rhsv[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
      rho.values[i] = (rhsv[i] - upper[i] * rho.values[i + 1]) / diag[i];

    if ((step + 1) % cfg.snapshot_every == 0 || step + 1 == n_steps) {
      traj.times.push_back((step + 1) * dt);
      traj.states.push_back(rho);
    }
  }
  return traj;
}

double density_moments(const RadialDensity& rho, int r) {
  if (r < 0) throw std::invalid_argument("density_moments: r >= 0");
  double m = 0;
  const double p = 2.0 * r + 2.0;
  for (std::size_t i = 0; i < rho.cells(); ++i) {
    const double a = rho.faces[i], b = rho.faces[i + 1];
    m += rho.values[i] * 2.0 * kPi * (std::pow(b, p) - std::pow(a, p)) / p;
  }
  return m;
}

std::string density_snapshot_csv(const RadialDensity& rho, double t,
                                 const std::vector<double>& k, double sigma, double gamma) {
  std::ostringstream os;
  os << "# t=" << t << " k=(";
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? " " : "") << k[i];
  os << ") sigma=" << sigma << " gamma=" << gamma << "\n";
  os << "r,rho\n";
  os.precision(17);
  for (std::size_t i = 0; i < rho.cells(); ++i) os << rho.center(i) << "," << rho.values[i] << "\n";
  return os.str();
}

CharacteristicResult characteristic_flow(const RandomLaw& law, double n_in_k,
                                         const DriftDiffusionPath& path, double t_end,
                                         const std::vector<std::complex<double>>& xi_grid,
                                         double xi_domain_bound, int substeps_per_sample) {
  using cplx = std::complex<double>;
  const cplx I(0.0, 1.0);
  CharacteristicResult res;
  res.L.reserve(xi_grid.size());

  const int n_sub = std::max<int>(8, static_cast<int>(path.times.size()) * substeps_per_sample);
  const double dt = t_end / n_sub;

  for (const cplx xi_t : xi_grid) {
    // backward in time: d xi/ds = -(gamma(s) xi + i sigma(s) xi^2),
    // d phi/ds = i sigma(s) xi;  L(t, xi_t) = L0(xi(0)) exp(phi(t) - phi(0))
    cplx xi = xi_t;
    cplx phi = 0.0;
    double excursion = 1.0;
    const double ref = std::abs(xi_t) + 1e-300;
    for (int m = n_sub; m-- > 0;) {
      const double s1 = m * dt, s2 = (m + 1) * dt, sm = 0.5 * (s1 + s2);
      const auto f = [&](double s, cplx x) {
        const double g = interp(path.times, path.gamma, s);
        const double sg = interp(path.times, path.sigma, s);
        return std::make_pair(-(g * x + I * sg * x * x), I * sg * x);
      };
      // RK4 going from s2 down to s1 (step -dt)
      const auto [k1x, k1p] = f(s2, xi);
      const auto [k2x, k2p] = f(sm, xi - 0.5 * dt * k1x);
      const auto [k3x, k3p] = f(sm, xi - 0.5 * dt * k2x);
      const auto [k4x, k4p] = f(s1, xi - dt * k3x);
      xi -= dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      phi -= dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      excursion = std::max(excursion, std::abs(xi) / ref);
      if (std::abs(xi) > xi_domain_bound) res.left_domain = true;
    }
    res.max_excursion = std::max(res.max_excursion, excursion);
    res.L.push_back(law.modulus_char(xi, n_in_k) * std::exp(-phi));
  }
  return res;
}

std::vector<std::complex<double>> taylor_by_cauchy(
    const std::function<std::complex<double>(std::complex<double>)>& f, int r_max, double radius,
    int n_points) {
  using cplx = std::complex<double>;
  std::vector<cplx> samples(n_points);
  for (int j = 0; j < n_points; ++j) {
    const double th = 2.0 * kPi * j / n_points;
    samples[j] = f(radius * cplx(std::cos(th), std::sin(th)));
  }
  std::vector<cplx> coeff(r_max + 1);
  for (int r = 0; r <= r_max; ++r) {
    cplx acc = 0;
    for (int j = 0; j < n_points; ++j) {
      const double th = 2.0 * kPi * j / n_points;
      acc += samples[j] * cplx(std::cos(r * th), -std::sin(r * th));
    }
    coeff[r] = acc / (static_cast<double>(n_points) * std::pow(radius, r));
  }
  return coeff;
}

}  // namespace wkt
