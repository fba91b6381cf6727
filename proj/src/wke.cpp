#include "wkt/wke.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wkt {

namespace {

double field_beta_energy(const KineticGrid& g, const BetaVector& beta, const Field& f) {
  double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto k = g.point(i);
    s += beta_norm_sq(std::span<const double>(k), beta) * f[i];
  }
  return s * g.cell_volume();
}

Field rhs(const KineticGrid& grid, const BetaVector& beta, const ResonantQuadrature& quad,
          const Field& n, int stride) {
  return stride > 1 ? collision_field_strided(grid, beta, quad, n, stride)
                    : collision_field(grid, beta, quad, n);
}

}  // namespace

KineticTrajectory solve_wke(const KineticGrid& grid, const BetaVector& beta,
                            const ResonantQuadrature& quad, const Field& n_in,
                            const WkeConfig& cfg) {
  if (n_in.size() != grid.size()) throw std::invalid_argument("solve_wke: field size mismatch");
  double n_in_max = 0;
  for (double v : n_in) {
    if (v < 0) throw std::invalid_argument("solve_wke: n_in must be nonnegative");
    n_in_max = std::max(n_in_max, v);
  }
  const double dt = cfg.dt > 0 ? cfg.dt : cfg.delta / 256.0;
  const int n_steps = std::max(1, static_cast<int>(std::llround(cfg.delta / dt)));

  KineticTrajectory traj{grid, beta, {}, {}, {}};
  Field n = n_in;
  const auto record = [&](double t) {
    traj.states.push_back({t, n, std::nullopt, std::nullopt});
    traj.mass.push_back(field_integral(grid, n));
    traj.energy.push_back(field_beta_energy(grid, beta, n));
  };
  record(0.0);

  Field k1, k2, k3, k4, tmp(grid.size());
  for (int step = 0; step < n_steps; ++step) {
    k1 = rhs(grid, beta, quad, n, cfg.stride);
    for (std::size_t i = 0; i < n.size(); ++i) tmp[i] = n[i] + 0.5 * dt * k1[i];
    k2 = rhs(grid, beta, quad, tmp, cfg.stride);
    for (std::size_t i = 0; i < n.size(); ++i) tmp[i] = n[i] + 0.5 * dt * k2[i];
    k3 = rhs(grid, beta, quad, tmp, cfg.stride);
    for (std::size_t i = 0; i < n.size(); ++i) tmp[i] = n[i] + dt * k3[i];
    k4 = rhs(grid, beta, quad, tmp, cfg.stride);
    for (std::size_t i = 0; i < n.size(); ++i)
      n[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    double mx = 0, mn = 0;
    for (double v : n) {
      mx = std::max(mx, std::fabs(v));
      mn = std::min(mn, v);
    }
    const double t = dt * (step + 1);
    if (mx > cfg.blowup_bound || !std::isfinite(mx)) {
      std::ostringstream os;
      os << "solve_wke: blow-up at t=" << t << " (max |n| = " << mx << ")";
      throw std::runtime_error(os.str());
    }
    if (mn < -cfg.negativity_tol * std::max(n_in_max, 1e-300)) {
      std::ostringstream os;
      os << "solve_wke: negativity beyond tolerance at t=" << t << " (min n = " << mn << ")";
      throw std::runtime_error(os.str());
    }
    if ((step + 1) % cfg.snapshot_every == 0 || step + 1 == n_steps) record(t);
  }
  return traj;
}

DriftDiffusionPath sigma_gamma_path(const KineticTrajectory& traj, const ResonantQuadrature& quad,
                                    std::size_t ik) {
  DriftDiffusionPath p;
  for (const auto& st : traj.states) {
    const SigmaGamma sg = sigma_gamma(traj.grid, traj.beta, quad, st.n, ik);
    p.times.push_back(st.t);
    p.sigma.push_back(sg.sigma);
    p.gamma.push_back(sg.gamma);
  }
  return p;
}

Wke0Result solve_wke0(const KineticTrajectory& n_traj, const ResonantQuadrature& quad) {
  if (n_traj.states.size() < 2) throw std::invalid_argument("solve_wke0: trajectory too short");
  const KineticGrid& grid = n_traj.grid;
  const std::size_t nt = n_traj.states.size();

  // gamma_k at every snapshot and grid point (gamma field per snapshot)
  std::vector<Field> gam(nt, Field(grid.size()));
  for (std::size_t s = 0; s < nt; ++s) {
    const Field& n = n_traj.states[s].n;
    const std::int64_t sz = static_cast<std::int64_t>(grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::int64_t ik = 0; ik < sz; ++ik)
      gam[s][ik] = sigma_gamma(grid, n_traj.beta, quad, n, static_cast<std::size_t>(ik)).gamma;
  }

  Wke0Result out{{grid, n_traj.beta, {}, {}, {}},
                 {grid, n_traj.beta, {}, {}, {}},
                 {grid, n_traj.beta, {}, {}, {}}};
  const Field& n_in = n_traj.states.front().n;

  Field n0 = n_in;
  Field gamma_integral(grid.size(), 0.0);
  const auto record = [&](std::size_t s) {
    const double t = n_traj.states[s].t;
    out.n0_traj.states.push_back({t, n0, std::nullopt, std::nullopt});
    Field npl(grid.size());
    for (std::size_t i = 0; i < npl.size(); ++i) npl[i] = n_traj.states[s].n[i] - n0[i];
    out.n_plus_traj.states.push_back({t, std::move(npl), std::nullopt, std::nullopt});
    Field cf(grid.size());
    for (std::size_t i = 0; i < cf.size(); ++i) cf[i] = n_in[i] * std::exp(gamma_integral[i]);
    out.n0_closed_form.states.push_back({t, std::move(cf), std::nullopt, std::nullopt});
  };
  record(0);

  for (std::size_t s = 0; s + 1 < nt; ++s) {
    const double dt = n_traj.states[s + 1].t - n_traj.states[s].t;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      // RK4 for d n0/dt = gamma(t) n0 with gamma linear on the interval
      const double g0 = gam[s][i], g1 = gam[s + 1][i], gm = 0.5 * (g0 + g1);
      const double a1 = g0 * n0[i];
      const double a2 = gm * (n0[i] + 0.5 * dt * a1);
      const double a3 = gm * (n0[i] + 0.5 * dt * a2);
      const double a4 = g1 * (n0[i] + dt * a3);
      n0[i] += dt / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
      gamma_integral[i] += 0.5 * dt * (g0 + g1);
    }
    record(s + 1);
  }
  return out;
}

double moment_mu_q(double n0, double n_plus, const std::vector<double>& mu, int q) {
  if (q < 0) throw std::invalid_argument("moment_mu_q: q >= 0");
  if (static_cast<int>(mu.size()) <= q) throw std::invalid_argument("moment_mu_q: mu too short");
  double total = 0;
  for (int p = 0; p <= q; ++p) {
    double binom = 1;
    for (int i = 0; i < p; ++i) binom = binom * (q - i) / (i + 1);
    double fact = 1;
    for (int i = 2; i <= q - p; ++i) fact *= i;
    total += binom * binom * fact * mu[p] * std::pow(n0, p) * std::pow(n_plus, q - p);
  }
  return total;
}

double m_kin(const KineticTrajectory& traj) {
  double mx = 0;
  for (const auto& st : traj.states)
    for (double v : st.n) mx = std::max(mx, std::fabs(v));
  return 1.0 + mx;
}

void save_snapshot(const std::string& path, const KineticTrajectory& traj, std::size_t i,
                   std::uint64_t config_hash) {
  const KineticState& st = traj.states.at(i);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_snapshot: cannot open " + path);
  std::ostringstream hdr;
  hdr << "wkt-snapshot d=" << traj.grid.dim() << " k_max=" << traj.grid.k_max()
      << " h=" << traj.grid.h() << " t=" << st.t << " beta=";
  for (int a = 0; a < traj.beta.dim(); ++a)
    hdr << (a ? "," : "") << traj.beta[a];
  hdr << " config=" << config_hash << "\n";
  const std::string h = hdr.str();
  f.write(h.data(), static_cast<std::streamsize>(h.size()));
  f.write(reinterpret_cast<const char*>(st.n.data()),
          static_cast<std::streamsize>(st.n.size() * sizeof(double)));
}

KineticState load_snapshot(const std::string& path, const KineticGrid& expected_grid) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_snapshot: cannot open " + path);
  std::string header;
  std::getline(f, header);
  KineticState st;
  const auto pos = header.find(" t=");
  if (pos == std::string::npos) throw std::runtime_error("load_snapshot: bad header");
  st.t = std::stod(header.substr(pos + 3));
  st.n.resize(expected_grid.size());
  f.read(reinterpret_cast<char*>(st.n.data()),
         static_cast<std::streamsize>(st.n.size() * sizeof(double)));
  if (!f) throw std::runtime_error("load_snapshot: truncated payload");
  return st;
}

std::string trajectory_summary_csv(const KineticTrajectory& traj) {
  std::ostringstream os;
  os << "t,mass,energy,max_n,min_n\n";
  os.precision(17);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    double mx = -1e300, mn = 1e300;
    for (double v : traj.states[i].n) {
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
    os << traj.states[i].t << "," << traj.mass[i] << "," << traj.energy[i] << "," << mx << ","
       << mn << "\n";
  }
  return os.str();
}

}  // namespace wkt
