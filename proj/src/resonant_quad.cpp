#include "wkt/resonant_quad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wkt/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wkt {

namespace {

struct GridTables {
  int d, g;
  std::vector<int> coords;       // unpacked index triples, d per entry
  std::vector<double> norm_sq;   // |k|_beta^2 per grid index
  std::vector<double> bsq;       // per axis: beta_a^2 precomputed
};

GridTables make_tables(const KineticGrid& grid, const BetaVector& beta) {
  GridTables t;
  t.d = grid.dim();
  t.g = grid.per_axis();
  t.coords.resize(grid.size() * t.d);
  t.norm_sq.resize(grid.size());
  int ix[3];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.unpack(i, ix);
    double ns = 0;
    for (int a = 0; a < t.d; ++a) {
      t.coords[i * t.d + a] = ix[a];
      const double c = grid.axis_coord(ix[a]);
      ns += beta[a] * c * c;
    }
    t.norm_sq[i] = ns;
  }
  t.bsq.resize(t.d);
  for (int a = 0; a < t.d; ++a) t.bsq[a] = beta[a] * beta[a];
  return t;
}

inline double kernel_weight(ResonantQuadrature::Kernel kernel, double omega, double eps) {
  const double u = std::fabs(omega) / eps;
  if (u >= 1.0) return 0.0;
  if (kernel == ResonantQuadrature::Kernel::Triangular) return (1.0 - u) / eps;
  return (1.125 - 1.875 * u * u) / eps;
}

// |B(k1 - k)| with B(v)_i = beta_i v_i, from unpacked axis indices
inline double bnorm_diff(const GridTables& t, const KineticGrid& grid, const int* a, const int* b) {
  double s = 0;
  for (int ax = 0; ax < t.d; ++ax) {
    const double dv = grid.h() * static_cast<double>(a[ax] - b[ax]);
    s += t.bsq[ax] * dv * dv;
  }
  return std::sqrt(s);
}

// Deterministic sweep over all (k1, k3) grid pairs with k2 on the grid.
// fn(i1, i2, i3, w) is called for every node with nonzero kernel weight.
template <typename Fn>
void for_each_node(const KineticGrid& grid, const GridTables& t,
                   const ResonantQuadrature& quad, std::size_t ik, Fn&& fn) {
  const int d = t.d, g = t.g;
  const std::size_t n = grid.size();
  const int* uk = &t.coords[ik * d];
  const double h = grid.h();
  // per-index kernel width contributions, hoisted out of the pair loop
  std::vector<double> cw(n);
  for (std::size_t i = 0; i < n; ++i) cw[i] = bnorm_diff(t, grid, &t.coords[i * d], uk);
  const double floor_eps = 2.0 * h * h;  // keeps eps positive at degenerate nodes
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    const int* u1 = &t.coords[i1 * d];
    const double a1 = t.norm_sq[i1];
    for (std::size_t i3 = 0; i3 < n; ++i3) {
      const int* u3 = &t.coords[i3 * d];
      std::size_t i2 = 0;
      bool ok = true;
      for (int a = 0; a < d; ++a) {
        const int x = u1[a] + u3[a] - uk[a];
        if (x < 0 || x >= g) { ok = false; break; }
        i2 = i2 * static_cast<std::size_t>(g) + static_cast<std::size_t>(x);
      }
      if (!ok) continue;
      // (a1 + a3) - (a2 + a0): exactly antisymmetric under the relabelings
      // used by the conservation identities
      const double omega = (a1 + t.norm_sq[i3]) - (t.norm_sq[i2] + t.norm_sq[ik]);
      const double eps = quad.eps_fixed > 0
                             ? quad.eps_fixed
                             : std::max(quad.c_eps * h * 2.0 * (cw[i1] + cw[i3]), floor_eps);
      const double w = kernel_weight(quad.kernel, omega, eps);
      if (w != 0.0) fn(i1, i2, i3, w);
    }
  }
}

inline double bracket(const Field& p1, const Field& p2, const Field& p3, std::size_t ik,
                      std::size_t i1, std::size_t i2, std::size_t i3) {
  return p1[i1] * p2[i2] * p3[i3] - p1[ik] * p2[i2] * p3[i3] + p1[i1] * p2[ik] * p3[i3] -
         p1[i1] * p2[i2] * p3[ik];
}

QuadValue collision_mc(const KineticGrid& grid, const GridTables& t,
                       const ResonantQuadrature& quad, const Field& p1, const Field& p2,
                       const Field& p3, std::size_t ik) {
  // Stratified Monte Carlo over (k1, k3): each axis split into 2 blocks,
  // pilot pass sizes the strata by estimated |integrand| mass (importance
  // stratification in the resonance variable through the kernel factor).
  const int d = t.d, g = t.g;
  const int half = g / 2;
  const int n_strata = 1 << (2 * d);
  const int* uk = &t.coords[ik * d];
  const double h = grid.h();
  const double floor_eps = 2.0 * h * h;

  const auto sample_stratum = [&](int s, CounterRng& rng, double& f_out) {
    int u1[3], u3[3];
    for (int a = 0; a < d; ++a) {
      const int b1 = (s >> a) & 1, b3 = (s >> (d + a)) & 1;
      const int lo1 = b1 ? half : 0, hi1 = b1 ? g : half;
      const int lo3 = b3 ? half : 0, hi3 = b3 ? g : half;
      u1[a] = lo1 + static_cast<int>(rng.uniform() * (hi1 - lo1));
      u3[a] = lo3 + static_cast<int>(rng.uniform() * (hi3 - lo3));
      u1[a] = std::min(u1[a], hi1 - 1);
      u3[a] = std::min(u3[a], hi3 - 1);
    }
    std::size_t i1 = 0, i2 = 0, i3 = 0;
    for (int a = 0; a < d; ++a) {
      const int x = u1[a] + u3[a] - uk[a];
      if (x < 0 || x >= g) { f_out = 0.0; return; }
      i1 = i1 * g + u1[a];
      i2 = i2 * g + x;
      i3 = i3 * g + u3[a];
    }
    const double omega = (t.norm_sq[i1] + t.norm_sq[i3]) - (t.norm_sq[i2] + t.norm_sq[ik]);
    const double eps =
        quad.eps_fixed > 0
            ? quad.eps_fixed
            : std::max(quad.c_eps * h * 2.0 *
                           (bnorm_diff(t, grid, &t.coords[i1 * d], uk) +
                            bnorm_diff(t, grid, &t.coords[i3 * d], uk)),
                       floor_eps);
    const double w = kernel_weight(quad.kernel, omega, eps);
    f_out = w == 0.0 ? 0.0 : w * bracket(p1, p2, p3, ik, i1, i2, i3);
  };

  // stratum pair count (uniform axis split)
  std::vector<double> vol(n_strata);
  for (int s = 0; s < n_strata; ++s) {
    double m = 1;
    for (int a = 0; a < 2 * d; ++a) m *= ((s >> a) & 1) ? (g - half) : half;
    vol[s] = m;
  }

  const int pilot_per = std::max(8, quad.n_samples / (4 * n_strata));
  std::vector<double> mass(n_strata);
  for (int s = 0; s < n_strata; ++s) {
    CounterRng rng(quad.seed, ik, static_cast<std::uint64_t>(s));
    double acc = 0;
    for (int i = 0; i < pilot_per; ++i) {
      double f;
      sample_stratum(s, rng, f);
      acc += std::fabs(f);
    }
    mass[s] = acc / pilot_per * vol[s] + 1e-12;
  }
  double mass_tot = 0;
  for (double m : mass) mass_tot += m;

  const int n_main = std::max(quad.n_samples - pilot_per * n_strata, n_strata);
  const double hh = std::pow(grid.h(), 2.0 * grid.dim());
  double value = 0, var = 0;
  for (int s = 0; s < n_strata; ++s) {
    const int ns = std::max(4, static_cast<int>(n_main * mass[s] / mass_tot));
    CounterRng rng(quad.seed, ik, 0x1000u + static_cast<std::uint64_t>(s));
    double acc = 0, acc2 = 0;
    for (int i = 0; i < ns; ++i) {
      double f;
      sample_stratum(s, rng, f);
      acc += f;
      acc2 += f * f;
    }
    const double mean = acc / ns;
    const double v = std::max(0.0, acc2 / ns - mean * mean);
    value += mean * vol[s] * hh;
    var += v / ns * vol[s] * vol[s] * hh * hh;
  }
  return {value, std::sqrt(var)};
}

}  // namespace

QuadValue collision_operator(const KineticGrid& grid, const BetaVector& beta,
                             const ResonantQuadrature& quad, const Field& phi1,
                             const Field& phi2, const Field& phi3, std::size_t ik) {
  if (ik >= grid.size()) throw std::invalid_argument("collision_operator: k outside grid");
  if (phi1.size() != grid.size() || phi2.size() != grid.size() || phi3.size() != grid.size())
    throw std::invalid_argument("collision_operator: field size mismatch");
  const GridTables t = make_tables(grid, beta);
  if (quad.mode == ResonantQuadrature::Mode::MonteCarlo)
    return collision_mc(grid, t, quad, phi1, phi2, phi3, ik);
  double acc = 0;
  for_each_node(grid, t, quad, ik, [&](std::size_t i1, std::size_t i2, std::size_t i3, double w) {
    acc += w * bracket(phi1, phi2, phi3, ik, i1, i2, i3);
  });
  return {acc * std::pow(grid.h(), 2.0 * grid.dim()), 0.0};
}

SigmaGamma sigma_gamma(const KineticGrid& grid, const BetaVector& beta,
                       const ResonantQuadrature& quad, const Field& n, std::size_t ik) {
  if (ik >= grid.size()) throw std::invalid_argument("sigma_gamma: k outside grid");
  const GridTables t = make_tables(grid, beta);
  double sig = 0, gam = 0;
  for_each_node(grid, t, quad, ik, [&](std::size_t i1, std::size_t i2, std::size_t i3, double w) {
    sig += w * (n[i1] * n[i2] * n[i3]);
    gam += w * (n[i1] * n[i3] - n[i2] * n[i3] - n[i1] * n[i2]);
  });
  const double hh = std::pow(grid.h(), 2.0 * grid.dim());
  return {sig * hh, gam * hh};
}

namespace {
Field collision_field_impl(const KineticGrid& grid, const BetaVector& beta,
                           const ResonantQuadrature& quad, const Field& n, bool parallel) {
  const GridTables t = make_tables(grid, beta);
  Field out(grid.size(), 0.0);
  const double hh = std::pow(grid.h(), 2.0 * grid.dim());
  const std::int64_t sz = static_cast<std::int64_t>(grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
#endif
  for (std::int64_t ik = 0; ik < sz; ++ik) {
    if (quad.mode == ResonantQuadrature::Mode::MonteCarlo) {
      out[ik] = collision_mc(grid, t, quad, n, n, n, static_cast<std::size_t>(ik)).value;
      continue;
    }
    double acc = 0;
    for_each_node(grid, t, quad, static_cast<std::size_t>(ik),
                  [&](std::size_t i1, std::size_t i2, std::size_t i3, double w) {
                    acc += w * bracket(n, n, n, static_cast<std::size_t>(ik), i1, i2, i3);
                  });
    out[ik] = acc * hh;
  }
  return out;
}
}  // namespace

Field collision_field(const KineticGrid& grid, const BetaVector& beta,
                      const ResonantQuadrature& quad, const Field& n) {
  return collision_field_impl(grid, beta, quad, n, true);
}

namespace ref {
Field collision_field_serial(const KineticGrid& grid, const BetaVector& beta,
                             const ResonantQuadrature& quad, const Field& n) {
  return collision_field_impl(grid, beta, quad, n, false);
}
}  // namespace ref

void visit_resonant_nodes(const KineticGrid& grid, const BetaVector& beta,
                          const ResonantQuadrature& quad, std::size_t ik, const NodeVisitor& fn) {
  if (ik >= grid.size()) throw std::invalid_argument("visit_resonant_nodes: k outside grid");
  const GridTables t = make_tables(grid, beta);
  for_each_node(grid, t, quad, ik, fn);
}

Field collision_field_strided(const KineticGrid& grid, const BetaVector& beta,
                              const ResonantQuadrature& quad, const Field& n, int stride) {
  if (stride <= 1) return collision_field(grid, beta, quad, n);
  const int d = grid.dim(), g = grid.per_axis();
  // anchor indices per axis: multiples of stride plus the last point
  std::vector<int> anchors;
  for (int i = 0; i < g; i += stride) anchors.push_back(i);
  if (anchors.back() != g - 1) anchors.push_back(g - 1);
  const int na = static_cast<int>(anchors.size());
  std::vector<int> anchor_pos(g, -1);
  for (int i = 0; i < na; ++i) anchor_pos[anchors[i]] = i;

  // evaluate on the anchor sub-lattice
  std::vector<std::size_t> pts;
  {
    int ix[3] = {0, 0, 0};
    std::vector<int> ctr(d, 0);
    while (true) {
      for (int a = 0; a < d; ++a) ix[a] = anchors[ctr[a]];
      pts.push_back(grid.pack(ix));
      int a = 0;
      for (; a < d; ++a) {
        if (++ctr[a] < na) break;
        ctr[a] = 0;
      }
      if (a == d) break;
    }
  }
  const GridTables t = make_tables(grid, beta);
  std::vector<double> vals(pts.size(), 0.0);
  const double hh = std::pow(grid.h(), 2.0 * grid.dim());
  const std::int64_t np = static_cast<std::int64_t>(pts.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
  for (std::int64_t p = 0; p < np; ++p) {
    double acc = 0;
    for_each_node(grid, t, quad, pts[p],
                  [&](std::size_t i1, std::size_t i2, std::size_t i3, double w) {
                    acc += w * bracket(n, n, n, pts[p], i1, i2, i3);
                  });
    vals[p] = acc * hh;
  }

  // multilinear interpolation from anchors to the full grid
  const auto anchor_val = [&](const int* ai) {
    std::size_t flat = 0;
    for (int a = 0; a < d; ++a) flat = flat * na + static_cast<std::size_t>(ai[a]);
    return vals[flat];
  };
  Field out(grid.size(), 0.0);
  int ix[3];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.unpack(i, ix);
    int lo[3], hi[3];
    double w[3];
    for (int a = 0; a < d; ++a) {
      int j = 0;
      while (j + 1 < na && anchors[j + 1] <= ix[a]) ++j;
      lo[a] = j;
      hi[a] = std::min(j + 1, na - 1);
      const int span = anchors[hi[a]] - anchors[lo[a]];
      w[a] = span == 0 ? 0.0 : static_cast<double>(ix[a] - anchors[lo[a]]) / span;
    }
    double acc = 0;
    for (int corner = 0; corner < (1 << d); ++corner) {
      int ai[3];
      double cw = 1;
      for (int a = 0; a < d; ++a) {
        const bool up = (corner >> a) & 1;
        ai[a] = up ? hi[a] : lo[a];
        cw *= up ? w[a] : (1.0 - w[a]);
      }
      if (cw != 0) acc += cw * anchor_val(ai);
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace wkt
