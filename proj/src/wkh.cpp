#include "wkt/wkh.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wkt {

double Mixture::common_mass() const {
  if (profiles.empty()) return 0;
  return field_integral(grid, profiles[0]);
}

void Mixture::validate() const {
  if (weights.size() != profiles.size() || weights.empty())
    throw std::invalid_argument("Mixture: atoms malformed");
  double ws = 0;
  for (double w : weights) {
    if (!(w > 0)) throw std::invalid_argument("Mixture: weights must be positive");
    ws += w;
  }
  if (std::fabs(ws - 1.0) > 1e-12) throw std::invalid_argument("Mixture: weights must sum to 1");
  const double X = common_mass();
  for (const auto& m : profiles) {
    if (m.size() != grid.size()) throw std::invalid_argument("Mixture: profile size mismatch");
    for (double v : m)
      if (v < 0) throw std::invalid_argument("Mixture: profiles must be nonnegative");
    const double mass = field_integral(grid, m);
    if (std::fabs(mass - X) > 1e-6 * std::max(1.0, std::fabs(X)))
      throw std::invalid_argument("Mixture: atom masses disagree");
  }
}

CorrelationTensor CorrelationTensor::from_mixture(const Mixture& mix, int order) {
  return CorrelationTensor(order, [mix, order](const std::vector<std::size_t>& tuple) {
    if (static_cast<int>(tuple.size()) != order)
      throw std::invalid_argument("CorrelationTensor: tuple arity mismatch");
    double total = 0;
    for (std::size_t i = 0; i < mix.atoms(); ++i) {
      double p = mix.weights[i];
      for (std::size_t idx : tuple) p *= mix.profiles[i][idx];
      total += p;
    }
    return total;
  });
}

std::vector<double> assemble_correlations(const Mixture& mix, int r,
                                          const std::vector<std::vector<std::size_t>>& tuples) {
  if (r < 1) throw std::invalid_argument("assemble_correlations: r >= 1");
  const CorrelationTensor t = CorrelationTensor::from_mixture(mix, r);
  std::vector<double> out;
  out.reserve(tuples.size());
  for (const auto& tup : tuples) out.push_back(t(tup));
  return out;
}

AdmissibilityReport check_admissible(const std::vector<CorrelationTensor>& tensors,
                                     const KineticGrid& grid, double X,
                                     const std::vector<std::vector<std::size_t>>& base_tuples) {
  AdmissibilityReport rep;
  if (tensors.empty()) return rep;
  {
    double mass = 0;
    std::vector<std::size_t> tup(1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      tup[0] = i;
      mass += tensors[0](tup);
    }
    mass *= grid.cell_volume();
    rep.mass_deviation = std::fabs(mass - X) / std::max(1e-300, std::fabs(X));
  }
  for (std::size_t r = 1; r < tensors.size(); ++r) {
    const auto& hi = tensors[r];
    const auto& lo = tensors[r - 1];
    for (const auto& base : base_tuples) {
      if (base.size() + 1 != static_cast<std::size_t>(hi.order())) continue;
      std::vector<std::size_t> tup(base);
      tup.push_back(0);
      double marg = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        tup.back() = i;
        marg += hi(tup);
      }
      marg *= grid.cell_volume();
      const double target = X * lo(base);
      const double dev = std::fabs(marg - target) / std::max(1e-300, std::fabs(target));
      rep.worst_marginal_deviation = std::max(rep.worst_marginal_deviation, dev);
    }
  }
  return rep;
}

std::vector<double> MixtureTrajectory::times() const {
  std::vector<double> t;
  for (const auto& st : atom_trajs.at(0).states) t.push_back(st.t);
  return t;
}

Mixture MixtureTrajectory::at(std::size_t snapshot) const {
  Mixture m{atom_trajs.at(0).grid, weights, {}};
  for (const auto& tr : atom_trajs) m.profiles.push_back(tr.states.at(snapshot).n);
  return m;
}

MixtureTrajectory evolve_mixture(const Mixture& mix, const BetaVector& beta,
                                 const ResonantQuadrature& quad, const WkeConfig& cfg) {
  mix.validate();
  MixtureTrajectory out;
  out.weights = mix.weights;
  for (const auto& m : mix.profiles)
    out.atom_trajs.push_back(solve_wke(mix.grid, beta, quad, m, cfg));
  return out;
}

namespace {

// Four-term hierarchy integrand at slot j, ordered exactly as the collision
// bracket so the r=1 factorized case reproduces it bitwise.
double hierarchy_terms(const Mixture& mix, const std::vector<std::size_t>& tuple, int j,
                       std::size_t i1, std::size_t i2, std::size_t i3) {
  double total = 0;
  const std::size_t ik = tuple[static_cast<std::size_t>(j)];
  for (std::size_t a = 0; a < mix.atoms(); ++a) {
    const Field& m = mix.profiles[a];
    double partial = mix.weights[a];
    for (std::size_t l = 0; l < tuple.size(); ++l)
      if (static_cast<int>(l) != j) partial *= m[tuple[l]];
    total += partial * (m[i1] * m[i2] * m[i3] - m[ik] * m[i2] * m[i3] + m[i1] * m[ik] * m[i3] -
                        m[i1] * m[i2] * m[ik]);
  }
  return total;
}

}  // namespace

std::vector<double> wkh_rhs(const Mixture& mix, const BetaVector& beta,
                            const ResonantQuadrature& quad, int r,
                            const std::vector<std::vector<std::size_t>>& tuples) {
  const double hh = std::pow(mix.grid.h(), 2.0 * mix.grid.dim());
  std::vector<double> out;
  out.reserve(tuples.size());
  for (const auto& tup : tuples) {
    if (static_cast<int>(tup.size()) != r) throw std::invalid_argument("wkh_rhs: tuple arity");
    double rhs = 0;
    for (int j = 0; j < r; ++j) {
      double acc = 0;
      visit_resonant_nodes(mix.grid, beta, quad, tup[static_cast<std::size_t>(j)],
                           [&](std::size_t i1, std::size_t i2, std::size_t i3, double w) {
                             acc += w * hierarchy_terms(mix, tup, j, i1, i2, i3);
                           });
      rhs += acc * hh;
    }
    out.push_back(rhs);
  }
  return out;
}

WkhResidualStats wkh_residual(const MixtureTrajectory& traj, const BetaVector& beta,
                              const ResonantQuadrature& quad, int r,
                              const std::vector<std::vector<std::size_t>>& tuples,
                              std::size_t snapshot) {
  if (snapshot == 0 || snapshot + 1 >= traj.atom_trajs.at(0).states.size())
    throw std::invalid_argument("wkh_residual: snapshot must have both neighbors");
  const Mixture prev = traj.at(snapshot - 1);
  const Mixture here = traj.at(snapshot);
  const Mixture next = traj.at(snapshot + 1);
  const double dt2 = traj.atom_trajs[0].states[snapshot + 1].t -
                     traj.atom_trajs[0].states[snapshot - 1].t;

  const std::vector<double> rhs = wkh_rhs(here, beta, quad, r, tuples);
  const std::vector<double> np = assemble_correlations(next, r, tuples);
  const std::vector<double> pp = assemble_correlations(prev, r, tuples);

  WkhResidualStats stats;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const double resid = std::fabs((np[i] - pp[i]) / dt2 - rhs[i]);
    stats.max_resid = std::max(stats.max_resid, resid);
    stats.mean_resid += resid;
  }
  if (!tuples.empty()) stats.mean_resid /= static_cast<double>(tuples.size());
  return stats;
}

}  // namespace wkt

namespace wkt {

void save_mixture(const std::string& manifest_path, const Mixture& mix) {
  mix.validate();
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(manifest_path).parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  std::ofstream man(manifest_path);
  if (!man) throw std::runtime_error("save_mixture: cannot open " + manifest_path);
  man << "mixture atoms=" << mix.atoms() << " d=" << mix.grid.dim()
      << " k_max=" << mix.grid.k_max() << " points=" << mix.grid.per_axis() << "\n";
  man.precision(17);
  const std::string stem = fs::path(manifest_path).stem().string();
  for (std::size_t i = 0; i < mix.atoms(); ++i) {
    std::ostringstream name;
    name << stem << "_atom" << i << ".f64";
    man << "atom " << mix.weights[i] << " " << name.str() << "\n";
    std::ofstream prof(dir / name.str(), std::ios::binary);
    prof.write(reinterpret_cast<const char*>(mix.profiles[i].data()),
               static_cast<std::streamsize>(mix.profiles[i].size() * sizeof(double)));
  }
}

Mixture load_mixture(const std::string& manifest_path, const KineticGrid& grid) {
  namespace fs = std::filesystem;
  std::ifstream man(manifest_path);
  if (!man) throw std::runtime_error("load_mixture: cannot open " + manifest_path);
  std::string header;
  std::getline(man, header);
  if (header.rfind("mixture ", 0) != 0) throw std::runtime_error("load_mixture: bad manifest");
  Mixture mix{grid, {}, {}};
  const fs::path dir = fs::path(manifest_path).parent_path();
  std::string word;
  double w;
  std::string file;
  while (man >> word >> w >> file) {
    if (word != "atom") throw std::runtime_error("load_mixture: bad atom line");
    mix.weights.push_back(w);
    Field f(grid.size());
    std::ifstream prof(dir / file, std::ios::binary);
    if (!prof) throw std::runtime_error("load_mixture: missing profile " + file);
    prof.read(reinterpret_cast<char*>(f.data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!prof) throw std::runtime_error("load_mixture: truncated profile " + file);
    mix.profiles.push_back(std::move(f));
  }
  mix.validate();
  return mix;
}

}  // namespace wkt
