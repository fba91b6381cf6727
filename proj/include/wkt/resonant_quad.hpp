#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wkt/beta_lattice.hpp"
#include "wkt/kinetic_grid.hpp"

namespace wkt {

// Numerical realization of the resonant-manifold delta in the collision
// integral. The momentum delta eliminates k2 = k1 + k3 - k; the frequency
// delta is mollified by an even kernel of local width
//   eps(node) = c_eps * h * 2 * (|B(k1-k)| + |B(k-k3)|),   B(v)_i = beta_i v_i,
// which is invariant under the node relabelings used for conservation.
// Quadrature nodes are quadruples with all four points on the grid; this
// symmetric truncation makes the discrete mass integral of the collision
// operator vanish exactly (up to roundoff).
struct ResonantQuadrature {
  enum class Mode { DeterministicMollified, MonteCarlo };
  // Triangular kernel max(0, 1-|w|/eps)/eps integrates to 1 exactly and is
  // nonnegative. The parabolic kernel (9/8 - 15/8 (w/eps)^2)/eps on |w|<eps
  // additionally has vanishing second moment (second-order bias) at the cost
  // of negative weights near the edge.
  enum class Kernel { Triangular, Parabolic };

  Mode mode = Mode::DeterministicMollified;
  Kernel kernel = Kernel::Triangular;
  double c_eps = 2.0;
  double eps_fixed = 0.0;  // > 0 overrides the local width
  int n_samples = 200000;  // Monte Carlo mode
  std::uint64_t seed = 1;
};

struct QuadValue {
  double value = 0;
  double stderr_est = 0;  // 0 in deterministic mode
};

// K(phi1, phi2, phi3)(k): four-term bracket of the kinetic collision integral
// against the mollified resonant measure. k indexed on the grid.
QuadValue collision_operator(const KineticGrid& grid, const BetaVector& beta,
                             const ResonantQuadrature& quad, const Field& phi1,
                             const Field& phi2, const Field& phi3, std::size_t ik);

// sigma_k = resonant integral of n(k1) n(k2) n(k3)
// gamma_k = resonant integral of n(k1) n(k3) - n(k2) n(k3) - n(k1) n(k2)
// Shares quadrature nodes with collision_operator, so
// K(n,n,n)(k) = sigma_k + n(k) gamma_k holds on shared nodes.
struct SigmaGamma {
  double sigma = 0;
  double gamma = 0;
};
SigmaGamma sigma_gamma(const KineticGrid& grid, const BetaVector& beta,
                       const ResonantQuadrature& quad, const Field& n, std::size_t ik);

// Full-field K(n,n,n); OpenMP-parallel over output points. Each output value
// is computed by one thread in a fixed order, so the result is identical for
// any thread count.
Field collision_field(const KineticGrid& grid, const BetaVector& beta,
                      const ResonantQuadrature& quad, const Field& n);

// Strided evaluation: exact on the sub-lattice with the given stride,
// multilinear interpolation in between.
Field collision_field_strided(const KineticGrid& grid, const BetaVector& beta,
                              const ResonantQuadrature& quad, const Field& n, int stride);

namespace ref {
// Plain serial triple loop, kept as the reference implementation for tests
// and the benchmark.
Field collision_field_serial(const KineticGrid& grid, const BetaVector& beta,
                             const ResonantQuadrature& quad, const Field& n);
}  // namespace ref

// Deterministic node sweep for one output point, exposed so that other
// resonant integrals (hierarchy right-hand sides, conservation diagnostics)
// run on exactly the same nodes and weights as collision_operator.
// fn(i1, i2, i3, w); the h^(2d) volume factor is NOT included in w.
using NodeVisitor = std::function<void(std::size_t, std::size_t, std::size_t, double)>;
void visit_resonant_nodes(const KineticGrid& grid, const BetaVector& beta,
                          const ResonantQuadrature& quad, std::size_t ik, const NodeVisitor& fn);

}  // namespace wkt
