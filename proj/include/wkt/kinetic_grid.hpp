#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "wkt/beta_lattice.hpp"

namespace wkt {

// Cartesian grid over [-k_max, k_max]^d used to discretize the continuum
// wavenumber space. Odd point count per axis so the origin is a grid point.
class KineticGrid {
 public:
  KineticGrid(int d, double k_max, int points_per_axis)
      : d_(d), k_max_(k_max), g_(points_per_axis) {
    if (d < 1 || d > 3) throw std::invalid_argument("KineticGrid: d in 1..3");
    if (points_per_axis < 3 || points_per_axis % 2 == 0)
      throw std::invalid_argument("KineticGrid: points_per_axis odd and >= 3");
    if (!(k_max > 0)) throw std::invalid_argument("KineticGrid: k_max > 0");
    h_ = 2.0 * k_max / static_cast<double>(g_ - 1);
    size_ = 1;
    for (int i = 0; i < d; ++i) size_ *= static_cast<std::size_t>(g_);
  }

  int dim() const { return d_; }
  double k_max() const { return k_max_; }
  double h() const { return h_; }
  int per_axis() const { return g_; }
  std::size_t size() const { return size_; }
  double cell_volume() const { return std::pow(h_, d_); }

  double axis_coord(int i) const { return -k_max_ + h_ * static_cast<double>(i); }

  void unpack(std::size_t idx, int* ix) const {
    for (int a = d_ - 1; a >= 0; --a) {
      ix[a] = static_cast<int>(idx % static_cast<std::size_t>(g_));
      idx /= static_cast<std::size_t>(g_);
    }
  }
  std::size_t pack(const int* ix) const {
    std::size_t idx = 0;
    for (int a = 0; a < d_; ++a) idx = idx * static_cast<std::size_t>(g_) + static_cast<std::size_t>(ix[a]);
    return idx;
  }

  std::vector<double> point(std::size_t idx) const {
    int ix[3];
    unpack(idx, ix);
    std::vector<double> k(d_);
    for (int a = 0; a < d_; ++a) k[a] = axis_coord(ix[a]);
    return k;
  }

  // nearest grid index; throws if outside
  std::size_t index_of(const std::vector<double>& k) const {
    int ix[3];
    for (int a = 0; a < d_; ++a) {
      const double t = (k[a] + k_max_) / h_;
      const int i = static_cast<int>(std::llround(t));
      if (i < 0 || i >= g_ || std::fabs(t - i) > 1e-9)
        throw std::invalid_argument("KineticGrid: point is not a grid point");
      ix[a] = i;
    }
    return pack(ix);
  }

  std::vector<double> sample(const std::function<double(const std::vector<double>&)>& f) const {
    std::vector<double> v(size_);
    for (std::size_t i = 0; i < size_; ++i) v[i] = f(point(i));
    return v;
  }

  friend bool operator==(const KineticGrid& a, const KineticGrid& b) {
    return a.d_ == b.d_ && a.g_ == b.g_ && a.k_max_ == b.k_max_;
  }

 private:
  int d_;
  double k_max_;
  int g_;
  double h_ = 0;
  std::size_t size_ = 0;
};

using Field = std::vector<double>;  // values over KineticGrid, lexicographic

inline double field_integral(const KineticGrid& g, const Field& f) {
  double s = 0;
  for (double v : f) s += v;
  return s * g.cell_volume();
}

}  // namespace wkt
