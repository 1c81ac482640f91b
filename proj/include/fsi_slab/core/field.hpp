#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "grid.hpp"

namespace fsi_slab {

enum class Staggering { collocated };

struct ScalarField {
  Grid grid;
  std::vector<double> v;
  Staggering stagger = Staggering::collocated;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double value = 0.0) : grid(g), v(g.size(), value) {}

  double& operator()(int i, int j) { return v[grid.at(i, j)]; }
  double operator()(int i, int j) const { return v[grid.at(i, j)]; }
  double& operator[](std::size_t n) { return v[n]; }
  double operator[](std::size_t n) const { return v[n]; }
  std::size_t size() const { return v.size(); }

  bool finite() const {
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
  }
  double max_abs() const {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
  }
  double min() const { return *std::min_element(v.begin(), v.end()); }
  double max() const { return *std::max_element(v.begin(), v.end()); }
};

struct VectorField {
  Grid grid;
  std::vector<ScalarField> c;

  VectorField() = default;
  explicit VectorField(const Grid& g, double value = 0.0) : grid(g), c(g.dim(), ScalarField(g, value)) {}

  int dim() const { return static_cast<int>(c.size()); }
  ScalarField& operator[](int a) { return c[a]; }
  const ScalarField& operator[](int a) const { return c[a]; }

  bool finite() const {
    return std::all_of(c.begin(), c.end(), [](const ScalarField& f) { return f.finite(); });
  }
  double max_norm() const {
    double m = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
      double s = 0.0;
      for (const auto& f : c) s += f[n] * f[n];
      m = std::max(m, std::sqrt(s));
    }
    return m;
  }
};

// Samples on the horizontal torus (the plate).
using PlateField = std::vector<double>;

inline void require_same_grid(const Grid& a, const Grid& b) {
  require(a == b, ErrorKind::structural, "fields live on different grids");
}

// Fluid pair on the reference slab plus plate pair on the torus, at one time.
struct State {
  double t = 0.0;
  ScalarField rho_hat;
  VectorField u_hat;
  PlateField w;
  PlateField w_t;

  State() = default;
  State(const Grid& g, double rho) : rho_hat(g, rho), u_hat(g), w(g.plate_size(), 0.0), w_t(g.plate_size(), 0.0) {}

  const Grid& grid() const { return rho_hat.grid; }
};

}  // namespace fsi_slab
