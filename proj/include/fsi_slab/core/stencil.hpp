#pragma once

#include "field.hpp"

namespace fsi_slab {

// Trapezoidal rule in z, periodic rectangle rule horizontally.
inline double integrate_reference(const ScalarField& f, const ScalarField& weight) {
  require_same_grid(f.grid, weight.grid);
  const Grid& g = f.grid;
  const double cell = g.plate_cell();
  double total = 0.0;
  for (int j = 0; j < g.nz; ++j) {
    double row = 0.0;
    const std::size_t base = static_cast<std::size_t>(j) * g.plate_size();
    for (std::size_t n = 0; n < g.plate_size(); ++n) row += f[base + n] * weight[base + n];
    total += g.wz(j) * row;
  }
  return cell * total;
}

inline double integrate_reference(const ScalarField& f) { return integrate_reference(f, ScalarField(f.grid, 1.0)); }

inline double integrate_plate(const PlateField& f, const Grid& g) {
  double s = 0.0;
  for (double a : f) s += a;
  return s * g.plate_cell();
}

namespace detail {

inline int wrap(int i, int n) { return (i % n + n) % n; }

// Central difference along a periodic axis with given stride.
inline double periodic_diff(const ScalarField& f, int i, int k, int j, int axis) {
  const Grid& g = f.grid;
  if (axis == 0) return (f[g.at(wrap(i + 1, g.nx), k, j)] - f[g.at(wrap(i - 1, g.nx), k, j)]) / (2.0 * g.hx());
  return (f[g.at(i, wrap(k + 1, g.ny), j)] - f[g.at(i, wrap(k - 1, g.ny), j)]) / (2.0 * g.hy());
}

// Central in the interior, one-sided second order at the walls.
inline double wall_diff(const ScalarField& f, int i, int k, int j) {
  const Grid& g = f.grid;
  const double h = g.hz();
  auto s = [&](int jj) { return f[g.at(i, k, jj)]; };
  if (j == 0) return (-3.0 * s(0) + 4.0 * s(1) - s(2)) / (2.0 * h);
  if (j == g.nz - 1) return (3.0 * s(j) - 4.0 * s(j - 1) + s(j - 2)) / (2.0 * h);
  return (s(j + 1) - s(j - 1)) / (2.0 * h);
}

}  // namespace detail

inline VectorField grad(const ScalarField& f) {
  const Grid& g = f.grid;
  VectorField out(g);
  const int d = g.dim();
  for (int j = 0; j < g.nz; ++j)
    for (int k = 0; k < g.ny; ++k)
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t n = g.at(i, k, j);
        out[0][n] = detail::periodic_diff(f, i, k, j, 0);
        if (d == 3) out[1][n] = detail::periodic_diff(f, i, k, j, 1);
        out[d - 1][n] = detail::wall_diff(f, i, k, j);
      }
  return out;
}

inline ScalarField div(const VectorField& v) {
  const Grid& g = v.grid;
  ScalarField out(g);
  const int d = g.dim();
  for (int j = 0; j < g.nz; ++j)
    for (int k = 0; k < g.ny; ++k)
      for (int i = 0; i < g.nx; ++i) {
        double s = detail::periodic_diff(v[0], i, k, j, 0) + detail::wall_diff(v[d - 1], i, k, j);
        if (d == 3) s += detail::periodic_diff(v[1], i, k, j, 1);
        out[g.at(i, k, j)] = s;
      }
  return out;
}

// Central periodic derivative of plate samples along x (2D torus: along axis 0 or 1).
inline PlateField plate_slope(const PlateField& w, const Grid& g, int axis = 0) {
  PlateField out(w.size());
  for (int k = 0; k < g.ny; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const auto at = [&](int ii, int kk) { return static_cast<std::size_t>(kk) * g.nx + ii; };
      if (axis == 0)
        out[at(i, k)] = (w[at(detail::wrap(i + 1, g.nx), k)] - w[at(detail::wrap(i - 1, g.nx), k)]) / (2.0 * g.hx());
      else
        out[at(i, k)] = (w[at(i, detail::wrap(k + 1, g.ny))] - w[at(i, detail::wrap(k - 1, g.ny))]) / (2.0 * g.hy());
    }
  return out;
}

}  // namespace fsi_slab
