#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

#include "errors.hpp"

namespace fsi_slab {

// Tensor-product mesh of the reference slab: periodic horizontally, walls at z = 0 and z = 1.
// Samples sit at x_i = i*hx (i < nx), y_k = k*hy (k < ny), z_j = j*hz (j < nz).
struct Grid {
  int nx = 64;
  int ny = 1;
  int nz = 33;
  double lx = 2.0 * std::numbers::pi;
  double ly = 2.0 * std::numbers::pi;

  Grid() = default;
  Grid(int nx_, int nz_, double lx_ = 2.0 * std::numbers::pi) : nx(nx_), nz(nz_), lx(lx_) {}
  Grid(int nx_, int ny_, int nz_, double lx_, double ly_) : nx(nx_), ny(ny_), nz(nz_), lx(lx_), ly(ly_) {}

  int dim() const { return ny > 1 ? 3 : 2; }
  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  double hz() const { return 1.0 / (nz - 1); }
  std::size_t plate_size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t size() const { return plate_size() * nz; }
  std::size_t at(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  std::size_t at(int i, int k, int j) const { return (static_cast<std::size_t>(j) * ny + k) * nx + i; }
  double x(int i) const { return i * hx(); }
  double y(int k) const { return k * hy(); }
  double z(int j) const { return j * hz(); }
  // Trapezoidal weight in z.
  double wz(int j) const { return (j == 0 || j == nz - 1) ? 0.5 * hz() : hz(); }
  // Rectangle-rule area of one plate sample.
  double plate_cell() const { return dim() == 3 ? hx() * hy() : hx(); }
  double plate_area() const { return dim() == 3 ? lx * ly : lx; }
  double min_spacing() const {
    double h = std::min(hx(), hz());
    return dim() == 3 ? std::min(h, hy()) : h;
  }

  void validate() const {
    auto fail = [](const char* m) { throw Error(ErrorKind::structural, m); };
    if (nx < 4 || nz < 4) fail("grid counts must be at least 4");
    if (ny != 1 && ny < 4) fail("ny must be 1 or at least 4");
    if (!(lx > 0.0) || !(ly > 0.0)) fail("periods must be positive");
  }

  bool operator==(const Grid& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz && lx == o.lx && (ny == 1 || ly == o.ly);
  }
};

}  // namespace fsi_slab
