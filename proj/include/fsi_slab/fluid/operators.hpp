#pragma once

#include <vector>

#include "../geometry/flat_map.hpp"

namespace fsi_slab {

// Metric data of the vertical-stretch map, frozen over one fluid substep, plus the
// summation-by-parts z-derivative used by the weak-form forces.
class SlabGeometry {
 public:
  SlabGeometry(const Grid& g, const PlateField& w, const PlateField& mesh_rate, const PlateField& wall_velocity,
               double contact_floor = 0.05)
      : grid_(g), w_(w), rate_(mesh_rate), wall_(wall_velocity) {
    require(g.dim() == 2, ErrorKind::structural, "the fluid solver supports the 2D slab only");
    require(w.size() == g.plate_size() && mesh_rate.size() == g.plate_size() && wall_velocity.size() == g.plate_size(),
            ErrorKind::structural, "plate samples do not match the grid");
    for (int i = 0; i < g.nx; ++i) check_contact(1.0 + w_[i], contact_floor, g.x(i));
    slope_ = plate_slope(w_, g);
    J_.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) J_[i] = 1.0 + w_[i];
    c_.resize(g.size());
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < g.nx; ++i) c_[g.at(i, j)] = g.z(j) * slope_[i] / J_[i];
  }

  // Static geometry with the given wall velocity also used as mesh rate.
  SlabGeometry(const Grid& g, const PlateField& w, const PlateField& w_t, double contact_floor = 0.05)
      : SlabGeometry(g, w, w_t, w_t, contact_floor) {}

  const Grid& grid() const { return grid_; }
  const PlateField& w() const { return w_; }
  const PlateField& slope() const { return slope_; }
  const PlateField& mesh_rate() const { return rate_; }
  const PlateField& wall_velocity() const { return wall_; }
  double J(int i) const { return J_[i]; }
  // Reference control volume of node (i, j).
  double volume(int j) const { return grid_.hx() * grid_.wz(j); }

  // Central periodic x-derivative.
  void dx(const std::vector<double>& f, std::vector<double>& out) const {
    const int nx = grid_.nx, nz = grid_.nz;
    const double s = 1.0 / (2.0 * grid_.hx());
    out.assign(f.size(), 0.0);
    for (int j = 0; j < nz; ++j) {
      const std::size_t b = static_cast<std::size_t>(j) * nx;
      for (int i = 0; i < nx; ++i) {
        const int ip = i + 1 == nx ? 0 : i + 1, im = i == 0 ? nx - 1 : i - 1;
        out[b + i] = (f[b + ip] - f[b + im]) * s;
      }
    }
  }

  // SBP z-derivative: central inside, first-order one-sided at the walls; H D + (H D)^T = diag(-1, 0, ..., 0, 1)
  // for the trapezoid norm H.
  void dz(const std::vector<double>& f, std::vector<double>& out) const {
    const int nx = grid_.nx, nz = grid_.nz;
    const double h = grid_.hz();
    out.assign(f.size(), 0.0);
    for (int i = 0; i < nx; ++i) {
      auto F = [&](int j) { return f[static_cast<std::size_t>(j) * nx + i]; };
      out[i] = (F(1) - F(0)) / h;
      for (int j = 1; j < nz - 1; ++j) out[static_cast<std::size_t>(j) * nx + i] = (F(j + 1) - F(j - 1)) / (2.0 * h);
      out[static_cast<std::size_t>(nz - 1) * nx + i] = (F(nz - 1) - F(nz - 2)) / h;
    }
  }

  // out += Dz^T g.
  void dz_transpose_add(const std::vector<double>& g, std::vector<double>& out) const {
    const int nx = grid_.nx, nz = grid_.nz;
    const double h = grid_.hz();
    for (int i = 0; i < nx; ++i) {
      auto at = [&](int j) { return static_cast<std::size_t>(j) * nx + i; };
      out[at(0)] -= g[at(0)] / h;
      out[at(1)] += g[at(0)] / h;
      for (int j = 1; j < nz - 1; ++j) {
        out[at(j - 1)] -= g[at(j)] / (2.0 * h);
        out[at(j + 1)] += g[at(j)] / (2.0 * h);
      }
      out[at(nz - 2)] -= g[at(nz - 1)] / h;
      out[at(nz - 1)] += g[at(nz - 1)] / h;
    }
  }

  // Physical derivatives through the map: Gx = Dx - (z w'/J) Dz, Gz = Dz / J.
  void gx(const std::vector<double>& f, std::vector<double>& out, std::vector<double>& tmp) const {
    dx(f, out);
    dz(f, tmp);
    for (std::size_t n = 0; n < f.size(); ++n) out[n] -= c_[n] * tmp[n];
  }
  void gz(const std::vector<double>& f, std::vector<double>& out) const {
    dz(f, out);
    const int nx = grid_.nx;
    for (std::size_t n = 0; n < f.size(); ++n) out[n] /= J_[n % nx];
  }

  // out += Gx^T g and out += Gz^T g.
  void gx_transpose_add(const std::vector<double>& g, std::vector<double>& out, std::vector<double>& tmp) const {
    dx(g, tmp);
    for (std::size_t n = 0; n < g.size(); ++n) out[n] -= tmp[n];
    for (std::size_t n = 0; n < g.size(); ++n) tmp[n] = -c_[n] * g[n];
    dz_transpose_add(tmp, out);
  }
  void gz_transpose_add(const std::vector<double>& g, std::vector<double>& out, std::vector<double>& tmp) const {
    const int nx = grid_.nx;
    tmp.resize(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) tmp[n] = g[n] / J_[n % nx];
    dz_transpose_add(tmp, out);
  }

 private:
  Grid grid_;
  PlateField w_, rate_, wall_, slope_, J_;
  std::vector<double> c_;
};

}  // namespace fsi_slab
