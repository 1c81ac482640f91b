#pragma once

#include <array>
#include <cmath>
#include <sstream>

#include "../core/field.hpp"
#include "../core/stencil.hpp"

namespace fsi_slab {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Value of the vertical-stretch map at one point: position, gradient, Jacobian and mesh velocity.
// In 2D only the first two components/rows are used.
struct FlatMapPoint {
  Vec3 point{};
  Mat3 gradient{};
  double J = 1.0;
  Vec3 mesh_velocity{};
};

inline void check_contact(double one_plus_w, double floor, double x = 0.0) {
  if (!(one_plus_w > floor)) {
    std::ostringstream os;
    os << "self-contact: 1 + w = " << one_plus_w << " at x = " << x << " is below the floor " << floor;
    throw Error(ErrorKind::degeneracy, os.str());
  }
}

// Phi_w(x, z) = (x, z (1 + w(x))). grad_w holds dw/dx (and dw/dy in 3D).
inline FlatMapPoint flat_flow_map(double w, std::array<double, 2> grad_w, double w_t, const Vec3& ref, int dim = 2,
                                  double contact_floor = 0.05) {
  check_contact(1.0 + w, contact_floor, ref[0]);
  FlatMapPoint p;
  const int v = dim - 1;
  const double zh = ref[v];
  p.point = ref;
  p.point[v] = zh * (1.0 + w);
  for (int a = 0; a < dim; ++a) p.gradient[a][a] = 1.0;
  p.gradient[v][0] = zh * grad_w[0];
  if (dim == 3) p.gradient[v][1] = zh * grad_w[1];
  p.gradient[v][v] = 1.0 + w;
  p.J = 1.0 + w;
  p.mesh_velocity[v] = zh * w_t;
  return p;
}

inline Vec3 flat_flow_map_inverse(double w, const Vec3& phys, int dim = 2, double contact_floor = 0.05) {
  check_contact(1.0 + w, contact_floor, phys[0]);
  Vec3 r = phys;
  r[dim - 1] = phys[dim - 1] / (1.0 + w);
  return r;
}

// Weighted normal (-grad w, 1) of the deformed top boundary.
inline Vec3 deformed_normal_flat(std::array<double, 2> grad_w, int dim = 2) {
  if (dim == 3) return {-grad_w[0], -grad_w[1], 1.0};
  return {-grad_w[0], 1.0, 0.0};
}

inline double area_jacobian(std::array<double, 2> grad_w) {
  return std::sqrt(1.0 + grad_w[0] * grad_w[0] + grad_w[1] * grad_w[1]);
}

inline double frobenius(const Mat3& B, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) s += B[a][b] * B[a][b];
  return std::sqrt(s);
}

inline double determinant(const Mat3& B, int dim) {
  if (dim == 2) return B[0][0] * B[1][1] - B[0][1] * B[1][0];
  return B[0][0] * (B[1][1] * B[2][2] - B[1][2] * B[2][1]) - B[0][1] * (B[1][0] * B[2][2] - B[1][2] * B[2][0]) +
         B[0][2] * (B[1][0] * B[2][1] - B[1][1] * B[2][0]);
}

// |det B| <= d^(d/2) |B|_F^d.
inline bool hadamard_bound_holds(const Mat3& B, int dim) {
  return std::abs(determinant(B, dim)) <= std::pow(dim, 0.5 * dim) * std::pow(frobenius(B, dim), dim);
}

// Flat domain map built from plate samples on a 2D grid.
class DomainMap {
 public:
  DomainMap(const Grid& g, PlateField w, PlateField w_t, double contact_floor = 0.05)
      : grid_(g), w_(std::move(w)), w_t_(std::move(w_t)), floor_(contact_floor) {
    require(w_.size() == g.plate_size() && w_t_.size() == g.plate_size(), ErrorKind::structural,
            "plate samples do not match the grid");
    require(g.dim() == 2, ErrorKind::structural, "DomainMap supports the 2D slab only");
    slope_ = plate_slope(w_, g);
    for (int i = 0; i < g.nx; ++i) check_contact(1.0 + w_[i], floor_, g.x(i));
  }

  const Grid& grid() const { return grid_; }
  const PlateField& w() const { return w_; }
  const PlateField& w_t() const { return w_t_; }
  const PlateField& slope() const { return slope_; }
  double contact_floor() const { return floor_; }

  FlatMapPoint at(int i, int j) const {
    return flat_flow_map(w_[i], {slope_[i], 0.0}, w_t_[i], {grid_.x(i), grid_.z(j), 0.0}, 2, floor_);
  }
  double J(int i) const { return 1.0 + w_[i]; }
  Vec3 inverse(int i, const Vec3& phys) const { return flat_flow_map_inverse(w_[i], phys, 2, floor_); }
  Vec3 normal(int i) const { return deformed_normal_flat({slope_[i], 0.0}); }
  double area(int i) const { return area_jacobian({slope_[i], 0.0}); }
  // Physical height of node (i, j).
  double height(int i, int j) const { return grid_.z(j) * (1.0 + w_[i]); }

 private:
  Grid grid_;
  PlateField w_, w_t_, slope_;
  double floor_;
};

// Gradient on the deformed domain of a field sampled at mapped nodes, via the chain rule through the map.
inline VectorField physical_grad(const ScalarField& f, const DomainMap& map) {
  const Grid& g = f.grid;
  VectorField r = grad(f);
  VectorField out(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t n = g.at(i, j);
      const double Jw = map.J(i);
      out[0][n] = r[0][n] - g.z(j) * map.slope()[i] / Jw * r[1][n];
      out[1][n] = r[1][n] / Jw;
    }
  return out;
}

inline ScalarField physical_div(const VectorField& v, const DomainMap& map) {
  const VectorField g0 = physical_grad(v[0], map);
  const VectorField g1 = physical_grad(v[1], map);
  ScalarField out(v.grid);
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = g0[0][n] + g1[1][n];
  return out;
}

}  // namespace fsi_slab
