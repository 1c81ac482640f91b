#pragma once

#include <cmath>

#include "../fluid/rhs.hpp"
#include "../plate/plate.hpp"

namespace fsi_slab {

// epsilon-independent perturbation data.
struct BaseProfiles {
  ScalarField rho1;
  VectorField u0;
  PlateField w0, w1;

  explicit BaseProfiles(const Grid& g) : rho1(g), u0(g), w0(g.plate_size(), 0.0), w1(g.plate_size(), 0.0) {}
};

// ||rho1||_inf + ||u0||_inf + ||Delta w0||_L2 + ||w1||_L2.
inline double perturbation_size(const BaseProfiles& b) {
  const Grid& g = b.rho1.grid;
  const PlateModes mw = plate_fourier(b.w0, g), mv = plate_fourier(b.w1, g);
  return b.rho1.max_abs() + b.u0.max_norm() + std::sqrt(spectral_quadratic(mw, [](double k2) { return k2 * k2; })) +
         std::sqrt(spectral_quadratic(mv, [](double) { return 1.0; }));
}

// rho = rho_bar + eps rho1 with u0, w0, w1 unchanged; the velocity is made consistent with both walls.
inline State well_prepared_ic(double eps, const BaseProfiles& b, double D, const Params& p) {
  require(eps >= 0.0, ErrorKind::parameter, "eps must be non-negative");
  const double size = perturbation_size(b);
  require(size <= D, ErrorKind::parameter,
          "initial perturbation " + std::to_string(size) + " exceeds the bound D = " + std::to_string(D));
  const Grid& g = b.rho1.grid;
  State s(g, p.rho_bar);
  for (std::size_t n = 0; n < g.size(); ++n) s.rho_hat.v[n] = p.rho_bar + eps * b.rho1[n];
  s.u_hat = b.u0;
  s.w = b.w0;
  s.w_t = b.w1;
  const SlabGeometry geo(g, s.w, s.w_t, p.contact_floor);
  enforce_kinematic(geo, s.u_hat[0].v, s.u_hat[1].v);
  enforce_bottom(g, s.u_hat[1].v);
  return s;
}

}  // namespace fsi_slab
