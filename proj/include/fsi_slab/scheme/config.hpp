#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "../core/field.hpp"
#include "../core/params.hpp"
#include "../core/stencil.hpp"
#include "../fluid/rhs.hpp"
#include "../limits/well_prepared.hpp"

namespace fsi_slab {

enum class Coupling { penalty, strong, monolithic };

inline const char* to_string(Coupling c) {
  switch (c) {
    case Coupling::penalty: return "penalty";
    case Coupling::strong: return "strong";
    case Coupling::monolithic: return "monolithic";
  }
  return "strong";
}

struct CouplingSpec {
  Coupling mode = Coupling::strong;
  double kappa = 1e-3;
  double tol = 1e-10;
  int max_iter = 50;
  double relaxation = 0.7;
};

// Named initial profiles. Amplitudes not used by a profile are ignored.
struct InitialSpec {
  std::string profile = "rest";
  double amplitude = 0.0;
  double width = 0.3;
  double x0 = std::numbers::pi;
  double z0 = 0.5;
  int mode = 1;
  double plate_amplitude = 0.0;
  double plate_velocity = 0.0;
  double velocity_amplitude = 0.0;
  double rho1_amplitude = 0.0;
  // rho1 is multiplied by eps^rho1_power; a positive power makes the data well prepared as eps -> 0.
  double rho1_power = 0.0;
  double D = 10.0;
  double cavity_depth = 0.1;
  double cavity_lx = 6.0;
  double cavity_lz = 2.0;
};

struct RunConfig {
  Params params;
  Grid grid{64, 33};
  InitialSpec initial;
  CouplingSpec coupling;
  double t_final = 1.0;
  // dt <= dt_factor * stable_dt with the acoustic number cfl, or a fixed dt when fixed_dt > 0.
  double cfl = 0.4;
  double dt_factor = 1.0;
  double fixed_dt = 0.0;
  double output_interval = 0.1;
  bool keep_states = false;
  // Midpoint prediction of the pressure load seen by the plate.
  bool predict_load = true;
  bool strict = false;
  double tol_energy = 1e-3;
  // Wall-clock budget in seconds; 0 disables it.
  double time_budget = 0.0;

  void validate() const {
    params.validate();
    grid.validate();
    require(params.dim == 2 && grid.dim() == 2, ErrorKind::parameter, "the solver runs in 2D only");
    require(t_final > 0.0, ErrorKind::parameter, "t_final must be positive");
    require(output_interval > 0.0, ErrorKind::parameter, "output_interval must be positive");
    require(cfl > 0.0 && dt_factor > 0.0 && fixed_dt >= 0.0, ErrorKind::parameter, "invalid time-step policy");
    if (coupling.mode == Coupling::penalty)
      require(coupling.kappa > 0.0 && std::isfinite(coupling.kappa), ErrorKind::parameter,
              "penalty coupling needs a finite positive kappa");
    if (coupling.mode == Coupling::monolithic)
      require(coupling.tol > 0.0 && coupling.max_iter > 0 && coupling.relaxation > 0.0 && coupling.relaxation <= 1.0,
              ErrorKind::parameter, "invalid monolithic iteration settings");
  }

  // Params with kappa matching the coupling mode.
  Params effective_params() const {
    Params p = params;
    p.kappa = coupling.mode == Coupling::penalty ? coupling.kappa : Params::strong_sentinel();
    return p;
  }
};

namespace detail {

inline double periodic_offset(double x, double x0, double lx) {
  double d = std::fmod(x - x0, lx);
  if (d > 0.5 * lx) d -= lx;
  if (d < -0.5 * lx) d += lx;
  return d;
}

// C-infinity bump supported in |s| < 1 with value 1 at 0.
inline double unit_bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

}  // namespace detail

// Velocity (Dz psi, -Dx psi) of psi = A sin(m x) sin^2(pi z): divergence free for the grid stencils
// and tangential on both walls.
inline VectorField stream_velocity(const Grid& g, double A, int m) {
  ScalarField psi(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double sz = std::sin(std::numbers::pi * g.z(j));
      psi(i, j) = A * std::sin(m * g.x(i)) * sz * sz;
    }
  const VectorField d = grad(psi);
  VectorField u(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    u[0][n] = d[1][n];
    u[1][n] = -d[0][n];
  }
  for (int i = 0; i < g.nx; ++i) {
    u[1](i, 0) = 0.0;
    u[1](i, g.nz - 1) = 0.0;
  }
  return u;
}

inline State make_initial_state(const InitialSpec& ic, const Grid& g, const Params& p) {
  State s(g, p.rho_bar);
  const std::string& k = ic.profile;
  if (k == "rest") return s;
  if (k == "pressure_pulse") {
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double dx = detail::periodic_offset(g.x(i), ic.x0, g.lx), dz = g.z(j) - ic.z0;
        s.rho_hat(i, j) = p.rho_bar + ic.amplitude * std::exp(-(dx * dx + dz * dz) / (ic.width * ic.width));
      }
    return s;
  }
  if (k == "plate_mode") {
    for (int i = 0; i < g.nx; ++i) {
      s.w[i] = ic.plate_amplitude * std::cos(ic.mode * g.x(i));
      s.w_t[i] = ic.plate_velocity * std::cos(ic.mode * g.x(i));
    }
    return s;
  }
  if (k == "well_prepared") {
    BaseProfiles b(g);
    const double a = ic.rho1_amplitude * std::pow(p.eps, ic.rho1_power);
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < g.nx; ++i) b.rho1(i, j) = a * std::cos(ic.mode * g.x(i));
    b.u0 = stream_velocity(g, ic.velocity_amplitude, ic.mode);
    for (int i = 0; i < g.nx; ++i) {
      b.w0[i] = ic.plate_amplitude * std::cos(ic.mode * g.x(i));
      b.w1[i] = ic.plate_velocity * std::cos(ic.mode * g.x(i));
    }
    return well_prepared_ic(p.eps, b, ic.D, p);
  }
  if (k == "cavity") {
    // Density hole of depth rho_bar/2 + cavity_depth on an eps-sized anisotropic patch.
    const double rx = ic.cavity_lx * p.eps, rz = ic.cavity_lz * p.eps;
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double dx = detail::periodic_offset(g.x(i), ic.x0, g.lx) / rx, dz = (g.z(j) - ic.z0) / rz;
        const double b = detail::unit_bump(std::sqrt(dx * dx + dz * dz));
        s.rho_hat(i, j) = p.rho_bar - (0.5 * p.rho_bar + ic.cavity_depth) * b;
      }
    return s;
  }
  throw Error(ErrorKind::config, "unknown initial profile '" + k + "'");
}

}  // namespace fsi_slab
