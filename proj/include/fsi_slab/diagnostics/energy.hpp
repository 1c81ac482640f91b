#pragma once

#include <cmath>
#include <vector>

#include "../fluid/rhs.hpp"
#include "../plate/plate.hpp"

namespace fsi_slab {

// Instantaneous dissipation rates of one state.
struct DissipationRates {
  double viscous = 0.0;
  double top_slip = 0.0;
  double bottom_slip = 0.0;
  double plate = 0.0;
  double penalty = 0.0;
  double total() const { return viscous + top_slip + bottom_slip + plate + penalty; }
};

struct EnergyReport {
  double t = 0.0;
  double kinetic = 0.0;
  double pressure_potential = 0.0;
  double plate_kinetic = 0.0;
  double plate_elastic = 0.0;
  // Cumulative dissipations from time 0.
  DissipationRates dissipated;
  double mass = 0.0;
  double mismatch = 0.0;

  double energy() const { return kinetic + pressure_potential + plate_kinetic + plate_elastic; }
};

// Physical velocity gradient G[a][b] = d u_a / d x_b from the summation-by-parts operators.
struct VelocityGradient {
  std::vector<double> g00, g01, g10, g11;
};

inline VelocityGradient velocity_gradient(const SlabGeometry& geo, const std::vector<double>& u0,
                                          const std::vector<double>& u1) {
  VelocityGradient G;
  std::vector<double> tmp;
  geo.gx(u0, G.g00, tmp);
  geo.gz(u0, G.g01);
  geo.gx(u1, G.g10, tmp);
  geo.gz(u1, G.g11);
  return G;
}

// Viscous integrand S(G):G at node n.
inline double viscous_density(const VelocityGradient& G, std::size_t n, const Params& p) {
  const double dv = G.g00[n] + G.g11[n];
  const double sym = G.g01[n] + G.g10[n];
  return 2.0 * p.mu * (G.g00[n] * G.g00[n] + G.g11[n] * G.g11[n]) + p.mu * sym * sym + p.lambda * dv * dv;
}

inline SlabGeometry state_geometry(const State& s, const Params& p) {
  return SlabGeometry(s.grid(), s.w, s.w_t, p.contact_floor);
}

// Rates of the viscous, slip and plate dissipations; the penalty rate is supplied by the stepper.
inline DissipationRates dissipation_rates(const State& s, const SlabGeometry& geo, const Params& p) {
  const Grid& g = s.grid();
  DissipationRates r;
  if (p.nu > 0.0) {
    const VelocityGradient G = velocity_gradient(geo, s.u_hat[0].v, s.u_hat[1].v);
    double v = 0.0;
    for (int j = 0; j < g.nz; ++j) {
      double row = 0.0;
      for (int i = 0; i < g.nx; ++i) row += geo.J(i) * viscous_density(G, g.at(i, j), p);
      v += g.wz(j) * row;
    }
    r.viscous = p.nu * g.hx() * v;
    const int top = g.nz - 1;
    for (int i = 0; i < g.nx; ++i) {
      const double sl = geo.slope()[i];
      const double len2 = 1.0 + sl * sl;
      const double v0 = s.u_hat[0](i, top), v1 = s.u_hat[1](i, top) - s.w_t[i];
      const double vt = (v0 + sl * v1) / std::sqrt(len2);
      r.top_slip += p.alpha * p.nu * g.hx() * std::sqrt(len2) * vt * vt;
      const double b = s.u_hat[0](i, 0);
      r.bottom_slip += p.alpha0 * p.nu * g.hx() * b * b;
    }
  }
  r.plate = plate_damping_rate(s.w_t, g, p);
  return r;
}

inline double fluid_mass(const State& s) {
  const Grid& g = s.grid();
  double m = 0.0;
  for (int j = 0; j < g.nz; ++j) {
    double row = 0.0;
    for (int i = 0; i < g.nx; ++i) row += (1.0 + s.w[i]) * s.rho_hat(i, j);
    m += g.wz(j) * row;
  }
  return g.hx() * m;
}

// L2(Gamma) norm of u . n^w - w_t on the top wall.
inline double kinematic_mismatch(const State& s) {
  const Grid& g = s.grid();
  const PlateField sl = plate_slope(s.w, g);
  const int top = g.nz - 1;
  double m = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double d = -sl[i] * s.u_hat[0](i, top) + s.u_hat[1](i, top) - s.w_t[i];
    m += g.hx() * d * d;
  }
  return std::sqrt(m);
}

inline EnergyReport energy_report(const State& s, const Params& p, const DissipationRates& cumulative = {}) {
  const Grid& g = s.grid();
  EnergyReport e;
  e.t = s.t;
  double ke = 0.0, pe = 0.0;
  for (int j = 0; j < g.nz; ++j) {
    double rk = 0.0, rp = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t n = g.at(i, j);
      const double J = 1.0 + s.w[i];
      const double r = s.rho_hat[n];
      double u2 = 0.0;
      for (int a = 0; a < s.u_hat.dim(); ++a) u2 += s.u_hat[a][n] * s.u_hat[a][n];
      rk += J * r * u2;
      rp += J * pressure_potential(r, p.rho_bar, p);
    }
    ke += g.wz(j) * rk;
    pe += g.wz(j) * rp;
  }
  e.kinetic = 0.5 * g.hx() * ke;
  e.pressure_potential = g.hx() * pe;
  const PlateModes mw = plate_fourier(s.w, g), mv = plate_fourier(s.w_t, g);
  e.plate_kinetic = 0.5 * spectral_quadratic(mv, [](double) { return 1.0; });
  e.plate_elastic = 0.5 * spectral_quadratic(mw, [](double k2) { return k2 * k2; });
  e.dissipated = cumulative;
  e.mass = fluid_mass(s);
  e.mismatch = kinematic_mismatch(s);
  return e;
}

struct EnergyCheck {
  bool pass = true;
  // max over snapshots after the first of (E + D - E0) / E0.
  double max_violation = 0.0;
  double time_of_max = 0.0;
};

inline EnergyCheck energy_inequality_check(const std::vector<EnergyReport>& rows, double tol) {
  EnergyCheck c;
  if (rows.empty()) return c;
  const double e0 = rows.front().energy();
  const double scale = e0 > 0.0 ? e0 : 1.0;
  c.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = rows.size() > 1 ? 1 : 0; k < rows.size(); ++k) {
    const EnergyReport& r = rows[k];
    const double v = (r.energy() + r.dissipated.total() - e0) / scale;
    if (v > c.max_violation) {
      c.max_violation = v;
      c.time_of_max = r.t;
    }
  }
  c.pass = c.max_violation <= tol;
  return c;
}

}  // namespace fsi_slab
