#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eos.hpp"
#include "operators.hpp"

namespace fsi_slab {

// Boundary tractions per plate sample (force per unit boundary area).
struct BoundaryTraction {
  std::vector<std::array<double, 2>> top_tangential;
  std::vector<std::array<double, 2>> bottom_tangential;
  // Normal traction F = -nu (S n^w) . e3 + pi / eps^2 on the top wall.
  PlateField top_normal;
  // (1/kappa)(u . n^w - w_t) in penalty mode, zero when coupling is strong.
  PlateField penalty_flux;
};

struct FluidRhs {
  ScalarField d_rho;
  // Tendency of J rho_hat, the conserved density.
  ScalarField d_mass;
  VectorField d_u;
  BoundaryTraction traction;
};

// Slip tractions and penalty flux evaluated from the wall traces of u.
inline BoundaryTraction apply_slip_bc(const SlabGeometry& geo, const VectorField& u, const Params& p) {
  const Grid& g = geo.grid();
  require(u.grid == g, ErrorKind::structural, "velocity and geometry grids differ");
  if (!p.strong()) require(p.kappa > 0.0, ErrorKind::parameter, "kappa must be positive in penalty mode");
  BoundaryTraction t;
  t.top_tangential.assign(g.nx, {0.0, 0.0});
  t.bottom_tangential.assign(g.nx, {0.0, 0.0});
  t.top_normal.assign(g.nx, 0.0);
  t.penalty_flux.assign(g.nx, 0.0);
  const int top = g.nz - 1;
  for (int i = 0; i < g.nx; ++i) {
    const double s = geo.slope()[i];
    const double len2 = 1.0 + s * s;
    const double v0 = u[0](i, top), v1 = u[1](i, top) - geo.wall_velocity()[i];
    const double vt = (v0 + s * v1) / len2;
    t.top_tangential[i] = {-p.alpha * p.nu * vt, -p.alpha * p.nu * vt * s};
    t.bottom_tangential[i] = {-p.alpha0 * p.nu * u[0](i, 0), 0.0};
    if (!p.strong()) {
      const double un = -s * u[0](i, top) + u[1](i, top);
      t.penalty_flux[i] = (un - geo.wall_velocity()[i]) / p.kappa;
    }
  }
  return t;
}

namespace detail {

inline double top_diff(const std::vector<double>& f, const Grid& g, int i) {
  auto F = [&](int j) { return f[g.at(i, j)]; };
  const int n = g.nz - 1;
  return (3.0 * F(n) - 4.0 * F(n - 1) + F(n - 2)) / (2.0 * g.hz());
}

inline double x_diff(const std::vector<double>& f, const Grid& g, int i, int j) {
  const int ip = (i + 1) % g.nx, im = (i + g.nx - 1) % g.nx;
  return (f[g.at(ip, j)] - f[g.at(im, j)]) / (2.0 * g.hx());
}

}  // namespace detail

// Pointwise normal traction on the top wall with second-order one-sided gradients.
inline PlateField top_normal_traction(const SlabGeometry& geo, const std::vector<double>& rho,
                                      const std::vector<double>& u0, const std::vector<double>& u1, const Params& p) {
  const Grid& g = geo.grid();
  const int top = g.nz - 1;
  PlateField F(g.nx, 0.0);
  for (int i = 0; i < g.nx; ++i) {
    double load = pressure_fluctuation(rho[g.at(i, top)], p);
    if (p.nu > 0.0) {
      const double s = geo.slope()[i], J = geo.J(i);
      std::array<std::array<double, 2>, 2> G{};
      const std::vector<double>* u[2] = {&u0, &u1};
      for (int a = 0; a < 2; ++a) {
        const double dxh = detail::x_diff(*u[a], g, i, top);
        const double dzh = detail::top_diff(*u[a], g, i);
        G[a][0] = dxh - s / J * dzh;
        G[a][1] = dzh / J;
      }
      const auto S = stress_tensor(G, p, 2);
      load -= p.nu * (-s * S[1][0] + S[1][1]);
    }
    F[i] = load;
  }
  return F;
}

inline PlateField top_normal_traction(const SlabGeometry& geo, const ScalarField& rho, const VectorField& u,
                                      const Params& p) {
  return top_normal_traction(geo, rho.v, u[0].v, u[1].v, p);
}

// Rate of change of rho_hat along the top wall from the upwind continuity fluxes.
inline PlateField top_density_rate(const SlabGeometry& geo, const std::vector<double>& rho,
                                   const std::vector<double>& u0, const std::vector<double>& u1) {
  const Grid& g = geo.grid();
  const int nx = g.nx, top = g.nz - 1;
  const double hx = g.hx(), wz = g.wz(top);
  auto v1 = [&](int i) { return geo.J(i) * u0[g.at(i, top)]; };
  auto v2 = [&](int i, int j) {
    const double zh = g.z(j);
    return -zh * geo.slope()[i] * u0[g.at(i, j)] + u1[g.at(i, j)] - zh * geo.mesh_rate()[i];
  };
  auto xflux = [&](int i) {
    const int e = i + 1 == nx ? 0 : i + 1;
    const double vf = 0.5 * (v1(i) + v1(e));
    return (vf >= 0.0 ? rho[g.at(i, top)] : rho[g.at(e, top)]) * vf * wz;
  };
  PlateField r(nx);
  for (int i = 0; i < nx; ++i) {
    const double vf = 0.5 * (v2(i, top - 1) + v2(i, top));
    const double zf = (vf >= 0.0 ? rho[g.at(i, top - 1)] : rho[g.at(i, top)]) * vf * hx;
    const double dq = -(xflux(i) - xflux(i == 0 ? nx - 1 : i - 1) - zf) / (hx * wz);
    r[i] = (dq - rho[g.at(i, top)] * geo.mesh_rate()[i]) / geo.J(i);
  }
  return r;
}

// Raw tendencies of the conserved density q = J rho_hat and of the velocity, with the weak-form
// pressure and viscous forces, energy-neutral advection and the wall friction forces.
// Normal wall conditions are imposed afterwards by projection or penalty relaxation.
struct FluidTendency {
  std::vector<double> dq, du0, du1;
};

inline void fluid_tendency(const SlabGeometry& geo, const std::vector<double>& rho, const std::vector<double>& u0,
                           const std::vector<double>& u1, const Params& p, FluidTendency& out) {
  const Grid& g = geo.grid();
  const int nx = g.nx, nz = g.nz;
  const std::size_t N = g.size();
  const double hx = g.hx();
  std::vector<double> V1(N), V2(N), X(N), Z(N, 0.0);
  for (int j = 0; j < nz; ++j) {
    const double zh = g.z(j);
    for (int i = 0; i < nx; ++i) {
      const std::size_t n = g.at(i, j);
      V1[n] = geo.J(i) * u0[n];
      V2[n] = -zh * geo.slope()[i] * u0[n] + u1[n] - zh * geo.mesh_rate()[i];
    }
  }
  // Upwind mass fluxes through the x-faces (i+1/2) and the interior z-faces (j+1/2).
  for (int j = 0; j < nz; ++j) {
    const double wz = g.wz(j);
    for (int i = 0; i < nx; ++i) {
      const std::size_t a = g.at(i, j), b = g.at(i + 1 == nx ? 0 : i + 1, j);
      const double vf = 0.5 * (V1[a] + V1[b]);
      X[a] = (vf >= 0.0 ? rho[a] : rho[b]) * vf * wz;
    }
  }
  for (int j = 0; j + 1 < nz; ++j)
    for (int i = 0; i < nx; ++i) {
      const std::size_t a = g.at(i, j), b = g.at(i, j + 1);
      const double vf = 0.5 * (V2[a] + V2[b]);
      Z[a] = (vf >= 0.0 ? rho[a] : rho[b]) * vf * hx;
    }

  out.dq.assign(N, 0.0);
  out.du0.assign(N, 0.0);
  out.du1.assign(N, 0.0);
  std::vector<double> mass(N);
  for (int j = 0; j < nz; ++j) {
    const double vol = geo.volume(j);
    for (int i = 0; i < nx; ++i) {
      const std::size_t n = g.at(i, j);
      const std::size_t w = g.at(i == 0 ? nx - 1 : i - 1, j);
      const std::size_t e = g.at(i + 1 == nx ? 0 : i + 1, j);
      const double zp = j + 1 < nz ? Z[n] : 0.0;
      const double zm = j > 0 ? Z[g.at(i, j - 1)] : 0.0;
      out.dq[n] = -(X[n] - X[w] + zp - zm) / vol;
      mass[n] = vol * geo.J(i) * rho[n];
      const std::size_t up = j + 1 < nz ? g.at(i, j + 1) : n, dn = j > 0 ? g.at(i, j - 1) : n;
      out.du0[n] = -0.5 * (X[n] * (u0[e] - u0[n]) - X[w] * (u0[w] - u0[n]) + zp * (u0[up] - u0[n]) -
                           zm * (u0[dn] - u0[n]));
      out.du1[n] = -0.5 * (X[n] * (u1[e] - u1[n]) - X[w] * (u1[w] - u1[n]) + zp * (u1[up] - u1[n]) -
                           zm * (u1[dn] - u1[n]));
    }
  }

  std::vector<double> tmp(N), tmp2(N);
  // Pressure: F = eps^-2 G^T (W J pi).
  {
    const double pb = pressure_delta(p.rho_bar, p);
    const double e2 = 1.0 / (p.eps * p.eps);
    std::vector<double> s(N);
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::size_t n = g.at(i, j);
        s[n] = e2 * geo.volume(j) * geo.J(i) * (pressure_delta(rho[n], p) - pb);
      }
    geo.gx_transpose_add(s, out.du0, tmp);
    geo.gz_transpose_add(s, out.du1, tmp);
  }
  // Viscosity: F_a = -nu sum_b G_b^T (W J S_ab).
  if (p.nu > 0.0) {
    std::vector<double> g00(N), g01(N), g10(N), g11(N);
    geo.gx(u0, g00, tmp);
    geo.gz(u0, g01);
    geo.gx(u1, g10, tmp);
    geo.gz(u1, g11);
    std::vector<double> s00(N), s01(N), s11(N);
    for (int j = 0; j < nz; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::size_t n = g.at(i, j);
        const double wj = -p.nu * geo.volume(j) * geo.J(i);
        const double dv = g00[n] + g11[n];
        s00[n] = wj * (2.0 * p.mu * g00[n] + p.lambda * dv);
        s11[n] = wj * (2.0 * p.mu * g11[n] + p.lambda * dv);
        s01[n] = wj * p.mu * (g01[n] + g10[n]);
      }
    geo.gx_transpose_add(s00, out.du0, tmp);
    geo.gz_transpose_add(s01, out.du0, tmp);
    geo.gx_transpose_add(s01, out.du1, tmp);
    geo.gz_transpose_add(s11, out.du1, tmp);
  }
  // Without a strong wall the top nodes see the interior stresses only; the wall traction is carried
  // by the plate load and reaches the fluid through the penalty force.
  if (!p.strong()) {
    const PlateField T = top_normal_traction(geo, rho, u0, u1, p);
    for (int i = 0; i < nx; ++i) {
      const std::size_t n = g.at(i, nz - 1);
      out.du0[n] += T[i] * hx * geo.slope()[i];
      out.du1[n] -= T[i] * hx;
    }
  }
  // Navier-slip friction on both walls.
  if (p.nu > 0.0) {
    const int top = nz - 1;
    for (int i = 0; i < nx; ++i) {
      const double s = geo.slope()[i];
      const double len2 = 1.0 + s * s;
      const std::size_t n = g.at(i, top);
      const double vt = (u0[n] + s * (u1[n] - geo.wall_velocity()[i])) / len2;
      const double c = p.alpha * p.nu * std::sqrt(len2) * hx;
      out.du0[n] -= c * vt;
      out.du1[n] -= c * vt * s;
      out.du0[g.at(i, 0)] -= p.alpha0 * p.nu * hx * u0[g.at(i, 0)];
    }
  }
  for (std::size_t n = 0; n < N; ++n) {
    out.du0[n] /= mass[n];
    out.du1[n] /= mass[n];
  }
}

inline FluidRhs fluid_rhs(const State& s, const SlabGeometry& geo, const Params& p) {
  const Grid& g = s.grid();
  require(g == geo.grid(), ErrorKind::structural, "state and geometry grids differ");
  for (double r : s.rho_hat.v)
    if (!std::isfinite(r)) throw Error(ErrorKind::blow_up, "non-finite density", s.t);
  if (s.rho_hat.min() <= 0.0) throw Error(ErrorKind::positivity, "non-positive density", s.t);
  FluidTendency t;
  fluid_tendency(geo, s.rho_hat.v, s.u_hat[0].v, s.u_hat[1].v, p, t);
  FluidRhs r{ScalarField(g), ScalarField(g), VectorField(g), {}};
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t n = g.at(i, j);
      r.d_mass[n] = t.dq[n];
      r.d_rho[n] = (t.dq[n] - s.rho_hat[n] * geo.mesh_rate()[i]) / geo.J(i);
      r.d_u[0][n] = t.du0[n];
      r.d_u[1][n] = t.du1[n];
    }
  for (std::size_t n = 0; n < g.size(); ++n)
    if (!std::isfinite(r.d_rho[n]) || !std::isfinite(r.d_u[0][n]) || !std::isfinite(r.d_u[1][n]))
      throw Error(ErrorKind::blow_up, "non-finite tendency", s.t);
  r.traction = apply_slip_bc(geo, s.u_hat, p);
  r.traction.top_normal = top_normal_traction(geo, s.rho_hat, s.u_hat, p);
  return r;
}

// Bottom impermeability and, in strong mode, u . n^w = w_t on the top wall (minimal-norm correction).
inline void enforce_bottom(const Grid& g, std::vector<double>& u1) {
  for (int i = 0; i < g.nx; ++i) u1[g.at(i, 0)] = 0.0;
}

inline void enforce_kinematic(const SlabGeometry& geo, std::vector<double>& u0, std::vector<double>& u1) {
  const Grid& g = geo.grid();
  const int top = g.nz - 1;
  for (int i = 0; i < g.nx; ++i) {
    const std::size_t n = g.at(i, top);
    const double s = geo.slope()[i];
    const double r = (-s * u0[n] + u1[n] - geo.wall_velocity()[i]) / (1.0 + s * s);
    u0[n] += r * s;
    u1[n] -= r;
  }
}

// Backward-Euler relaxation of the top normal velocity under the penalty force
// -(1/kappa)(u . n^w - w_t) n^w. Returns (1/kappa) sum hx (u . n^w - w_t)^2 after relaxation.
inline double penalty_relax(const SlabGeometry& geo, const std::vector<double>& rho, std::vector<double>& u0,
                            std::vector<double>& u1, const Params& p, double dt) {
  const Grid& g = geo.grid();
  const int top = g.nz - 1;
  double diss = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const std::size_t n = g.at(i, top);
    const double s = geo.slope()[i];
    const double len2 = 1.0 + s * s;
    const double m = geo.volume(top) * geo.J(i) * rho[n];
    const double a = dt * g.hx() * len2 / (p.kappa * m);
    const double un = -s * u0[n] + u1[n];
    const double target = (un + a * geo.wall_velocity()[i]) / (1.0 + a);
    const double r = (target - un) / len2;
    u0[n] -= r * s;
    u1[n] += r;
    const double d = target - geo.wall_velocity()[i];
    diss += g.hx() * d * d / p.kappa;
  }
  return diss;
}

// cfl * h_min / (max |u| + max sqrt(p_delta'(rho)) / eps), h_min the smallest physical spacing.
inline double acoustic_cfl(const State& s, const Grid& g, const Params& p, double cfl = 0.4) {
  double jmin = 1.0;
  for (double w : s.w) jmin = std::min(jmin, 1.0 + w);
  if (s.w.empty()) jmin = 1.0;
  const double h = std::min(g.hx(), g.hz() * jmin);
  double umax = 0.0, cmax = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    double v = 0.0;
    for (int a = 0; a < s.u_hat.dim(); ++a) v += s.u_hat[a][n] * s.u_hat[a][n];
    umax = std::max(umax, std::sqrt(v));
    cmax = std::max(cmax, sound_speed(s.rho_hat[n], p));
  }
  return cfl * h / (umax + cmax);
}

// Acoustic bound combined with explicit viscous and wall-friction limits.
inline double stable_dt(const State& s, const Grid& g, const Params& p, double cfl = 0.4) {
  double dt = acoustic_cfl(s, g, p, cfl);
  if (p.nu > 0.0) {
    double jmin = std::numeric_limits<double>::infinity(), smax = 0.0;
    for (double w : s.w) jmin = std::min(jmin, 1.0 + w);
    for (double v : plate_slope(s.w, g)) smax = std::max(smax, std::abs(v));
    const double rmin = s.rho_hat.min();
    const double hz = g.hz() * jmin;
    const double diff = p.nu * (2.0 * p.mu + std::abs(p.lambda)) / rmin;
    dt = std::min(dt, 0.25 / (diff * (1.0 / (g.hx() * g.hx()) + 1.0 / (hz * hz))));
    const double fr = std::max(p.alpha, p.alpha0) * p.nu * std::sqrt(1.0 + smax * smax);
    if (fr > 0.0) dt = std::min(dt, 0.25 * hz * rmin / fr);
  }
  return dt;
}

}  // namespace fsi_slab
