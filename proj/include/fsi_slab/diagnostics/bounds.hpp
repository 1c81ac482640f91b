#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "energy.hpp"

namespace fsi_slab {

// Indicator of the essential band rho_bar/2 <= rho <= 2 rho_bar.
inline bool essential(double rho, const Params& p) { return rho >= 0.5 * p.rho_bar && rho <= 2.0 * p.rho_bar; }

struct EssResSplit {
  ScalarField ess, res;
};

// f = [f]_ess + [f]_res with the band indicator of rho.
inline EssResSplit ess_res_split(const ScalarField& f, const ScalarField& rho, const Params& p) {
  require_same_grid(f.grid, rho.grid);
  EssResSplit out{ScalarField(f.grid), ScalarField(f.grid)};
  for (std::size_t n = 0; n < f.size(); ++n) (essential(rho[n], p) ? out.ess : out.res).v[n] = f[n];
  return out;
}

inline EssResSplit ess_res_split(const ScalarField& rho, const Params& p) { return ess_res_split(rho, rho, p); }

// min over the essential band of bregman(rho | rho_bar) / (rho - rho_bar)^2 for p = rho^gamma.
inline double convexity_constant(const Params& p) {
  const double rb = p.rho_bar, g = p.gamma;
  double c = 0.5 * g * std::pow(rb, g - 2.0);
  const int n = 4000;
  for (int k = 0; k <= n; ++k) {
    const double rho = rb * (0.5 + 1.5 * k / n);
    const double d = rho - rb;
    if (std::abs(d) < 1e-6 * rb) continue;
    c = std::min(c, bregman_gamma(rho, rb, g) / (d * d));
  }
  return c;
}

struct UniformBounds {
  double kinetic = 0.0;              // sup_t int rho |u|^2
  double viscous = 0.0;              // sqrt(nu) || grad u + grad u^T - (2/3) div u I ||_{L2 L2}
  double ess_fluctuation = 0.0;      // sup_t int_ess |(rho - rho_bar) / eps|^2
  double res_mass = 0.0;             // sup_t int_res (1 + rho^gamma)
  double res_mass_over_eps2 = 0.0;
  double plate_velocity = 0.0;       // sup_t ||w_t||^2
  double plate_curvature = 0.0;      // sup_t ||Delta w||^2
  double plate_damping = 0.0;        // sqrt(nu_s) ||grad w_t||_{L2 L2}
  double convexity = 0.0;            // C(rho_bar)
};

// Streams snapshots; sups over every sample, time integrals by the trapezoid rule.
class UniformBoundsAccumulator {
 public:
  explicit UniformBoundsAccumulator(const Params& p) : p_(p) { b_.convexity = convexity_constant(p); }

  void add(const State& s) {
    const Grid& g = s.grid();
    const SlabGeometry geo = state_geometry(s, p_);
    const VelocityGradient G = velocity_gradient(geo, s.u_hat[0].v, s.u_hat[1].v);
    double ke = 0.0, visc = 0.0, ess = 0.0, res = 0.0;
    for (int j = 0; j < g.nz; ++j) {
      double rk = 0.0, rv = 0.0, re = 0.0, rr = 0.0;
      for (int i = 0; i < g.nx; ++i) {
        const std::size_t n = g.at(i, j);
        const double J = geo.J(i), rho = s.rho_hat[n];
        rk += J * rho * (s.u_hat[0][n] * s.u_hat[0][n] + s.u_hat[1][n] * s.u_hat[1][n]);
        const double dv = (G.g00[n] + G.g11[n]) / 3.0;
        const double a = 2.0 * (G.g00[n] - dv), d = 2.0 * (G.g11[n] - dv), o = G.g01[n] + G.g10[n];
        rv += J * (a * a + d * d + 2.0 * o * o);
        if (essential(rho, p_)) {
          const double f = (rho - p_.rho_bar) / p_.eps;
          re += J * f * f;
        } else {
          rr += J * (1.0 + std::pow(rho, p_.gamma));
        }
      }
      ke += g.wz(j) * rk;
      visc += g.wz(j) * rv;
      ess += g.wz(j) * re;
      res += g.wz(j) * rr;
    }
    const double hx = g.hx();
    ke *= hx;
    visc *= hx;
    b_.kinetic = std::max(b_.kinetic, ke);
    b_.ess_fluctuation = std::max(b_.ess_fluctuation, hx * ess);
    b_.res_mass = std::max(b_.res_mass, hx * res);
    const PlateModes mw = plate_fourier(s.w, g), mv = plate_fourier(s.w_t, g);
    b_.plate_velocity = std::max(b_.plate_velocity, spectral_quadratic(mv, [](double) { return 1.0; }));
    b_.plate_curvature = std::max(b_.plate_curvature, spectral_quadratic(mw, [](double k2) { return k2 * k2; }));
    const double damp = spectral_quadratic(mv, [](double k2) { return k2; });
    if (started_) {
      const double dt = s.t - t_prev_;
      visc_int_ += 0.5 * dt * (visc_prev_ + visc);
      damp_int_ += 0.5 * dt * (damp_prev_ + damp);
    }
    started_ = true;
    t_prev_ = s.t;
    visc_prev_ = visc;
    damp_prev_ = damp;
  }

  template <class Info, class Rates>
  void operator()(const State& s, const Info&, const Rates&) {
    add(s);
  }

  UniformBounds report() const {
    UniformBounds b = b_;
    b.viscous = std::sqrt(p_.nu * visc_int_);
    b.plate_damping = std::sqrt(p_.nu_s * damp_int_);
    b.res_mass_over_eps2 = b.res_mass / (p_.eps * p_.eps);
    return b;
  }

 private:
  Params p_;
  UniformBounds b_;
  bool started_ = false;
  double t_prev_ = 0.0, visc_prev_ = 0.0, damp_prev_ = 0.0, visc_int_ = 0.0, damp_int_ = 0.0;
};

inline UniformBounds uniform_bounds_report(const std::vector<State>& states, const Params& p) {
  UniformBoundsAccumulator acc(p);
  for (const State& s : states) acc.add(s);
  return acc.report();
}

struct LayerSample {
  double sigma = 0.0;
  double integral = 0.0;
};

struct LayerCurve {
  std::vector<LayerSample> samples;
  // Integral of p_delta over the whole domain (the layer with sigma = 1).
  double bulk = 0.0;
  // max over the samples of (integral / sigma) / bulk.
  double max_ratio = 0.0;
};

// Integral of p_delta(rho) over {z_hat > 1 - sigma}, linear in z_hat between nodes.
inline LayerCurve boundary_layer_pressure(const State& s, const Params& p, const std::vector<double>& sigmas) {
  const Grid& g = s.grid();
  std::vector<double> col(g.nz);
  auto layer = [&](double sigma) {
    const double z0 = 1.0 - sigma, h = g.hz();
    double total = 0.0;
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 0; j < g.nz; ++j) col[j] = pressure_delta(s.rho_hat(i, j), p);
      double c = 0.0;
      for (int j = 0; j + 1 < g.nz; ++j) {
        const double a = g.z(j), b = g.z(j + 1);
        if (b <= z0) continue;
        const double lo = std::max(a, z0);
        const double fl = col[j] + (col[j + 1] - col[j]) * (lo - a) / h;
        c += 0.5 * (fl + col[j + 1]) * (b - lo);
      }
      total += (1.0 + s.w[i]) * c;
    }
    return g.hx() * total;
  };
  LayerCurve out;
  out.bulk = layer(1.0);
  for (double sg : sigmas) {
    require(sg > 0.0 && sg <= 1.0, ErrorKind::parameter, "layer thickness must lie in (0, 1]");
    const double I = layer(sg);
    out.samples.push_back({sg, I});
    if (out.bulk > 0.0) out.max_ratio = std::max(out.max_ratio, I / sg / out.bulk);
  }
  return out;
}

}  // namespace fsi_slab
