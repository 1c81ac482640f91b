#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "../core/fourier.hpp"
#include "../core/params.hpp"
#include "../fluid/rhs.hpp"

namespace fsi_slab {

struct PlateLoad {
  PlateField F;
};

// Fluid traction on the plate; in penalty mode optionally adds the explicit pairing (1/kappa)(u . n^w - w_t).
inline PlateLoad compute_plate_load(const State& s, const SlabGeometry& geo, const Params& p,
                                    bool include_penalty = true) {
  PlateLoad load{top_normal_traction(geo, s.rho_hat, s.u_hat, p)};
  if (include_penalty && !p.strong()) {
    const BoundaryTraction t = apply_slip_bc(geo, s.u_hat, p);
    for (std::size_t i = 0; i < load.F.size(); ++i) load.F[i] += t.penalty_flux[i];
  }
  return load;
}

namespace detail {

// Exact flow over time t of y'' + c y' + K y = f (constant f) for complex (y, v).
inline void damped_mode(std::complex<double>& y, std::complex<double>& v, double c, double K,
                        std::complex<double> f, double t) {
  if (K == 0.0) {
    if (c == 0.0) {
      y += v * t + 0.5 * f * t * t;
      v += f * t;
      return;
    }
    const double e = std::exp(-c * t);
    const double one_minus = -std::expm1(-c * t);
    const std::complex<double> vs = f / c;
    y += vs * t + (v - vs) * one_minus / c;
    v = vs + (v - vs) * e;
    return;
  }
  const std::complex<double> yp = f / K;
  const std::complex<double> z0 = y - yp, v0 = v;
  const double a = 0.5 * c;
  const double om2 = K - a * a;
  double C, S;  // already carry the factor exp(-a t)
  const double x = om2 * t * t;
  if (std::abs(x) < 1e-8) {
    const double e = std::exp(-a * t);
    C = e * (1.0 - 0.5 * x + x * x / 24.0);
    S = e * t * (1.0 - x / 6.0 + x * x / 120.0);
  } else if (om2 > 0.0) {
    const double om = std::sqrt(om2);
    const double e = std::exp(-a * t);
    C = e * std::cos(om * t);
    S = e * std::sin(om * t) / om;
  } else {
    const double Om = std::sqrt(-om2);
    const double r1 = -K / (a + Om), r2 = -a - Om;
    const double e1 = std::exp(r1 * t), e2 = std::exp(r2 * t);
    C = 0.5 * (e1 + e2);
    S = (e1 - e2) / (2.0 * Om);
  }
  y = yp + z0 * C + (v0 + a * z0) * S;
  v = v0 * C - (a * v0 + K * z0) * S;
}

}  // namespace detail

// Per-mode exponential integrator for w'' + Delta^2 w - nu_s Delta w' = F with F frozen over the step.
// With a penalty target the extra force (1/kappa)(target - w') is integrated implicitly as well.
inline std::pair<PlateField, PlateField> plate_step(const PlateField& w, const PlateField& w_t, const PlateLoad& load,
                                                    double dt, const Params& p, const Grid& g,
                                                    const PlateField* penalty_target = nullptr) {
  require(dt > 0.0, ErrorKind::parameter, "plate step needs dt > 0");
  require(w.size() == g.plate_size() && w_t.size() == g.plate_size() && load.F.size() == g.plate_size(),
          ErrorKind::structural, "plate samples do not match the grid");
  PlateModes mw = plate_fourier(w, g), mv = plate_fourier(w_t, g), mf = plate_fourier(load.F, g);
  double extra = 0.0;
  if (penalty_target) {
    const PlateModes ms = plate_fourier(*penalty_target, g);
    extra = 1.0 / p.kappa;
    for (std::size_t n = 0; n < mf.c.size(); ++n) mf.c[n] += extra * ms.c[n];
  }
  for (int l = 0; l < mw.ny; ++l)
    for (int m = 0; m < mw.mx(); ++m) {
      const std::size_t n = mw.at(m, l);
      const double k2 = mw.k2(m, l);
      detail::damped_mode(mw.c[n], mv.c[n], p.nu_s * k2 + extra, k2 * k2, mf.c[n], dt);
    }
  return {plate_inverse_fourier(mw), plate_inverse_fourier(mv)};
}

inline std::pair<PlateField, PlateField> plate_step(const PlateField& w, const PlateField& w_t, const PlateLoad& load,
                                                    double dt, const Params& p) {
  return plate_step(w, w_t, load, dt, p, Grid(static_cast<int>(w.size()), 4));
}

// Integral over the torus of |w_t|^2/2 + |Delta w|^2/2.
inline double plate_energy(const PlateField& w, const PlateField& w_t, const Grid& g) {
  const PlateModes mw = plate_fourier(w, g), mv = plate_fourier(w_t, g);
  return 0.5 * spectral_quadratic(mv, [](double) { return 1.0; }) +
         0.5 * spectral_quadratic(mw, [](double k2) { return k2 * k2; });
}

// nu_s times the integral of |grad w_t|^2.
inline double plate_damping_rate(const PlateField& w_t, const Grid& g, const Params& p) {
  return p.nu_s * spectral_quadratic(plate_fourier(w_t, g), [](double k2) { return k2; });
}

// Mean-free solution of Delta^2 w = F.
inline PlateField plate_static_solve(const PlateField& F, const Grid& g) {
  return plate_inverse_fourier(apply_symbol(plate_fourier(F, g), [](double k2) { return k2 > 0 ? 1.0 / (k2 * k2) : 0.0; }));
}

}  // namespace fsi_slab
