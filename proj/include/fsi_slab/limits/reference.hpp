#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "../diagnostics/relative.hpp"
#include "../geometry/composed.hpp"
#include "../scheme/stepper.hpp"

namespace fsi_slab {

// Limit fields at one time on the reference grid: divergence-free velocity, pressure, plate and its rates.
struct ReferenceSnapshot {
  double t = 0.0;
  VectorField v;
  ScalarField pi;
  PlateField eta, eta_t, eta_tt;
};

struct ReferenceSolution {
  std::string provider = "proxy-run";
  Grid grid;
  Params params;
  std::vector<ReferenceSnapshot> snapshots;
  // Max discrete divergence before and after the projection, and max |v . n^eta - eta_t| on the wall.
  double raw_divergence = 0.0;
  double projection_defect = 0.0;
  double kinematic_defect = 0.0;
  // Regularity metadata: max over snapshots of |grad v|_inf and |Delta eta|_inf.
  double max_velocity_gradient = 0.0;
  double max_curvature = 0.0;

  double t_begin() const { return snapshots.front().t; }
  double t_end() const { return snapshots.back().t; }

  // Linear interpolation in time, clamped to the recorded interval.
  ReferenceSnapshot at(double t) const {
    require(!snapshots.empty(), ErrorKind::structural, "empty reference solution");
    if (t <= snapshots.front().t) return snapshots.front();
    if (t >= snapshots.back().t) return snapshots.back();
    auto it = std::upper_bound(snapshots.begin(), snapshots.end(), t,
                               [](double a, const ReferenceSnapshot& s) { return a < s.t; });
    const ReferenceSnapshot& b = *it;
    const ReferenceSnapshot& a = *(it - 1);
    const double th = (t - a.t) / (b.t - a.t);
    if (th == 0.0) return a;
    ReferenceSnapshot out = a;
    out.t = t;
    auto mix = [th](std::vector<double>& x, const std::vector<double>& y) {
      for (std::size_t n = 0; n < x.size(); ++n) x[n] += th * (y[n] - x[n]);
    };
    for (int d = 0; d < out.v.dim(); ++d) mix(out.v[d].v, b.v[d].v);
    mix(out.pi.v, b.pi.v);
    mix(out.eta, b.eta);
    mix(out.eta_t, b.eta_t);
    mix(out.eta_tt, b.eta_tt);
    return out;
  }
};

// Rest reference: zero velocity and pressure, flat plate, at the given times.
inline ReferenceSolution manufactured_rest_reference(const Grid& g, const Params& p, const std::vector<double>& times) {
  ReferenceSolution r;
  r.provider = "manufactured";
  r.grid = g;
  r.params = p;
  for (double t : times)
    r.snapshots.push_back({t, VectorField(g), ScalarField(g), PlateField(g.plate_size(), 0.0),
                           PlateField(g.plate_size(), 0.0), PlateField(g.plate_size(), 0.0)});
  return r;
}

namespace detail {

inline double mean(const PlateField& f) {
  double s = 0.0;
  for (double a : f) s += a;
  return s / static_cast<double>(f.size());
}

// Solves -Dx psi = f for the central difference Dx; mean and Nyquist content of f are dropped.
inline PlateField inverse_central_dx(const PlateField& f, const Grid& g) {
  PlateModes m = plate_fourier(f, g);
  for (int k = 0; k < m.mx(); ++k) {
    const double sym = std::sin(2.0 * std::numbers::pi * k / g.nx) / g.hx();
    std::complex<double>& c = m.c[m.at(k, 0)];
    if (std::abs(sym) < 1e-12 / g.hx())
      c = 0.0;
    else
      c = -c / std::complex<double>(0.0, sym);
  }
  return plate_inverse_fourier(m);
}

// Periodic linear interpolation of plate samples at x.
inline double sample_plate(const PlateField& f, const Grid& g, double x) {
  double s = x / g.hx();
  s -= std::floor(s / g.nx) * g.nx;
  int i0 = static_cast<int>(std::floor(s));
  const double fx = s - i0;
  i0 %= g.nx;
  return (1.0 - fx) * f[i0] + fx * f[(i0 + 1) % g.nx];
}

inline PlateField resample_plate(const PlateField& f, const Grid& from, const Grid& to) {
  if (from.nx == to.nx && from.lx == to.lx) return f;
  PlateField out(to.plate_size());
  for (int i = 0; i < to.nx; ++i) out[i] = sample_plate(f, from, to.x(i));
  return out;
}

}  // namespace detail

struct ProjectionResult {
  VectorField v;
  double raw_divergence = 0.0;
  double defect = 0.0;
};

// Projects u (Cartesian components on the eta domain) onto fields with zero discrete divergence
// and wall flux eta_t: the contravariant flux is (Dz psi, -Dx psi) for a streamfunction psi
// obtained by integrating the horizontal flux upward and blending to the prescribed wall value.
inline ProjectionResult streamfunction_projection(const VectorField& u, const PlateField& eta, const PlateField& eta_t) {
  const Grid& g = u.grid;
  const PlateField s = plate_slope(eta, g);
  VectorField V(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double J = 1.0 + eta[i];
      V[0](i, j) = J * u[0](i, j);
      V[1](i, j) = -g.z(j) * s[i] * u[0](i, j) + u[1](i, j);
    }
  ProjectionResult out;
  out.raw_divergence = div(V).max_abs();
  ScalarField psi(g);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 1; j < g.nz; ++j) psi(i, j) = psi(i, j - 1) + 0.5 * g.hz() * (V[0](i, j - 1) + V[0](i, j));
  PlateField top = detail::inverse_central_dx(eta_t, g);
  PlateField gap(g.nx);
  for (int i = 0; i < g.nx; ++i) gap[i] = top[i] - psi(i, g.nz - 1);
  const double shift = detail::mean(gap);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nz; ++j) {
      const double z = g.z(j), th = z * z * (3.0 - 2.0 * z);
      psi(i, j) += th * (gap[i] - shift);
    }
  const VectorField d = grad(psi);
  VectorField W(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    W[0][n] = d[1][n];
    W[1][n] = -d[0][n];
  }
  out.defect = div(W).max_abs();
  out.v = VectorField(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double v0 = W[0](i, j) / (1.0 + eta[i]);
      out.v[0](i, j) = v0;
      out.v[1](i, j) = W[1](i, j) + g.z(j) * s[i] * v0;
    }
  return out;
}

// Fills the limit snapshot from one compressible state of the proxy run.
inline ReferenceSnapshot proxy_snapshot(const State& s, const Params& p, double eta_mean0, ReferenceSolution& meta) {
  const Grid& g = s.grid();
  ReferenceSnapshot r;
  r.t = s.t;
  const double wm = detail::mean(s.w), vm = detail::mean(s.w_t);
  r.eta = s.w;
  r.eta_t = s.w_t;
  for (int i = 0; i < g.nx; ++i) {
    r.eta[i] += eta_mean0 - wm;
    r.eta_t[i] -= vm;
  }
  // Drop the Nyquist content so the wall flux is representable.
  {
    PlateModes m = plate_fourier(r.eta_t, g);
    if (g.nx % 2 == 0) m.c[m.at(g.nx / 2, 0)] = 0.0;
    r.eta_t = plate_inverse_fourier(m);
  }
  const ProjectionResult pr = streamfunction_projection(s.u_hat, r.eta, r.eta_t);
  r.v = pr.v;
  meta.raw_divergence = std::max(meta.raw_divergence, pr.raw_divergence);
  meta.projection_defect = std::max(meta.projection_defect, pr.defect);
  r.pi = ScalarField(g);
  for (std::size_t n = 0; n < g.size(); ++n) r.pi[n] = pressure_fluctuation(s.rho_hat[n], p);
  const SlabGeometry geo(g, s.w, s.w_t, p.contact_floor);
  PlateField load = top_normal_traction(geo, s.rho_hat, s.u_hat, p);
  const double lm = detail::mean(load);
  const PlateField bil = plate_bilaplacian(r.eta, g), lap = plate_laplacian(r.eta_t, g);
  r.eta_tt.resize(g.nx);
  for (int i = 0; i < g.nx; ++i) r.eta_tt[i] = load[i] - lm - bil[i] + p.nu_s * lap[i];
  const PlateField sl = plate_slope(r.eta, g);
  for (int i = 0; i < g.nx; ++i) {
    const int top = g.nz - 1;
    meta.kinematic_defect =
        std::max(meta.kinematic_defect, std::abs(-sl[i] * r.v[0](i, top) + r.v[1](i, top) - r.eta_t[i]));
  }
  const SlabGeometry geo_eta(g, r.eta, r.eta_t, p.contact_floor);
  const VelocityGradient G = velocity_gradient(geo_eta, r.v[0].v, r.v[1].v);
  for (std::size_t n = 0; n < g.size(); ++n)
    meta.max_velocity_gradient = std::max(
        {meta.max_velocity_gradient, std::abs(G.g00[n]), std::abs(G.g01[n]), std::abs(G.g10[n]), std::abs(G.g11[n])});
  const PlateField lw = plate_laplacian(r.eta, g);
  for (double a : lw) meta.max_curvature = std::max(meta.max_curvature, std::abs(a));
  return r;
}

// Runs the compressible solver at (eps0, nu0) on the configured (fine) grid and records the projected
// limit fields at every output time.
inline ReferenceSolution reference_proxy(const RunConfig& config, double eps0, double nu0) {
  RunConfig c = config;
  c.params.eps = eps0;
  c.params.nu = nu0;
  c.keep_states = true;
  c.validate();
  const Params p = c.effective_params();
  const Trajectory tr = run(c);
  ReferenceSolution ref;
  ref.provider = "proxy-run";
  ref.grid = c.grid;
  ref.params = p;
  const double m0 = detail::mean(tr.states.front().w);
  for (const State& s : tr.states) ref.snapshots.push_back(proxy_snapshot(s, p, m0, ref));
  return ref;
}

// Forcing of the transformed limit system, one L2 norm per group, and the plate-difference norms
// that bound it.
struct ForcingRecord {
  static constexpr int count = 5;
  std::array<double, count> l2{};
  double total_l2 = 0.0;
  // ||grad (w_t - eta_t)|| + ||w_t - eta_t|| + ||Delta (w - eta)||.
  double plate_difference = 0.0;
  static const char* name(int k) {
    static const char* n[count] = {"mesh_advection", "time_derivative_of_map", "gradient_of_map",
                                   "volume_change", "pressure_metric"};
    return n[k];
  }
};

struct TransformedReference {
  TestTriple triple;
  ForcingRecord forcing;
};

namespace detail {

// J A (v_tilde o Psi) on the state grid for plate positions (w, eta).
inline VectorField transformed_velocity(const ReferenceSnapshot& snap, const Grid& ref_grid, const Grid& g,
                                        const PlateField& w, const PlateField& w_t, double floor) {
  const PlateField eta = resample_plate(snap.eta, ref_grid, g);
  const PlateField eta_t = resample_plate(snap.eta_t, ref_grid, g);
  const ComposedMap map(g, w, eta, w_t, eta_t, floor);
  return piola_transform(snap.v, map);
}

}  // namespace detail

// Moves the reference onto the current domain of the state with Psi = Phi_eta o Phi_w^{-1}.
inline TransformedReference transform_reference(const ReferenceSolution& ref, const State& s, const Params& p) {
  const Grid& g = s.grid();
  const Grid& G = ref.grid;
  require(g.lx == G.lx && g.dim() == 2, ErrorKind::structural, "reference and state domains differ");
  const double t = s.t;
  const ReferenceSnapshot snap = ref.at(t);
  const PlateField eta = detail::resample_plate(snap.eta, G, g);
  const PlateField eta_t = detail::resample_plate(snap.eta_t, G, g);
  const PlateField eta_tt = detail::resample_plate(snap.eta_tt, G, g);
  ComposedMap map(g, s.w, eta, s.w_t, eta_t, p.contact_floor);
  TransformedReference out{TestTriple(g, p.rho_bar), {}};
  TestTriple& T = out.triple;
  T.U = piola_transform(snap.v, map);
  T.W = eta;
  T.W_t = eta_t;
  T.W_tt = eta_tt;

  // Rate of U along the moving nodes by a central difference, then the Eulerian correction.
  const double tau = 1e-5;
  const double ta = std::max(ref.t_begin(), t - tau), tb = std::min(ref.t_end(), t + tau);
  const SlabGeometry geo(g, s.w, s.w_t, p.contact_floor);
  if (tb > ta) {
    PlateField wa(g.nx), wb(g.nx);
    for (int i = 0; i < g.nx; ++i) {
      wa[i] = s.w[i] + (ta - t) * s.w_t[i];
      wb[i] = s.w[i] + (tb - t) * s.w_t[i];
    }
    const VectorField Ua = detail::transformed_velocity(ref.at(ta), G, g, wa, s.w_t, p.contact_floor);
    const VectorField Ub = detail::transformed_velocity(ref.at(tb), G, g, wb, s.w_t, p.contact_floor);
    std::vector<double> dz;
    for (int a = 0; a < 2; ++a) {
      geo.gz(T.U[a].v, dz);
      for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const std::size_t n = g.at(i, j);
          T.U_t[a][n] = (Ub[a][n] - Ua[a][n]) / (tb - ta) - g.z(j) * s.w_t[i] * dz[n];
        }
    }
    // W_tt as the rate of the interpolated W_t.
    const PlateField ea = detail::resample_plate(ref.at(ta).eta_t, G, g);
    const PlateField eb = detail::resample_plate(ref.at(tb).eta_t, G, g);
    for (int i = 0; i < g.nx; ++i) T.W_tt[i] = (eb[i] - ea[i]) / (tb - ta);
  }

  // Forcing groups. Gradients of the limit fields are taken on the eta domain of the reference grid.
  const PlateField etaG = snap.eta, etatG = snap.eta_t;
  const SlabGeometry geo_eta(G, etaG, etatG, p.contact_floor);
  const VelocityGradient Gv = velocity_gradient(geo_eta, snap.v[0].v, snap.v[1].v);
  std::vector<double> pix, piz, tmp;
  geo_eta.gx(snap.pi.v, pix, tmp);
  geo_eta.gz(snap.pi.v, piz);
  auto on_state = [&](const std::vector<double>& f) {
    ScalarField a(G);
    a.v = f;
    return resample(a, g);
  };
  const ScalarField v00 = on_state(Gv.g00), v01 = on_state(Gv.g01), v10 = on_state(Gv.g10), v11 = on_state(Gv.g11);
  const ScalarField px = on_state(pix), pz = on_state(piz);
  const ScalarField vt0 = resample(snap.v[0], g), vt1 = resample(snap.v[1], g);
  const PlateField sw = plate_slope(s.w, g), se = plate_slope(eta, g);
  const PlateField swt = plate_slope(s.w_t, g), set = plate_slope(eta_t, g);
  std::vector<double> a_e(g.size()), b_e(g.size());
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double a = (1.0 + eta[i]) / (1.0 + s.w[i]);
      a_e[g.at(i, j)] = a;
      b_e[g.at(i, j)] = -g.z(j) * (se[i] - a * sw[i]);
    }
  std::vector<double> ax, az, bx, bz;
  geo.gx(a_e, ax, tmp);
  geo.gz(a_e, az);
  geo.gx(b_e, bx, tmp);
  geo.gz(b_e, bz);
  std::array<double, ForcingRecord::count + 1> acc{};
  const double rb = p.rho_bar;
  for (int j = 0; j < g.nz; ++j) {
    std::array<double, ForcingRecord::count + 1> row{};
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t n = g.at(i, j);
      const double z = g.z(j), Jw = 1.0 + s.w[i];
      const double a = a_e[n], b = b_e[n];
      auto JA = [&](double x0, double x1) { return std::array<double, 2>{a * x0, b * x0 + x1}; };
      const double w0 = vt0[n], w1 = vt1[n];
      // mesh advection: J A (dt Psi . grad) v_tilde, with dt Psi vertical
      const double dpsi = map.dt_psi(i, j)[1];
      const auto f1 = JA(dpsi * v01[n], dpsi * v11[n]);
      // dt (J A) v_tilde
      const double da = (eta_t[i] * Jw - (1.0 + eta[i]) * s.w_t[i]) / (Jw * Jw);
      const double c = se[i] - a * sw[i];
      const double db = z * s.w_t[i] * c / Jw - z * (set[i] - da * sw[i] - a * swt[i]);
      const std::array<double, 2> f2{da * w0, db * w0};
      // (U . grad)(J A) v_tilde
      const double U0 = T.U[0][n], U1 = T.U[1][n];
      const double dA = U0 * ax[n] + U1 * az[n], dB = U0 * bx[n] + U1 * bz[n];
      const std::array<double, 2> f3{dA * w0, dB * w0};
      // (J - 1) J A (v_tilde . grad v_tilde)
      const double q0 = w0 * v00[n] + w1 * v01[n], q1 = w0 * v10[n] + w1 * v11[n];
      const auto f4 = JA((a - 1.0) * q0, (a - 1.0) * q1);
      // (grad Psi - I) grad Pi_tilde
      const Mat2 F = map.gradient(i, j);
      const std::array<double, 2> f5{(F[0][0] - 1.0) * px[n] + F[0][1] * pz[n], F[1][0] * px[n] + (F[1][1] - 1.0) * pz[n]};
      const std::array<std::array<double, 2>, 5> f{
          {{rb * f1[0], rb * f1[1]}, {rb * f2[0], rb * f2[1]}, {rb * f3[0], rb * f3[1]}, {rb * f4[0], rb * f4[1]}, f5}};
      double s0 = 0.0, s1 = 0.0;
      for (int k = 0; k < ForcingRecord::count; ++k) {
        row[k] += Jw * (f[k][0] * f[k][0] + f[k][1] * f[k][1]);
        s0 += f[k][0];
        s1 += f[k][1];
      }
      row[ForcingRecord::count] += Jw * (s0 * s0 + s1 * s1);
    }
    for (int k = 0; k <= ForcingRecord::count; ++k) acc[k] += g.wz(j) * row[k];
  }
  for (int k = 0; k < ForcingRecord::count; ++k) out.forcing.l2[k] = std::sqrt(g.hx() * acc[k]);
  out.forcing.total_l2 = std::sqrt(g.hx() * acc[ForcingRecord::count]);
  PlateField dv(g.nx), dw(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    dv[i] = s.w_t[i] - eta_t[i];
    dw[i] = s.w[i] - eta[i];
  }
  const PlateModes mv = plate_fourier(dv, g), mw = plate_fourier(dw, g);
  out.forcing.plate_difference = std::sqrt(spectral_quadratic(mv, [](double k2) { return k2; })) +
                                 std::sqrt(spectral_quadratic(mv, [](double) { return 1.0; })) +
                                 std::sqrt(spectral_quadratic(mw, [](double k2) { return k2 * k2; }));
  return out;
}

}  // namespace fsi_slab
