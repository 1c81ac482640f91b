#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "../diagnostics/energy.hpp"
#include "config.hpp"

namespace fsi_slab {

struct StepInfo {
  double dt = 0.0;
  int iterations = 1;
  double mismatch = 0.0;
  // (1/kappa) sum hx (u . n^w - w_t)^2 after the penalty relaxation.
  double penalty_rate = 0.0;
};

namespace detail {

struct FluidAdvance {
  std::vector<double> rho, u0, u1;
  double penalty_rate = 0.0;
};

inline void check_density(const std::vector<double>& rho, double t) {
  for (double r : rho) {
    if (!std::isfinite(r)) throw Error(ErrorKind::blow_up, "non-finite density", t);
    if (r <= 0.0) {
      std::ostringstream os;
      os << "density reached " << r << " at t = " << t;
      throw Error(ErrorKind::positivity, os.str(), t);
    }
  }
}

inline void check_velocity(const std::vector<double>& u, double t) {
  for (double v : u)
    if (!std::isfinite(v)) throw Error(ErrorKind::blow_up, "non-finite velocity", t);
}

// Heun step of the fluid on the frozen geometry of the new plate position.
inline FluidAdvance fluid_substep(const SlabGeometry& geo, const PlateField& w_old, const State& s, double dt,
                                  const Params& p) {
  const Grid& g = geo.grid();
  const std::size_t N = g.size();
  const double t1 = s.t + dt;
  std::vector<double> q0(N), q1(N), u0(s.u_hat[0].v), u1(s.u_hat[1].v), r1(N);
  for (std::size_t n = 0; n < N; ++n) q0[n] = (1.0 + w_old[n % g.nx]) * s.rho_hat[n];
  auto walls = [&](std::vector<double>& a, std::vector<double>& b) {
    enforce_bottom(g, b);
    if (p.strong()) enforce_kinematic(geo, a, b);
  };
  FluidTendency t;
  fluid_tendency(geo, s.rho_hat.v, s.u_hat[0].v, s.u_hat[1].v, p, t);
  std::vector<double> a0(N), a1(N);
  for (std::size_t n = 0; n < N; ++n) {
    q1[n] = q0[n] + dt * t.dq[n];
    a0[n] = u0[n] + dt * t.du0[n];
    a1[n] = u1[n] + dt * t.du1[n];
    r1[n] = q1[n] / geo.J(static_cast<int>(n % g.nx));
  }
  walls(a0, a1);
  check_density(r1, t1);
  fluid_tendency(geo, r1, a0, a1, p, t);
  FluidAdvance out;
  out.rho.resize(N);
  out.u0.resize(N);
  out.u1.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double q = 0.5 * (q0[n] + q1[n] + dt * t.dq[n]);
    out.rho[n] = q / geo.J(static_cast<int>(n % g.nx));
    out.u0[n] = 0.5 * (u0[n] + a0[n] + dt * t.du0[n]);
    out.u1[n] = 0.5 * (u1[n] + a1[n] + dt * t.du1[n]);
  }
  walls(out.u0, out.u1);
  check_density(out.rho, t1);
  check_velocity(out.u0, t1);
  check_velocity(out.u1, t1);
  if (!p.strong()) out.penalty_rate = penalty_relax(geo, out.rho, out.u0, out.u1, p, dt);
  return out;
}

inline PlateField top_normal_velocity(const State& s, const PlateField& slope) {
  const Grid& g = s.grid();
  PlateField v(g.nx);
  for (int i = 0; i < g.nx; ++i) v[i] = -slope[i] * s.u_hat[0](i, g.nz - 1) + s.u_hat[1](i, g.nz - 1);
  return v;
}

inline State assemble(const State& s, double dt, const std::pair<PlateField, PlateField>& plate, FluidAdvance&& f) {
  State out = s;
  out.t = s.t + dt;
  out.w = plate.first;
  out.w_t = plate.second;
  out.rho_hat.v = std::move(f.rho);
  out.u_hat[0].v = std::move(f.u0);
  out.u_hat[1].v = std::move(f.u1);
  return out;
}

}  // namespace detail

// One Lie step: plate with the load of the current fluid state, then the fluid on the updated domain.
inline State split_step(const State& s, double dt, const RunConfig& c, StepInfo* info = nullptr) {
  require(dt > 0.0, ErrorKind::parameter, "dt must be positive");
  const Params p = c.effective_params();
  const Grid& g = s.grid();
  const SlabGeometry geo_n(g, s.w, s.w_t, p.contact_floor);
  PlateLoad load{top_normal_traction(geo_n, s.rho_hat, s.u_hat, p)};
  if (c.predict_load) {
    // Advance the pressure part of the load to the middle of the step with the continuity rate.
    const PlateField rate = top_density_rate(geo_n, s.rho_hat.v, s.u_hat[0].v, s.u_hat[1].v);
    const double e2 = 1.0 / (p.eps * p.eps);
    for (int i = 0; i < g.nx; ++i)
      load.F[i] += 0.5 * dt * e2 * pressure_delta_slope(s.rho_hat(i, g.nz - 1), p) * rate[i];
  }
  auto plate_of = [&](const PlateLoad& L) {
    if (p.strong()) return plate_step(s.w, s.w_t, L, dt, p, g);
    const PlateField target = detail::top_normal_velocity(s, geo_n.slope());
    return plate_step(s.w, s.w_t, L, dt, p, g, &target);
  };
  auto geometry_of = [&](const std::pair<PlateField, PlateField>& pl) {
    PlateField rate(g.nx);
    for (int i = 0; i < g.nx; ++i) rate[i] = (pl.first[i] - s.w[i]) / dt;
    try {
      return SlabGeometry(g, pl.first, rate, pl.second, p.contact_floor);
    } catch (const Error& e) {
      throw Error(e.kind(), e.message(), s.t + dt);
    }
  };
  StepInfo local;
  local.dt = dt;
  if (c.coupling.mode != Coupling::monolithic) {
    const auto plate = plate_of(load);
    const SlabGeometry geo = geometry_of(plate);
    detail::FluidAdvance f = detail::fluid_substep(geo, s.w, s, dt, p);
    local.penalty_rate = f.penalty_rate;
    State out = detail::assemble(s, dt, plate, std::move(f));
    local.mismatch = kinematic_mismatch(out);
    if (info) *info = local;
    return out;
  }
  // Dirichlet-Neumann fixed point on the plate load with under-relaxation.
  const double om = c.coupling.relaxation;
  std::pair<PlateField, PlateField> plate_prev;
  detail::FluidAdvance fluid_prev;
  PlateField normal_prev;
  double mismatch = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= c.coupling.max_iter; ++k) {
    auto plate = plate_of(load);
    if (k > 0) {
      double m = 0.0;
      for (int i = 0; i < g.nx; ++i) {
        const double d = normal_prev[i] - plate.second[i];
        m += g.hx() * d * d;
      }
      mismatch = std::sqrt(m);
      if (mismatch < c.coupling.tol) {
        local.iterations = k;
        local.mismatch = mismatch;
        State out = detail::assemble(s, dt, plate_prev, std::move(fluid_prev));
        if (info) *info = local;
        return out;
      }
    }
    if (k == c.coupling.max_iter) break;
    const SlabGeometry geo = geometry_of(plate);
    detail::FluidAdvance f = detail::fluid_substep(geo, s.w, s, dt, p);
    ScalarField rho(g);
    rho.v = f.rho;
    VectorField u(g);
    u[0].v = f.u0;
    u[1].v = f.u1;
    const PlateField fresh = top_normal_traction(geo, rho, u, p);
    for (int i = 0; i < g.nx; ++i) load.F[i] = om * fresh[i] + (1.0 - om) * load.F[i];
    normal_prev.assign(g.nx, 0.0);
    for (int i = 0; i < g.nx; ++i) normal_prev[i] = -geo.slope()[i] * f.u0[g.at(i, g.nz - 1)] + f.u1[g.at(i, g.nz - 1)];
    plate_prev = std::move(plate);
    fluid_prev = std::move(f);
  }
  std::ostringstream os;
  os << "coupling iteration did not converge; last mismatch " << mismatch;
  throw Error(ErrorKind::iteration, os.str(), s.t + dt);
}

struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  double energy = 0.0;
  double dissipated = 0.0;
  double mass = 0.0;
  double mismatch = 0.0;
  int iterations = 1;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<EnergyReport> energy;
  std::vector<StepRecord> steps;
};

// Called after every committed step with the new state, the step data and the cumulative dissipations.
using StepObserver = std::function<void(const State&, const StepInfo&, const DissipationRates&)>;

inline Trajectory run(const RunConfig& c, const State& initial, const StepObserver& observer = {}) {
  c.validate();
  const Params p = c.effective_params();
  const auto start = std::chrono::steady_clock::now();
  State s = initial;
  require(s.grid() == c.grid, ErrorKind::structural, "initial state grid differs from the configured grid");
  detail::check_density(s.rho_hat.v, s.t);
  SlabGeometry geo = state_geometry(s, p);
  Trajectory tr;
  DissipationRates D;
  DissipationRates prev = dissipation_rates(s, geo, p);
  auto record_output = [&]() {
    tr.times.push_back(s.t);
    tr.energy.push_back(energy_report(s, p, D));
    if (c.keep_states) tr.states.push_back(s);
  };
  record_output();
  const double e0 = tr.energy.front().energy();
  const double t0 = s.t;
  const double t_end = t0 + c.t_final;
  int out_index = 1;
  while (s.t < t_end) {
    const double target = std::min(t0 + out_index * c.output_interval, t_end);
    const double remaining = target - s.t;
    double dt = c.fixed_dt > 0.0 ? c.fixed_dt : c.dt_factor * stable_dt(s, c.grid, p, c.cfl);
    const double nsteps = std::ceil(remaining / dt * (1.0 - 1e-12));
    dt = remaining / std::max(1.0, nsteps);
    StepInfo info;
    State next = split_step(s, dt, c, &info);
    const bool lands = nsteps <= 1.0;
    if (lands) next.t = target;
    s = std::move(next);
    geo = state_geometry(s, p);
    const DissipationRates now = dissipation_rates(s, geo, p);
    D.viscous += 0.5 * dt * (prev.viscous + now.viscous);
    D.top_slip += 0.5 * dt * (prev.top_slip + now.top_slip);
    D.bottom_slip += 0.5 * dt * (prev.bottom_slip + now.bottom_slip);
    D.plate += 0.5 * dt * (prev.plate + now.plate);
    D.penalty += dt * info.penalty_rate;
    prev = now;
    const EnergyReport er = energy_report(s, p, D);
    tr.steps.push_back({s.t, dt, er.energy(), D.total(), er.mass, er.mismatch, info.iterations});
    if (observer) observer(s, info, D);
    if (c.strict && e0 > 0.0 && (er.energy() + D.total() - e0) / e0 > c.tol_energy) {
      std::ostringstream os;
      os << "energy inequality violated by " << (er.energy() + D.total() - e0) / e0 << " at t = " << s.t;
      throw Error(ErrorKind::energy, os.str(), s.t);
    }
    if (lands) {
      record_output();
      ++out_index;
    }
    if (c.time_budget > 0.0) {
      const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (el > c.time_budget) throw Error(ErrorKind::timeout, "wall-clock budget exceeded", s.t);
    }
  }
  return tr;
}

inline Trajectory run(const RunConfig& c, const StepObserver& observer = {}) {
  c.validate();
  return run(c, make_initial_state(c.initial, c.grid, c.effective_params()), observer);
}

}  // namespace fsi_slab
