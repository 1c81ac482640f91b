#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fsi_slab/cli/suites.hpp"
#include "fsi_slab/diagnostics/bounds.hpp"
#include "fsi_slab/limits/sweep.hpp"

using namespace fsi_slab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

RunConfig pulse(int nx, Coupling mode = Coupling::strong) {
  RunConfig c;
  c.grid = Grid(nx, nx / 2 + 1);
  c.params.eps = 0.5;
  c.params.nu = 0.05;
  c.initial.profile = "pressure_pulse";
  c.initial.amplitude = 0.05;
  c.coupling.mode = mode;
  c.t_final = 0.5;
  c.output_interval = 0.1;
  c.dt_factor = 0.5;
  return c;
}

RunConfig prepared(int nx, double eps, double nu) {
  RunConfig c;
  c.grid = Grid(nx, nx / 2 + 1);
  c.params.eps = eps;
  c.params.nu = nu;
  c.params.nu_s = 0.1;
  c.initial.profile = "well_prepared";
  c.initial.velocity_amplitude = 0.2;
  c.initial.rho1_amplitude = 0.5;
  c.initial.rho1_power = 1.0;
  c.initial.mode = 1;
  c.t_final = 0.5;
  c.output_interval = 0.05;
  c.dt_factor = 0.5;
  return c;
}

double state_distance(const State& a, const State& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.rho_hat.size(); ++n)
    m = std::max({m, std::abs(a.rho_hat[n] - b.rho_hat[n]), std::abs(a.u_hat[0][n] - b.u_hat[0][n]),
                  std::abs(a.u_hat[1][n] - b.u_hat[1][n])});
  for (std::size_t i = 0; i < a.w.size(); ++i) m = std::max({m, std::abs(a.w[i] - b.w[i]), std::abs(a.w_t[i] - b.w_t[i])});
  return m;
}

Outcome suite_outcome(const SuiteResult& r) {
  Outcome o{r.pass(), ""};
  for (const Assertion& a : r.items) o.detail += fmt("%s%s=%.3g", o.detail.empty() ? "" : "; ", a.name.c_str(), a.value);
  return o;
}

Outcome geometry() { return suite_outcome(geometry_suite(1)); }

Outcome plate() { return suite_outcome(plate_suite(1)); }

Outcome equilibrium() {
  double worst = 0.0;
  for (Coupling mode : {Coupling::strong, Coupling::penalty, Coupling::monolithic}) {
    RunConfig c;
    c.grid = Grid(32, 17);
    c.coupling.mode = mode;
    const State rest(c.grid, 1.0);
    State s = rest;
    const double dt = stable_dt(rest, c.grid, c.effective_params()) * 0.5;
    for (int n = 0; n < 1000; ++n) s = split_step(s, dt, c);
    worst = std::max(worst, state_distance(s, rest));
  }
  return {worst <= 1e-14, fmt("max deviation from rest after 1000 steps, all modes = %.3g", worst)};
}

Outcome mass() {
  const RunConfig c = pulse(64);
  const Trajectory tr = run(c);
  const double m0 = tr.energy.front().mass;
  double rate = 0.0;
  for (const StepRecord& s : tr.steps)
    if (s.t > 0.0) rate = std::max(rate, std::abs(s.mass - m0) / m0 / s.t);
  return {rate < 1e-10, fmt("relative mass drift per unit time = %.3g", rate)};
}

Outcome energy() {
  Outcome o{true, ""};
  for (Coupling mode : {Coupling::strong, Coupling::penalty, Coupling::monolithic}) {
    const Trajectory tr = run(pulse(32, mode));
    const EnergyCheck chk = energy_inequality_check(tr.energy, 1e-3);
    const double pen = tr.energy.back().dissipated.penalty;
    o.pass = o.pass && chk.max_violation < 1e-3;
    o.detail += fmt("%s%s violation=%.3g", o.detail.empty() ? "" : "; ", to_string(mode), chk.max_violation);
    if (mode == Coupling::penalty) {
      o.pass = o.pass && pen > 0.0;
      o.detail += fmt(" (penalty dissipation %.3g)", pen);
    }
  }
  return o;
}

Outcome penalty_rate() {
  std::vector<double> ks, ms;
  for (double k : {1e-1, 1e-2, 1e-3, 1e-4}) {
    RunConfig c = pulse(32, Coupling::penalty);
    c.coupling.kappa = k;
    const Trajectory tr = run(c);
    double I = 0.0;
    for (const StepRecord& s : tr.steps) I += s.dt * s.mismatch;
    ks.push_back(k);
    ms.push_back(I);
  }
  const double slope = fit_log_log(ks, ms).slope;
  return {std::abs(slope - 0.5) <= 0.15,
          fmt("slope = %.3f (target 0.5 +- 0.15); integrated mismatch %.3g .. %.3g", slope, ms.front(), ms.back())};
}

Outcome artificial_pressure() {
  std::vector<State> last;
  for (double d : {1e-2, 1e-3, 1e-4}) {
    RunConfig c = pulse(32);
    c.params.delta = d;
    c.keep_states = true;
    last.push_back(run(c).states.back());
  }
  const double d1 = state_distance(last[0], last[1]), d2 = state_distance(last[1], last[2]);
  const double order = std::log10(d1 / d2);
  return {d2 < d1 && order >= 0.8, fmt("successive differences %.3g, %.3g; order = %.3f", d1, d2, order)};
}

Outcome relative_energy_inequality() {
  const double tol = 5e-3;
  Outcome o{true, ""};
  {
    // Pulse trajectory: rest triple against the energy inequality, and the random library.
    RunConfig c = pulse(64);
    c.initial.amplitude = 0.1 * c.params.eps;
    c.t_final = 1.0;
    const Params p = c.effective_params();
    std::vector<RelativeEnergyMonitor> mons;
    mons.emplace_back([&](const State& s) { return rest_triple(s.grid(), p); }, p);
    for (int k = 0; k < 10; ++k) mons.emplace_back(RandomTriple(1000 + k, p), p);
    const State s0 = make_initial_state(c.initial, c.grid, p);
    for (auto& m : mons) m.begin(s0);
    const Trajectory tr = run(c, s0, [&](const State& s, const StepInfo& i, const DissipationRates& d) {
      for (auto& m : mons) m(s, i, d);
    });
    const double e0 = tr.energy.front().energy();
    double viol = -std::numeric_limits<double>::infinity();
    for (const StepRecord& st : tr.steps) viol = std::max(viol, (st.energy + st.dissipated - e0) / e0);
    const double coincidence = std::abs(viol + mons[0].min_slack());
    double random_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < mons.size(); ++k) random_min = std::min(random_min, mons[k].min_slack());
    o.pass = coincidence <= 1e-12 && random_min >= -tol;
    o.detail = fmt("pulse: rest-triple vs energy inequality %.2g, random min slack %.3g", coincidence, random_min);
  }
  {
    // Well-prepared trajectory against the transformed proxy reference and the random library.
    const RunConfig c = prepared(32, 0.1, 0.1);
    RunConfig rc = c;
    rc.grid = Grid(64, 33);
    const ReferenceSolution ref = reference_proxy(rc, 0.00625, 0.00625);
    const Params p = c.effective_params();
    std::vector<RelativeEnergyMonitor> mons;
    mons.emplace_back([&](const State& s) { return transform_reference(ref, s, p).triple; }, p);
    for (int k = 0; k < 10; ++k) mons.emplace_back(RandomTriple(1000 + k, p), p);
    const State s0 = make_initial_state(c.initial, c.grid, p);
    for (auto& m : mons) m.begin(s0);
    run(c, s0, [&](const State& s, const StepInfo& i, const DissipationRates& d) {
      for (auto& m : mons) m(s, i, d);
    });
    double random_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < mons.size(); ++k) random_min = std::min(random_min, mons[k].min_slack());
    const double reference_slack = mons[0].min_slack();
    o.pass = o.pass && reference_slack >= -tol && random_min >= -tol;
    o.detail += fmt("; well-prepared: transformed reference min slack %.3g, random min slack %.3g", reference_slack,
                    random_min);
  }
  return o;
}

Outcome uniform_bounds() {
  std::vector<double> res, ess;
  for (double e : {0.2, 0.1, 0.05, 0.025}) {
    RunConfig c;
    c.grid = Grid(128, 65);
    c.params.eps = e;
    c.params.nu = 0.05;
    c.initial.profile = "cavity";
    c.t_final = 0.1;
    c.output_interval = 0.01;
    c.dt_factor = 0.5;
    const Params p = c.effective_params();
    UniformBoundsAccumulator acc(p);
    const State s0 = make_initial_state(c.initial, c.grid, p);
    acc.add(s0);
    run(c, s0, [&](const State& s, const StepInfo& i, const DissipationRates& d) { acc(s, i, d); });
    const UniformBounds b = acc.report();
    res.push_back(b.res_mass_over_eps2);
    ess.push_back(b.ess_fluctuation);
  }
  auto spread = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
  };
  const double sr = spread(res), se = spread(ess);
  return {sr <= 3.0 && se <= 3.0,
          fmt("res-part sup / eps^2 = %.3g %.3g %.3g %.3g (max/min %.3g); ess sup = %.3g %.3g %.3g %.3g (max/min %.3g)",
              res[0], res[1], res[2], res[3], sr, ess[0], ess[1], ess[2], ess[3], se)};
}

SweepTable limit_sweep(const RunConfig& base, const ReferenceSolution& ref, const std::vector<double>& eps,
                       const std::vector<double>& nu) {
  SweepTable t;
  for (std::size_t k = 0; k < eps.size(); ++k) t.rows.push_back(sweep_row(base, ref, eps[k], nu[k]));
  const SweepRow f = sweep_row(base, ref, ref.params.eps, ref.params.nu);
  t.floor = f.ok() ? f.sup_rel_energy : 0.0;
  return t;
}

Outcome singular_limit() {
  const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  RunConfig base = prepared(128, 0.1, 0.1);
  const ReferenceSolution ref = reference_proxy(base, 0.00625, 0.00625);
  base.grid = Grid(64, 33);
  const SweepTable t = limit_sweep(base, ref, eps, eps);
  std::vector<double> x, y;
  bool all_ok = true;
  for (const SweepRow& r : t.rows) {
    all_ok = all_ok && r.ok();
    x.push_back(r.eps + r.nu);
    y.push_back(r.sup_rel_energy - t.floor);
  }
  const double slope = fit_log_log(x, y).slope;
  const bool mono = diagonal_monotone(t, 0.1);
  std::string sups;
  for (const SweepRow& r : t.rows) sups += fmt("%.3g ", r.sup_rel_energy);
  return {all_ok && mono && slope >= 0.8,
          fmt("sup E = %sfloor %.3g; monotone %s; slope = %.3f", sups.c_str(), t.floor, mono ? "yes" : "no", slope)};
}

Outcome incompressible_column() {
  const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  RunConfig base = prepared(64, 0.1, 0.05);
  base.params.gamma = 3.5;
  const ReferenceSolution ref = reference_proxy(base, 0.00625, 0.05);
  base.grid = Grid(32, 17);
  const SweepTable t = limit_sweep(base, ref, eps, std::vector<double>(eps.size(), 0.05));
  bool ok = monotone_in_eps(t, 0.05, 0.0);
  double prev_gap = std::numeric_limits<double>::infinity();
  std::string sups;
  for (const SweepRow& r : t.rows) {
    const double gap = r.sup_rel_energy - t.floor;
    ok = ok && r.ok() && gap > 0.0 && gap < prev_gap;
    prev_gap = gap;
    sups += fmt("%.3g ", r.sup_rel_energy);
  }
  return {ok, fmt("sup E = %sfloor %.3g", sups.c_str(), t.floor)};
}

Outcome boundary_layer() {
  RunConfig c = pulse(32);
  c.keep_states = true;
  const Trajectory tr = run(c);
  const Params p = c.effective_params();
  std::vector<double> sig;
  for (double s = 2.0 * c.grid.hz(); s <= 0.5 + 1e-12; s += c.grid.hz()) sig.push_back(s);
  double m = 0.0;
  for (const State& s : tr.states) m = std::max(m, boundary_layer_pressure(s, p, sig).max_ratio);
  return {m <= 3.0, fmt("max (layer integral / sigma) / bulk = %.4f", m)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"geometry identities", geometry},
      {"plate oracle", plate},
      {"equilibrium exactness", equilibrium},
      {"mass conservation", mass},
      {"discrete energy inequality", energy},
      {"penalty rate", penalty_rate},
      {"artificial-pressure limit", artificial_pressure},
      {"relative-energy inequality", relative_energy_inequality},
      {"uniform bounds", uniform_bounds},
      {"singular-limit rate", singular_limit},
      {"incompressible-limit column", incompressible_column},
      {"equi-integrability monitor", boundary_layer},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
