#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "../geometry/composed.hpp"
#include "../plate/plate.hpp"
#include "../scheme/stepper.hpp"

namespace fsi_slab {

struct Assertion {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  // true: value <= limit passes; false: value >= limit passes.
  bool upper = true;
  bool pass() const { return std::isfinite(value) && (upper ? value <= limit : value >= limit); }
  double margin() const { return upper ? limit - value : value - limit; }
};

struct SuiteResult {
  std::string name;
  std::vector<Assertion> items;
  bool pass() const {
    return std::all_of(items.begin(), items.end(), [](const Assertion& a) { return a.pass(); });
  }
  void add(std::string n, double v, double lim, bool upper = true) { items.push_back({std::move(n), v, lim, upper}); }
};

inline void print_suite(std::ostream& os, const SuiteResult& r) {
  for (const Assertion& a : r.items) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %-44s value %.6e %s %.3e margin %.3e\n", a.pass() ? "PASS" : "FAIL",
                  a.name.c_str(), a.value, a.upper ? "<=" : ">=", a.limit, a.margin());
    os << buf;
  }
  os << r.name << ": " << (r.pass() ? "pass" : "FAIL") << '\n';
}

// Slope of log(error) against log(h) from the coarsest to the finest level, and the smallest
// order between consecutive levels.
struct OrderEstimate {
  double fitted = 0.0;
  double worst = 0.0;
};

inline OrderEstimate refinement_order(const std::vector<double>& err) {
  OrderEstimate o;
  o.worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < err.size(); ++k) o.worst = std::min(o.worst, std::log2(err[k - 1] / err[k]));
  const double n = static_cast<double>(err.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < err.size(); ++k) {
    const double x = -static_cast<double>(k) * std::log(2.0), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  o.fitted = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return o;
}

// Smooth random periodic profile with sup norm <= bound, and its exact derivative.
struct RandomProfile {
  std::vector<double> a, b;
  explicit RandomProfile(std::mt19937_64& rng, double bound, int modes = 3) {
    std::uniform_real_distribution<double> u(-1.0, 1.0), s(0.3, 1.0);
    double total = 0.0;
    for (int m = 0; m < modes; ++m) {
      a.push_back(u(rng));
      b.push_back(u(rng));
      total += std::abs(a.back()) + std::abs(b.back());
    }
    const double k = bound * s(rng) / total;
    for (int m = 0; m < modes; ++m) {
      a[m] *= k;
      b[m] *= k;
    }
  }
  double value(double x) const {
    double v = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) v += a[m] * std::cos((m + 1) * x) + b[m] * std::sin((m + 1) * x);
    return v;
  }
  double slope(double x) const {
    double v = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m)
      v += (m + 1) * (-a[m] * std::sin((m + 1) * x) + b[m] * std::cos((m + 1) * x));
    return v;
  }
  PlateField sample(const Grid& g) const {
    PlateField f(g.plate_size());
    for (int i = 0; i < g.nx; ++i) f[i] = value(g.x(i));
    return f;
  }
};

struct GeometryResiduals {
  double piola = 0.0;
  double divergence = 0.0;
  double normal = 0.0;
  double inverse = 0.0;
};

// Residuals of the three Piola laws for the smooth target field v = (sin(x + c) cos y, cos x sin 2y).
inline GeometryResiduals geometry_residuals(const RandomProfile& w, const RandomProfile& eta, double c, int nx) {
  const Grid g(nx, nx / 2 + 1);
  const PlateField zero(g.plate_size(), 0.0);
  const ComposedMap map(g, w.sample(g), eta.sample(g), zero, zero);
  GeometryResiduals r;
  r.piola = piola_identity_residual(map);
  VectorField vt(g);
  ScalarField div_exact(g);
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i), y = map.target().height(i, j);
      vt[0](i, j) = std::sin(x + c) * std::cos(y);
      vt[1](i, j) = std::cos(x) * std::sin(2.0 * y);
      div_exact(i, j) = std::cos(x + c) * std::cos(y) + 2.0 * std::cos(x) * std::cos(2.0 * y);
    }
  const VectorField v = piola_transform(vt, map);
  const ScalarField dv = physical_div(v, map.source());
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i)
      r.divergence = std::max(r.divergence, std::abs(dv(i, j) - map.J(i, j) * div_exact(i, j)));
  const int top = g.nz - 1;
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    const double lhs = -v[0](i, top) * w.slope(x) + v[1](i, top);
    const double rhs = -vt[0](i, top) * eta.slope(x) + vt[1](i, top);
    r.normal = std::max(r.normal, std::abs(lhs - rhs));
  }
  const DomainMap& src = map.source();
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec3 X{g.x(i), g.z(j), 0.0};
      const Vec3 back = src.inverse(i, src.at(i, j).point);
      r.inverse = std::max({r.inverse, std::abs(back[0] - X[0]), std::abs(back[1] - X[1])});
    }
  return r;
}

// Refinement orders of the Piola laws over three halvings for random smooth (w, eta) pairs.
inline SuiteResult geometry_suite(std::uint64_t seed = 1, int pairs = 10, double min_order = 1.9) {
  SuiteResult res{"geometry", {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const int levels[] = {64, 128, 256, 512};
  double worst_piola = 1e9, worst_div = 1e9, worst_normal = 1e9, inverse = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const RandomProfile w(rng, 0.3), eta(rng, 0.3);
    const double c = phase(rng);
    std::vector<double> ep, ed, en;
    for (int nx : levels) {
      const GeometryResiduals r = geometry_residuals(w, eta, c, nx);
      ep.push_back(r.piola);
      ed.push_back(r.divergence);
      en.push_back(r.normal);
      inverse = std::max(inverse, r.inverse);
    }
    worst_piola = std::min(worst_piola, refinement_order(ep).worst);
    worst_div = std::min(worst_div, refinement_order(ed).worst);
    worst_normal = std::min(worst_normal, refinement_order(en).worst);
  }
  res.add("piola identity order (worst pair, worst level)", worst_piola, min_order, false);
  res.add("divergence preservation order", worst_div, min_order, false);
  res.add("normal transformation order", worst_normal, min_order, false);
  res.add("inverse composition defect", inverse, 1e-10);
  return res;
}

// Exact-integrator checks: undamped energy drift and damped per-mode rates against the two roots.
inline SuiteResult plate_suite(std::uint64_t seed = 1) {
  SuiteResult res{"plate", {}};
  std::mt19937_64 rng(seed);
  const Grid g(64, 4);
  {
    Params p;
    p.nu_s = 0.0;
    std::uniform_int_distribution<int> mode(1, 8);
    const int m = mode(rng);
    PlateField w(g.nx), v(g.nx, 0.0);
    for (int i = 0; i < g.nx; ++i) w[i] = 0.1 * std::cos(m * g.x(i));
    const PlateLoad none{PlateField(g.nx, 0.0)};
    const double e0 = plate_energy(w, v, g);
    double drift = 0.0;
    for (int n = 0; n < 1000; ++n) {
      std::tie(w, v) = plate_step(w, v, none, 0.01, p, g);
      drift = std::max(drift, std::abs(plate_energy(w, v, g) - e0) / e0);
    }
    res.add("undamped single-mode energy drift", drift, 1e-10);
  }
  for (double nu_s : {0.5, 3.0}) {
    Params p;
    p.nu_s = nu_s;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PlateField w(g.nx, 0.0), v(g.nx, 0.0);
    for (int m = 1; m <= 6; ++m) {
      const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
      for (int i = 0; i < g.nx; ++i) {
        w[i] += (a * std::cos(m * g.x(i)) + b * std::sin(m * g.x(i))) / (m * m);
        v[i] += (c * std::cos(m * g.x(i)) + d * std::sin(m * g.x(i))) / m;
      }
    }
    const PlateModes w0 = plate_fourier(w, g), v0 = plate_fourier(v, g);
    const PlateLoad none{PlateField(g.nx, 0.0)};
    const int steps = 100;
    const double dt = 1e-3, T = steps * dt;
    for (int n = 0; n < steps; ++n) std::tie(w, v) = plate_step(w, v, none, dt, p, g);
    const PlateModes w1 = plate_fourier(w, g), v1 = plate_fourier(v, g);
    double worst = 0.0;
    for (int m = 1; m <= 6; ++m) {
      const double k2 = w0.k2(m, 0), c = nu_s * k2, K = k2 * k2;
      const std::complex<double> disc = std::sqrt(std::complex<double>(c * c - 4.0 * K, 0.0));
      const std::complex<double> r[2] = {0.5 * (-c + disc), 0.5 * (-c - disc)};
      for (int s = 0; s < 2; ++s) {
        // v - r_other y evolves exactly like exp(r_s t).
        const std::complex<double> other = r[1 - s];
        const std::size_t n = w0.at(m, 0);
        const std::complex<double> q0 = v0.c[n] - other * w0.c[n], q1 = v1.c[n] - other * w1.c[n];
        const double measured = std::log(std::abs(q1) / std::abs(q0)) / T;
        worst = std::max(worst, std::abs(measured - r[s].real()) / std::abs(r[s].real()));
      }
    }
    char name[64];
    std::snprintf(name, sizeof name, "damped rate vs two-root formula, nu_s=%.1f", nu_s);
    res.add(name, worst, 1e-8);
  }
  return res;
}

// Pressure-pulse run on a coarse grid: the energy inequality from time 0 and over every single step.
inline RunConfig energy_suite_config() {
  RunConfig c;
  c.grid = Grid(32, 17);
  c.params.eps = 0.5;
  c.params.nu = 0.05;
  c.initial.profile = "pressure_pulse";
  c.initial.amplitude = 0.05;
  c.t_final = 0.3;
  c.output_interval = 0.05;
  c.dt_factor = 0.5;
  return c;
}

inline SuiteResult energy_suite(double tol, const RunConfig& c = energy_suite_config()) {
  SuiteResult res{"energy", {}};
  const Trajectory tr = run(c);
  res.add("cumulative energy inequality violation", energy_inequality_check(tr.energy, tol).max_violation, tol);
  const double e0 = tr.energy.front().energy();
  double pe = e0, pd = 0.0, local = -std::numeric_limits<double>::infinity();
  for (const StepRecord& s : tr.steps) {
    local = std::max(local, (s.energy + s.dissipated - pe - pd) / e0);
    pe = s.energy;
    pd = s.dissipated;
  }
  res.add("per-step energy inequality violation", local, tol);
  const double m0 = tr.energy.front().mass;
  double mass = 0.0;
  for (const EnergyReport& r : tr.energy) mass = std::max(mass, std::abs(r.mass - m0) / m0);
  res.add("relative mass drift", mass, 1e-10);
  return res;
}

}  // namespace fsi_slab
