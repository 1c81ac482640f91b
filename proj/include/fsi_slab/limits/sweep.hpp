#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "reference.hpp"

namespace fsi_slab {

struct SweepRow {
  double eps = 0.0;
  double nu = 0.0;
  double sup_rel_energy = 0.0;
  double terminal_rel_energy = 0.0;
  double initial_rel_energy = 0.0;
  std::string status = "ok";
  std::string message;
  double energy_violation = 0.0;
  // max_t of the W^{1,p} quadrature norm of grad w for p = 4 and p = 2 gamma / (gamma - 1).
  double surrogate_p4 = 0.0;
  double surrogate_pg = 0.0;
  double max_forcing = 0.0;
  bool ok() const { return status == "ok"; }
};

struct SweepTable {
  std::vector<SweepRow> rows;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  int fitted_points = 0;
  double floor = 0.0;
  double surrogate_p4_max = 0.0;
  double surrogate_pg_max = 0.0;
};

struct SweepSpec {
  std::vector<double> eps_list;
  std::vector<double> nu_list;
  int workers = 1;
  // Negative: measure the floor with a run at the reference parameters on the sweep grid.
  double floor = -1.0;
  bool check_reference_scale = true;
};

namespace detail {

// (sum hx (|g|^p + |g'|^p))^(1/p) with g = w'.
inline double slope_norm(const PlateField& w, const Grid& g, double pw) {
  const PlateField s = plate_slope(w, g), c = plate_slope(s, g);
  double a = 0.0;
  for (int i = 0; i < g.nx; ++i) a += std::pow(std::abs(s[i]), pw) + std::pow(std::abs(c[i]), pw);
  return std::pow(g.hx() * a, 1.0 / pw);
}

inline double reference_spacing(const ReferenceSolution& ref) {
  require(ref.snapshots.size() >= 2, ErrorKind::parameter, "reference needs at least two snapshots");
  return ref.snapshots[1].t - ref.snapshots[0].t;
}

}  // namespace detail

// One (eps, nu) run compared with the transformed reference at every reference time.
inline SweepRow sweep_row(const RunConfig& base, const ReferenceSolution& ref, double eps, double nu) {
  SweepRow row;
  row.eps = eps;
  row.nu = nu;
  try {
    RunConfig c = base;
    c.params.eps = eps;
    c.params.nu = nu;
    c.keep_states = true;
    c.output_interval = detail::reference_spacing(ref);
    c.t_final = std::min(base.t_final, ref.t_end() - ref.t_begin());
    const Params p = c.effective_params();
    const Trajectory tr = run(c);
    row.energy_violation = energy_inequality_check(tr.energy, 0.0).max_violation;
    const double pg = 2.0 * p.gamma / (p.gamma - 1.0);
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
      const State& s = tr.states[k];
      const TransformedReference X = transform_reference(ref, s, p);
      const double e = relative_energy(s, X.triple, p);
      if (k == 0) row.initial_rel_energy = e;
      row.terminal_rel_energy = e;
      row.sup_rel_energy = std::max(row.sup_rel_energy, e);
      row.max_forcing = std::max(row.max_forcing, X.forcing.total_l2);
      row.surrogate_p4 = std::max(row.surrogate_p4, detail::slope_norm(s.w, s.grid(), 4.0));
      row.surrogate_pg = std::max(row.surrogate_pg, detail::slope_norm(s.w, s.grid(), pg));
    }
  } catch (const Error& e) {
    row.status = "failed";
    row.message = e.what();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.sup_rel_energy = row.terminal_rel_energy = row.initial_rel_energy = nan;
  }
  return row;
}

// Least-squares line through (log x, log y).
struct LogFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  int points = 0;
};

inline LogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y) {
  LogFit f;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] > 0.0 && y[k] > 0.0) {
      lx.push_back(std::log(x[k]));
      ly.push_back(std::log(y[k]));
    }
  f.points = static_cast<int>(lx.size());
  if (f.points < 2) return f;
  const double n = f.points;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < f.points; ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double r = 0.0;
  for (int k = 0; k < f.points; ++k) {
    const double d = ly[k] - f.intercept - f.slope * lx[k];
    r += d * d;
  }
  f.residual = std::sqrt(r / n);
  return f;
}

// Runs every (eps, nu) of the product grid, concurrently up to spec.workers, rows in input order.
inline SweepTable sweep(const SweepSpec& spec, const RunConfig& base, const ReferenceSolution& ref) {
  require(base.params.nu_s > 0.0, ErrorKind::parameter, "the limit sweep needs nu_s > 0");
  require(!spec.eps_list.empty() && !spec.nu_list.empty(), ErrorKind::parameter, "empty sweep lists");
  const bool self_comparison = spec.eps_list.size() == 1 && spec.nu_list.size() == 1 &&
                               spec.eps_list[0] == ref.params.eps && spec.nu_list[0] == ref.params.nu;
  if (spec.check_reference_scale && ref.provider == "proxy-run" && !self_comparison) {
    const double emin = *std::min_element(spec.eps_list.begin(), spec.eps_list.end());
    const double nmin = *std::min_element(spec.nu_list.begin(), spec.nu_list.end());
    require(ref.params.eps <= emin / 4.0 * (1.0 + 1e-12) && ref.params.nu <= nmin / 4.0 * (1.0 + 1e-12),
            ErrorKind::parameter, "proxy parameters must be at most a quarter of the smallest sweep values");
  }
  std::vector<std::pair<double, double>> points;
  for (double e : spec.eps_list)
    for (double n : spec.nu_list) points.emplace_back(e, n);
  SweepTable table;
  table.rows.resize(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < points.size(); k = next++)
      table.rows[k] = sweep_row(base, ref, points[k].first, points[k].second);
  };
  const int nw = std::max(1, std::min<int>(spec.workers, static_cast<int>(points.size())));
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (spec.floor >= 0.0) {
    table.floor = spec.floor;
  } else {
    const SweepRow f = sweep_row(base, ref, ref.params.eps, ref.params.nu);
    table.floor = f.ok() ? f.sup_rel_energy : 0.0;
  }
  for (const SweepRow& r : table.rows) {
    table.surrogate_p4_max = std::max(table.surrogate_p4_max, r.surrogate_p4);
    table.surrogate_pg_max = std::max(table.surrogate_pg_max, r.surrogate_pg);
  }
  // Diagonal eps = nu, largest eps dropped when its run broke the energy tolerance.
  std::vector<const SweepRow*> diag;
  for (const SweepRow& r : table.rows)
    if (r.ok() && std::abs(r.eps - r.nu) <= 1e-12 * std::max(r.eps, r.nu)) diag.push_back(&r);
  std::sort(diag.begin(), diag.end(), [](const SweepRow* a, const SweepRow* b) { return a->eps < b->eps; });
  if (diag.size() > 2 && diag.back()->energy_violation > base.tol_energy) diag.pop_back();
  std::vector<double> x, y;
  for (const SweepRow* r : diag) {
    x.push_back(r->eps + r->nu);
    y.push_back(r->sup_rel_energy - table.floor);
  }
  const LogFit f = fit_log_log(x, y);
  table.slope = f.slope;
  table.intercept = f.intercept;
  table.residual = f.residual;
  table.fitted_points = f.points;
  return table;
}

// sup_t max_x |eta_a - eta_b| for proxies at (eps0, nu0) and (eps0 / 2, nu0 / 2).
inline double proxy_self_consistency(const RunConfig& config, double eps0, double nu0) {
  const ReferenceSolution a = reference_proxy(config, eps0, nu0);
  const ReferenceSolution b = reference_proxy(config, 0.5 * eps0, 0.5 * nu0);
  double d = 0.0;
  for (const ReferenceSnapshot& s : a.snapshots) {
    const ReferenceSnapshot o = b.at(s.t);
    for (std::size_t i = 0; i < s.eta.size(); ++i) d = std::max(d, std::abs(s.eta[i] - o.eta[i]));
  }
  return d;
}

// Rows with the given nu ordered by decreasing eps; each sup may exceed its predecessor by at most tol.
inline bool monotone_in_eps(const SweepTable& t, double nu, double tol) {
  std::vector<const SweepRow*> col;
  for (const SweepRow& r : t.rows)
    if (r.ok() && std::abs(r.nu - nu) <= 1e-12 * nu) col.push_back(&r);
  std::sort(col.begin(), col.end(), [](const SweepRow* a, const SweepRow* b) { return a->eps > b->eps; });
  for (std::size_t k = 1; k < col.size(); ++k)
    if (col[k]->sup_rel_energy > (1.0 + tol) * col[k - 1]->sup_rel_energy) return false;
  return col.size() >= 2;
}

// Same along the diagonal eps = nu.
inline bool diagonal_monotone(const SweepTable& t, double tol) {
  std::vector<const SweepRow*> d;
  for (const SweepRow& r : t.rows)
    if (r.ok() && std::abs(r.eps - r.nu) <= 1e-12 * r.eps) d.push_back(&r);
  std::sort(d.begin(), d.end(), [](const SweepRow* a, const SweepRow* b) { return a->eps > b->eps; });
  for (std::size_t k = 1; k < d.size(); ++k)
    if (d[k]->sup_rel_energy > (1.0 + tol) * d[k - 1]->sup_rel_energy) return false;
  return d.size() >= 2;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string sweep_csv(const SweepTable& t) {
  std::ostringstream os;
  os << "eps,nu,sup_rel_energy,terminal_rel_energy,initial_rel_energy,status\n";
  for (const SweepRow& r : t.rows)
    os << format_number(r.eps) << ',' << format_number(r.nu) << ',' << format_number(r.sup_rel_energy) << ','
       << format_number(r.terminal_rel_energy) << ',' << format_number(r.initial_rel_energy) << ','
       << (r.ok() ? "ok" : "failed") << '\n';
  return os.str();
}

}  // namespace fsi_slab
