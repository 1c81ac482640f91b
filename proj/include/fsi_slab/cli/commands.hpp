#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "output.hpp"
#include "suites.hpp"

namespace fsi_slab {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failed = 1;
inline constexpr int degeneracy = 2;
inline constexpr int positivity = 3;
inline constexpr int blow_up = 4;
inline constexpr int timeout = 5;
inline constexpr int config = 64;
}  // namespace exit_code

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::degeneracy: return exit_code::degeneracy;
    case ErrorKind::positivity: return exit_code::positivity;
    case ErrorKind::blow_up: return exit_code::blow_up;
    case ErrorKind::timeout: return exit_code::timeout;
    case ErrorKind::config:
    case ErrorKind::parameter: return exit_code::config;
    default: return exit_code::failed;
  }
}

struct CommandFlags {
  std::optional<std::string> out;
  std::optional<int> workers;
  bool strict = false;
  std::uint64_t seed = 1;
  // Energy-suite tolerance for `check energy`.
  double tol = 1e-3;
};

// FSI_SLAB_OUT beats --out, which beats outputs.dir.
inline std::filesystem::path resolve_out_dir(const CommandFlags& f, const ConfigDocument& d) {
  if (const char* env = std::getenv("FSI_SLAB_OUT"); env && *env) return env;
  if (f.out) return *f.out;
  return d.outputs.dir;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw Error(ErrorKind::config, p.string() + ": cannot write");
  return os;
}

inline int report_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what();
  if (e.time() >= 0.0 && e.message().find("t = ") == std::string::npos)
    err << " (t = " << format_number(e.time()) << ")";
  err << '\n';
  return exit_code_for(e.kind());
}

inline ConfigDocument effective(ConfigDocument d, const CommandFlags& f, const std::filesystem::path& dir) {
  d.run.strict = d.run.strict || f.strict;
  if (f.workers) d.sweep.workers = *f.workers;
  d.outputs.dir = dir.string();
  return d;
}

inline void write_echo(const ConfigDocument& d, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto os = open_output(dir / d.outputs.effective_config);
  os << config_to_json(d).dump(2) << '\n';
}

}  // namespace detail

inline int cmd_run(const ConfigDocument& input, const CommandFlags& flags, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  try {
    const std::filesystem::path dir = resolve_out_dir(flags, input);
    const ConfigDocument d = detail::effective(input, flags, dir);
    detail::write_echo(d, dir);
    RunConfig c = d.run;
    const Params p = c.effective_params();
    c.keep_states = c.keep_states || d.outputs.field_dumps || !d.outputs.remainder_csv.empty();
    auto run_os = detail::open_output(dir / d.outputs.run_csv);
    run_os << run_csv_header << '\n';
    const StepObserver stream = [&](const State& s, const StepInfo& info, const DissipationRates& D) {
      const EnergyReport e = energy_report(s, p, D);
      write_run_row(run_os, {s.t, info.dt, e.energy(), D.total(), e.mass, e.mismatch, info.iterations});
    };
    Trajectory tr;
    try {
      tr = run(c, stream);
    } catch (const Error&) {
      run_os.flush();
      throw;
    }
    {
      auto os = detail::open_output(dir / d.outputs.energy_csv);
      write_energy_csv(os, tr.energy);
    }
    if (!d.outputs.remainder_csv.empty()) {
      auto os = detail::open_output(dir / d.outputs.remainder_csv);
      write_remainder_csv(os, tr.states, p, [&](const State& s) { return rest_triple(s.grid(), p); });
    }
    if (d.outputs.field_dumps) {
      std::filesystem::create_directories(dir / "fields");
      char name[32];
      for (std::size_t k = 0; k < tr.states.size(); ++k) {
        std::snprintf(name, sizeof name, "snap_%05zu", k);
        write_field_dump(dir / "fields" / name, tr.states[k]);
      }
    }
    const EnergyCheck ec = energy_inequality_check(tr.energy, c.tol_energy);
    out << "run: " << tr.steps.size() << " steps to t = " << format_number(tr.times.back())
        << ", max energy violation " << format_number(ec.max_violation) << '\n';
    if (!ec.pass) err << "warning: energy inequality violated beyond tol_energy\n";
    return exit_code::ok;
  } catch (const Error& e) {
    return detail::report_error(e, err);
  }
}

inline ReferenceSolution build_reference(const ConfigDocument& d) {
  const ReferenceSpec& r = d.sweep.reference;
  if (r.provider == "manufactured") {
    std::vector<double> times;
    const int n = static_cast<int>(std::ceil(d.run.t_final / r.output_interval - 1e-9));
    for (int k = 0; k <= n; ++k) times.push_back(std::min(k * r.output_interval, d.run.t_final));
    Params p = d.run.effective_params();
    p.eps = r.eps0;
    p.nu = r.nu0;
    return manufactured_rest_reference(d.run.grid, p, times);
  }
  RunConfig c = d.run;
  c.grid = Grid(r.nx, r.nz, d.run.grid.lx);
  c.output_interval = r.output_interval;
  return reference_proxy(c, r.eps0, r.nu0);
}

inline int cmd_sweep(const ConfigDocument& input, const CommandFlags& flags, std::ostream& out = std::cout,
                     std::ostream& err = std::cerr) {
  try {
    const std::filesystem::path dir = resolve_out_dir(flags, input);
    const ConfigDocument d = detail::effective(input, flags, dir);
    detail::write_echo(d, dir);
    const ReferenceSolution ref = build_reference(d);
    SweepSpec spec;
    spec.eps_list = d.sweep.eps_list;
    spec.nu_list = d.sweep.nu_list;
    spec.workers = d.sweep.workers;
    spec.floor = d.sweep.floor;
    const SweepTable t = sweep(spec, d.run, ref);
    {
      auto os = detail::open_output(dir / d.outputs.sweep_csv);
      os << sweep_csv(t);
    }
    {
      auto os = detail::open_output(dir / d.outputs.sweep_summary);
      os << sweep_summary_json(t).dump(2) << '\n';
    }
    int failed = 0;
    for (const SweepRow& r : t.rows) {
      if (r.ok()) continue;
      ++failed;
      err << "row eps=" << format_number(r.eps) << " nu=" << format_number(r.nu) << " failed: " << r.message << '\n';
    }
    out << "sweep: " << t.rows.size() << " rows (" << failed << " failed), floor " << format_number(t.floor)
        << ", slope " << format_number(t.slope) << '\n';
    return exit_code::ok;
  } catch (const Error& e) {
    return detail::report_error(e, err);
  }
}

inline int cmd_check(const std::string& subject, const CommandFlags& flags, std::ostream& out = std::cout,
                     std::ostream& err = std::cerr) {
  try {
    SuiteResult r;
    if (subject == "geometry")
      r = geometry_suite(flags.seed);
    else if (subject == "plate")
      r = plate_suite(flags.seed);
    else if (subject == "energy")
      r = energy_suite(flags.tol);
    else
      throw Error(ErrorKind::config, "check: unknown subject '" + subject + "'");
    print_suite(out, r);
    return r.pass() ? exit_code::ok : exit_code::failed;
  } catch (const Error& e) {
    return detail::report_error(e, err);
  }
}

}  // namespace fsi_slab
