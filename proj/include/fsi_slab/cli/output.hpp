#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "../diagnostics/relative.hpp"
#include "../limits/sweep.hpp"
#include "config.hpp"

namespace fsi_slab {

inline constexpr const char* run_csv_header = "t,dt,energy,dissipated,mass,mismatch,iterations";
inline constexpr const char* energy_csv_header =
    "t,kinetic,pressure_potential,plate_kinetic,plate_elastic,energy,viscous,top_slip,bottom_slip,plate,penalty,"
    "dissipated,mass,mismatch,violation";

inline void write_run_row(std::ostream& os, const StepRecord& r) {
  os << format_number(r.t) << ',' << format_number(r.dt) << ',' << format_number(r.energy) << ','
     << format_number(r.dissipated) << ',' << format_number(r.mass) << ',' << format_number(r.mismatch) << ','
     << r.iterations << '\n';
}

inline void write_energy_csv(std::ostream& os, const std::vector<EnergyReport>& rows) {
  os << energy_csv_header << '\n';
  const double e0 = rows.empty() ? 0.0 : rows.front().energy();
  const double scale = e0 > 0.0 ? e0 : 1.0;
  for (const EnergyReport& r : rows) {
    const DissipationRates& d = r.dissipated;
    const double v = (r.energy() + d.total() - e0) / scale;
    for (double x : {r.t, r.kinetic, r.pressure_potential, r.plate_kinetic, r.plate_elastic, r.energy(), d.viscous,
                     d.top_slip, d.bottom_slip, d.plate, d.penalty, d.total(), r.mass, r.mismatch})
      os << format_number(x) << ',';
    os << format_number(v) << '\n';
  }
}

inline std::string remainder_csv_header() {
  std::string h = "t,rel_energy";
  for (int k = 0; k < RemainderItems::count; ++k) h += std::string(",") + RemainderItems::name(k);
  return h + ",total";
}

// Itemized remainder against a comparison triple at every stored state.
inline void write_remainder_csv(std::ostream& os, const std::vector<State>& states, const Params& p,
                                const TripleProvider& provider) {
  os << remainder_csv_header() << '\n';
  for (const State& s : states) {
    const TestTriple T = provider(s);
    const RemainderItems R = remainder_R(s, T, p);
    os << format_number(s.t) << ',' << format_number(relative_energy(s, T, p));
    for (double x : R.v) os << ',' << format_number(x);
    os << ',' << format_number(R.total()) << '\n';
  }
}

// Row-major float64 arrays [z][x] (plate arrays [x]) concatenated in one file, described by a JSON sidecar.
inline void write_field_dump(const std::filesystem::path& stem, const State& s) {
  const Grid& g = s.grid();
  struct Item {
    const char* name;
    const std::vector<double>* data;
    bool plate;
  };
  const Item items[] = {{"rho_hat", &s.rho_hat.v, false}, {"u_hat_x", &s.u_hat[0].v, false},
                        {"u_hat_z", &s.u_hat[1].v, false}, {"w", &s.w, true}, {"w_t", &s.w_t, true}};
  std::ofstream bin(stem.string() + ".bin", std::ios::binary);
  if (!bin) throw Error(ErrorKind::config, stem.string() + ".bin: cannot write");
  Json side;
  side["t"] = s.t;
  side["dtype"] = "float64";
  side["byte_order"] = "little";
  side["order"] = "row-major";
  side["nx"] = g.nx;
  side["nz"] = g.nz;
  side["lx"] = g.lx;
  Json arrays = Json::array();
  std::size_t offset = 0;
  for (const Item& it : items) {
    bin.write(reinterpret_cast<const char*>(it.data->data()), static_cast<std::streamsize>(it.data->size() * 8));
    Json a;
    a["name"] = it.name;
    a["offset"] = offset;
    a["shape"] = it.plate ? Json::array({g.nx}) : Json::array({g.nz, g.nx});
    arrays.push_back(a);
    offset += it.data->size() * 8;
  }
  side["arrays"] = arrays;
  std::ofstream js(stem.string() + ".json");
  js << side.dump(2) << '\n';
}

inline Json sweep_summary_json(const SweepTable& t) {
  auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
  Json j;
  j["slope"] = num(t.slope);
  j["intercept"] = num(t.intercept);
  j["residual"] = num(t.residual);
  j["fitted_points"] = t.fitted_points;
  j["floor"] = num(t.floor);
  j["surrogate_p4_max"] = num(t.surrogate_p4_max);
  j["surrogate_pgamma_max"] = num(t.surrogate_pg_max);
  Json rows = Json::array();
  for (const SweepRow& r : t.rows) {
    Json o;
    o["eps"] = r.eps;
    o["nu"] = r.nu;
    o["status"] = r.ok() ? "ok" : "failed";
    if (!r.ok()) o["message"] = r.message;
    o["sup_rel_energy"] = num(r.sup_rel_energy);
    o["energy_violation"] = num(r.energy_violation);
    o["max_forcing"] = num(r.max_forcing);
    rows.push_back(o);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace fsi_slab
