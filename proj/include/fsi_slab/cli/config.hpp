#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../scheme/config.hpp"

namespace fsi_slab {

using Json = nlohmann::ordered_json;

struct ReferenceSpec {
  std::string provider = "proxy-run";
  double eps0 = 0.00625;
  double nu0 = 0.00625;
  int nx = 128;
  int nz = 65;
  double output_interval = 0.05;
};

struct SweepConfig {
  std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
  std::vector<double> nu_list{0.2, 0.1, 0.05, 0.025};
  int workers = 1;
  // Negative: measured.
  double floor = -1.0;
  ReferenceSpec reference;
};

struct OutputSpec {
  std::string dir = "out";
  std::string run_csv = "run.csv";
  std::string energy_csv = "energy.csv";
  // Empty disables the itemized remainder against the rest triple.
  std::string remainder_csv;
  bool field_dumps = false;
  std::string effective_config = "effective_config.json";
  std::string sweep_csv = "sweep.csv";
  std::string sweep_summary = "sweep_summary.json";
};

struct ConfigDocument {
  RunConfig run;
  SweepConfig sweep;
  OutputSpec outputs;
};

namespace detail {

// Walks one JSON object, remembering consumed keys so leftovers can be rejected by path.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
    throw Error(ErrorKind::config, path + ": " + msg);
  }

  std::string at(const std::string& key) const { return path_ + "." + key; }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) fail(at(key), "expected a number");
      out = v->get<double>();
    }
  }
  void integer(const std::string& key, int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) fail(at(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) fail(at(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) fail(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  void number_list(const std::string& key, std::vector<double>& out) {
    if (const Json* v = find(key)) {
      if (!v->is_array()) fail(at(key), "expected an array of numbers");
      out.clear();
      for (std::size_t k = 0; k < v->size(); ++k) {
        if (!(*v)[k].is_number()) fail(at(key) + "[" + std::to_string(k) + "]", "expected a number");
        out.push_back((*v)[k].get<double>());
      }
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail(at(it.key()), "unknown key");
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline Coupling parse_coupling(const std::string& s, const std::string& path) {
  if (s == "strong") return Coupling::strong;
  if (s == "penalty") return Coupling::penalty;
  if (s == "monolithic") return Coupling::monolithic;
  ObjectReader::fail(path, "unknown coupling mode '" + s + "'");
}

}  // namespace detail

inline ConfigDocument config_from_json(const Json& j) {
  using detail::ObjectReader;
  ConfigDocument d;
  ObjectReader root(j, "$");
  if (const Json* s = root.find("params")) {
    ObjectReader r(*s, root.at("params"));
    Params& p = d.run.params;
    r.number("gamma", p.gamma);
    r.number("mu", p.mu);
    r.number("lambda", p.lambda);
    r.number("nu", p.nu);
    r.number("eps", p.eps);
    r.number("nu_s", p.nu_s);
    r.number("alpha", p.alpha);
    r.number("alpha0", p.alpha0);
    r.number("delta", p.delta);
    r.number("beta", p.beta);
    r.number("rho_bar", p.rho_bar);
    r.integer("dim", p.dim);
    r.number("contact_floor", p.contact_floor);
    r.finish();
  }
  if (const Json* s = root.find("grid")) {
    ObjectReader r(*s, root.at("grid"));
    r.integer("nx", d.run.grid.nx);
    r.integer("nz", d.run.grid.nz);
    r.number("lx", d.run.grid.lx);
    r.finish();
  }
  if (const Json* s = root.find("initial")) {
    ObjectReader r(*s, root.at("initial"));
    InitialSpec& ic = d.run.initial;
    r.string("profile", ic.profile);
    r.number("amplitude", ic.amplitude);
    r.number("width", ic.width);
    r.number("x0", ic.x0);
    r.number("z0", ic.z0);
    r.integer("mode", ic.mode);
    r.number("plate_amplitude", ic.plate_amplitude);
    r.number("plate_velocity", ic.plate_velocity);
    r.number("velocity_amplitude", ic.velocity_amplitude);
    r.number("rho1_amplitude", ic.rho1_amplitude);
    r.number("rho1_power", ic.rho1_power);
    r.number("D", ic.D);
    r.number("cavity_depth", ic.cavity_depth);
    r.number("cavity_lx", ic.cavity_lx);
    r.number("cavity_lz", ic.cavity_lz);
    r.finish();
    static const std::set<std::string> known{"rest", "pressure_pulse", "plate_mode", "well_prepared", "cavity"};
    if (!known.count(ic.profile)) ObjectReader::fail(r.at("profile"), "unknown profile '" + ic.profile + "'");
  }
  if (const Json* s = root.find("coupling")) {
    ObjectReader r(*s, root.at("coupling"));
    std::string mode = to_string(d.run.coupling.mode);
    r.string("mode", mode);
    d.run.coupling.mode = detail::parse_coupling(mode, r.at("mode"));
    r.number("kappa", d.run.coupling.kappa);
    r.number("tol", d.run.coupling.tol);
    r.integer("max_iter", d.run.coupling.max_iter);
    r.number("relaxation", d.run.coupling.relaxation);
    r.finish();
  }
  if (const Json* s = root.find("run")) {
    ObjectReader r(*s, root.at("run"));
    RunConfig& c = d.run;
    r.number("t_final", c.t_final);
    r.number("cfl", c.cfl);
    r.number("dt_factor", c.dt_factor);
    r.number("fixed_dt", c.fixed_dt);
    r.number("output_interval", c.output_interval);
    r.boolean("predict_load", c.predict_load);
    r.boolean("strict", c.strict);
    r.number("tol_energy", c.tol_energy);
    r.number("time_budget", c.time_budget);
    r.finish();
  }
  if (const Json* s = root.find("sweep")) {
    ObjectReader r(*s, root.at("sweep"));
    r.number_list("eps_list", d.sweep.eps_list);
    r.number_list("nu_list", d.sweep.nu_list);
    r.integer("workers", d.sweep.workers);
    r.number("floor", d.sweep.floor);
    if (const Json* rs = r.find("reference")) {
      ObjectReader q(*rs, r.at("reference"));
      ReferenceSpec& ref = d.sweep.reference;
      q.string("provider", ref.provider);
      q.number("eps0", ref.eps0);
      q.number("nu0", ref.nu0);
      q.integer("nx", ref.nx);
      q.integer("nz", ref.nz);
      q.number("output_interval", ref.output_interval);
      q.finish();
      if (ref.provider != "proxy-run" && ref.provider != "manufactured")
        ObjectReader::fail(q.at("provider"), "unknown provider '" + ref.provider + "'");
    }
    r.finish();
  }
  if (const Json* s = root.find("outputs")) {
    ObjectReader r(*s, root.at("outputs"));
    OutputSpec& o = d.outputs;
    r.string("dir", o.dir);
    r.string("run_csv", o.run_csv);
    r.string("energy_csv", o.energy_csv);
    r.string("remainder_csv", o.remainder_csv);
    r.boolean("field_dumps", o.field_dumps);
    r.string("effective_config", o.effective_config);
    r.string("sweep_csv", o.sweep_csv);
    r.string("sweep_summary", o.sweep_summary);
    r.finish();
  }
  root.finish();
  try {
    d.run.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::config, std::string("$: ") + e.what());
  }
  return d;
}

inline ConfigDocument parse_config(const std::string& text, const std::string& source = "config") {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::config, source + ": malformed JSON at byte " + std::to_string(e.byte));
  }
  return config_from_json(j);
}

inline ConfigDocument load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

// Every field with its effective value; parsing the result gives back the same document.
inline Json config_to_json(const ConfigDocument& d) {
  const RunConfig& c = d.run;
  const Params& p = c.params;
  const InitialSpec& ic = c.initial;
  Json j;
  j["params"] = {{"gamma", p.gamma},   {"mu", p.mu},         {"lambda", p.lambda}, {"nu", p.nu},
                 {"eps", p.eps},       {"nu_s", p.nu_s},     {"alpha", p.alpha},   {"alpha0", p.alpha0},
                 {"delta", p.delta},   {"beta", p.beta},     {"rho_bar", p.rho_bar}, {"dim", p.dim},
                 {"contact_floor", p.contact_floor}};
  j["grid"] = {{"nx", c.grid.nx}, {"nz", c.grid.nz}, {"lx", c.grid.lx}};
  j["initial"] = {{"profile", ic.profile},
                  {"amplitude", ic.amplitude},
                  {"width", ic.width},
                  {"x0", ic.x0},
                  {"z0", ic.z0},
                  {"mode", ic.mode},
                  {"plate_amplitude", ic.plate_amplitude},
                  {"plate_velocity", ic.plate_velocity},
                  {"velocity_amplitude", ic.velocity_amplitude},
                  {"rho1_amplitude", ic.rho1_amplitude},
                  {"rho1_power", ic.rho1_power},
                  {"D", ic.D},
                  {"cavity_depth", ic.cavity_depth},
                  {"cavity_lx", ic.cavity_lx},
                  {"cavity_lz", ic.cavity_lz}};
  j["coupling"] = {{"mode", to_string(c.coupling.mode)},
                   {"kappa", c.coupling.kappa},
                   {"tol", c.coupling.tol},
                   {"max_iter", c.coupling.max_iter},
                   {"relaxation", c.coupling.relaxation}};
  j["run"] = {{"t_final", c.t_final},       {"cfl", c.cfl},
              {"dt_factor", c.dt_factor},   {"fixed_dt", c.fixed_dt},
              {"output_interval", c.output_interval}, {"predict_load", c.predict_load},
              {"strict", c.strict},         {"tol_energy", c.tol_energy},
              {"time_budget", c.time_budget}};
  const ReferenceSpec& r = d.sweep.reference;
  j["sweep"] = {{"eps_list", d.sweep.eps_list},
                {"nu_list", d.sweep.nu_list},
                {"workers", d.sweep.workers},
                {"floor", d.sweep.floor},
                {"reference",
                 {{"provider", r.provider},
                  {"eps0", r.eps0},
                  {"nu0", r.nu0},
                  {"nx", r.nx},
                  {"nz", r.nz},
                  {"output_interval", r.output_interval}}}};
  const OutputSpec& o = d.outputs;
  j["outputs"] = {{"dir", o.dir},
                  {"run_csv", o.run_csv},
                  {"energy_csv", o.energy_csv},
                  {"remainder_csv", o.remainder_csv},
                  {"field_dumps", o.field_dumps},
                  {"effective_config", o.effective_config},
                  {"sweep_csv", o.sweep_csv},
                  {"sweep_summary", o.sweep_summary}};
  return j;
}

}  // namespace fsi_slab
