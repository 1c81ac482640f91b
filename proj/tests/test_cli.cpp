#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fsi_slab/cli/commands.hpp"

using namespace fsi_slab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fsi_slab_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string l;
  std::getline(in, l);
  return l;
}

ConfigDocument small_run() {
  return parse_config(R"({"grid": {"nx": 16, "nz": 9},
    "params": {"eps": 0.5, "nu": 0.05},
    "initial": {"profile": "pressure_pulse", "amplitude": 0.05},
    "run": {"t_final": 0.1, "output_interval": 0.05}})");
}

ConfigDocument collapsing_run() {
  return parse_config(R"({"grid": {"nx": 16, "nz": 9}, "params": {"eps": 5.0},
    "initial": {"profile": "plate_mode", "plate_amplitude": -0.9, "plate_velocity": -2.0}})");
}

ErrorKind parse_failure(const std::string& text, std::string* message = nullptr) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorKind::structural;
}

int shell(const std::string& args) {
  const std::string cmd = std::string(FSI_SLAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const ConfigDocument d = parse_config("{}");
  EXPECT_EQ(d.run.grid.nx, 64);
  EXPECT_EQ(d.run.initial.profile, "rest");
  EXPECT_EQ(d.outputs.run_csv, "run.csv");
  EXPECT_EQ(d.sweep.reference.provider, "proxy-run");
}

TEST(Config, EchoRoundTrips) {
  const ConfigDocument d = small_run();
  const Json a = config_to_json(d);
  const Json b = config_to_json(parse_config(a.dump()));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a["params"]["eps"], 0.5);
  EXPECT_EQ(a["initial"]["profile"], "pressure_pulse");
}

TEST(Config, UnknownKeyNamedByPath) {
  std::string msg;
  EXPECT_EQ(parse_failure(R"({"params": {"gama": 2}})", &msg), ErrorKind::config);
  EXPECT_NE(msg.find("$.params.gama"), std::string::npos) << msg;
  EXPECT_EQ(parse_failure(R"({"extra": 1})", &msg), ErrorKind::config);
  EXPECT_NE(msg.find("$.extra"), std::string::npos) << msg;
}

TEST(Config, TypeAndValueErrors) {
  std::string msg;
  EXPECT_EQ(parse_failure(R"({"grid": {"nx": 16.5}})", &msg), ErrorKind::config);
  EXPECT_NE(msg.find("$.grid.nx"), std::string::npos);
  EXPECT_EQ(parse_failure(R"({"initial": {"profile": "vortex"}})", &msg), ErrorKind::config);
  EXPECT_EQ(parse_failure(R"({"coupling": {"mode": "loose"}})", &msg), ErrorKind::config);
  EXPECT_EQ(parse_failure(R"({"params": {"gamma": 0.5}})", &msg), ErrorKind::config);
  EXPECT_EQ(parse_failure(R"({"sweep": {"eps_list": [0.1, "x"]}})", &msg), ErrorKind::config);
  EXPECT_NE(msg.find("eps_list[1]"), std::string::npos);
}

TEST(Config, MalformedJson) {
  std::string msg;
  EXPECT_EQ(parse_failure(R"({"grid": {"nx": 16,}})", &msg), ErrorKind::config);
  EXPECT_NE(msg.find("malformed"), std::string::npos);
  EXPECT_THROW(load_config("/nonexistent/fsi.json"), Error);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorKind::degeneracy), 2);
  EXPECT_EQ(exit_code_for(ErrorKind::positivity), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::blow_up), 4);
  EXPECT_EQ(exit_code_for(ErrorKind::timeout), 5);
  EXPECT_EQ(exit_code_for(ErrorKind::config), 64);
  EXPECT_EQ(exit_code_for(ErrorKind::parameter), 64);
  EXPECT_EQ(exit_code_for(ErrorKind::iteration), 1);
  EXPECT_EQ(exit_code_for(ErrorKind::energy), 1);
}

TEST(RunCommand, WritesTablesAndEcho) {
  const fs::path dir = scratch("run");
  CommandFlags f;
  f.out = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(small_run(), f, out, err), exit_code::ok) << err.str();
  EXPECT_EQ(first_line(dir / "run.csv"), run_csv_header);
  EXPECT_EQ(first_line(dir / "energy.csv"), energy_csv_header);
  const ConfigDocument echo = load_config((dir / "effective_config.json").string());
  EXPECT_EQ(echo.run.params.eps, 0.5);
  EXPECT_EQ(echo.outputs.dir, dir.string());
  std::ifstream in(dir / "energy.csv");
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_NE(out.str().find("run:"), std::string::npos);
}

TEST(RunCommand, OptionalOutputs) {
  const fs::path dir = scratch("dumps");
  ConfigDocument d = small_run();
  d.outputs.remainder_csv = "remainder.csv";
  d.outputs.field_dumps = true;
  CommandFlags f;
  f.out = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(d, f, out, err), exit_code::ok) << err.str();
  EXPECT_EQ(first_line(dir / "remainder.csv"), remainder_csv_header());
  EXPECT_TRUE(fs::exists(dir / "fields"));
  EXPECT_FALSE(fs::is_empty(dir / "fields"));
}

TEST(RunCommand, DegeneracyExitCodeAndPartialTable) {
  const fs::path dir = scratch("degenerate");
  CommandFlags f;
  f.out = dir.string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(collapsing_run(), f, out, err), exit_code::degeneracy);
  EXPECT_NE(err.str().find("t = "), std::string::npos) << err.str();
  EXPECT_EQ(first_line(dir / "run.csv"), run_csv_header);
}

TEST(RunCommand, EnvironmentOverridesOutFlag) {
  const fs::path env_dir = scratch("env"), flag_dir = scratch("flag");
  ::setenv("FSI_SLAB_OUT", env_dir.c_str(), 1);
  CommandFlags f;
  f.out = flag_dir.string();
  std::ostringstream out, err;
  const int code = cmd_run(small_run(), f, out, err);
  ::unsetenv("FSI_SLAB_OUT");
  ASSERT_EQ(code, exit_code::ok) << err.str();
  EXPECT_TRUE(fs::exists(env_dir / "run.csv"));
  EXPECT_FALSE(fs::exists(flag_dir / "run.csv"));
}

TEST(SweepCommand, ManufacturedReferenceRows) {
  const fs::path dir = scratch("sweep");
  ConfigDocument d = small_run();
  d.run.params.nu_s = 0.1;
  d.sweep.eps_list = {0.4, 0.2};
  d.sweep.nu_list = {0.4, 0.2};
  d.sweep.floor = 0.0;
  d.sweep.reference.provider = "manufactured";
  d.sweep.reference.eps0 = 0.05;
  d.sweep.reference.nu0 = 0.05;
  CommandFlags f;
  f.out = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(d, f, out, err), exit_code::ok) << err.str();
  std::ifstream in(dir / "sweep.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "eps,nu,sup_rel_energy,terminal_rel_energy,initial_rel_energy,status");
  int ok = 0;
  while (std::getline(in, line)) ok += line.ends_with(",ok");
  EXPECT_EQ(ok, 4);
  const Json summary = Json::parse(slurp(dir / "sweep_summary.json"));
  EXPECT_TRUE(summary.is_object());
}

TEST(SweepCommand, FailedRowKeepsExitCodeZero) {
  const fs::path dir = scratch("sweep_failed");
  ConfigDocument d = small_run();
  d.run.time_budget = 1e-9;
  d.sweep.eps_list = {0.4};
  d.sweep.nu_list = {0.4};
  d.sweep.floor = 0.0;
  d.sweep.reference.provider = "manufactured";
  CommandFlags f;
  f.out = dir.string();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_sweep(d, f, out, err), exit_code::ok);
  EXPECT_NE(err.str().find("failed"), std::string::npos);
  EXPECT_NE(slurp(dir / "sweep.csv").find(",failed\n"), std::string::npos);
}

TEST(CheckCommand, Subjects) {
  CommandFlags f;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check("plate", f, out, err), exit_code::ok) << out.str();
  EXPECT_EQ(cmd_check("nothing", f, out, err), exit_code::config);
  f.tol = 0.0;
  EXPECT_EQ(cmd_check("energy", f, out, err), exit_code::failed);
}

TEST(Executable, ExitCodes) {
  const fs::path dir = scratch("exe");
  EXPECT_EQ(shell("check plate"), 0);
  EXPECT_EQ(shell(""), 64);
  EXPECT_EQ(shell("run --config /nonexistent/fsi.json"), 64);
  const fs::path cfg = dir / "collapse.json";
  std::ofstream(cfg) << config_to_json(collapsing_run()).dump();
  EXPECT_EQ(shell("run --config " + cfg.string() + " --out " + (dir / "o").string()), 2);
  std::ofstream(dir / "bad.json") << "{\"grid\": [";
  EXPECT_EQ(shell("run --config " + (dir / "bad.json").string()), 64);
}
