// axiswirl command line driver. One subcommand per model or check:
//
//   axiswirl rd --config rd.cfg --out runs/rd
//   axiswirl sweep --config d_sweep.cfg --threads 4
//   axiswirl verify runs/rd
//   axiswirl lift-check runs/e1/snap_0.01.csv
//
// Exit codes: 0 completed/pass, 1 error, 2 blowup, 3 verification failed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "axiswirl/config.hpp"
#include "axiswirl/error.hpp"
#include "axiswirl/io.hpp"
#include "axiswirl/lift3d.hpp"
#include "axiswirl/runner.hpp"

namespace fs = std::filesystem;
using namespace axiswirl;

namespace {

constexpr const char* kOutEnv = "AXISWIRL_OUT_DIR";

// --out wins, then the environment, then ./axiswirl_out/<verb>.
fs::path resolve_out(const std::string& flag, const std::string& verb) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutEnv); env != nullptr && *env != '\0') return env;
  return fs::path("axiswirl_out") / verb;
}

ConfigDocument load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

struct CommonOpts {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("-c,--config", o.config, "config file ([model] [grid] [init] [output] [sweep])")
      ->check(CLI::ExistingFile);
  sub->add_option("-o,--out", o.out, std::string("output directory (else $") + kOutEnv + ")");
  sub->add_option("-s,--set", o.overrides, "override one value, section.key=value (repeatable)");
}

ConfigDocument prepared(const CommonOpts& o) {
  ConfigDocument doc = load_config(o.config);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--set expects section.key=value, got " + kv);
    set_config_value(doc, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axiswirl: 1D models of 3D axisymmetric swirling flow"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  CommonOpts common;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string run_dir;
  std::string snapshot;
  std::vector<double> radii = default_radii();
  double tol = 1e-8;
  std::string sweep_model;

  struct Verb {
    const char* name;
    RunKind kind;
    const char* help;
  };
  const Verb verbs[] = {
      {"ode", RunKind::Ode, "integrate the reduced (u, v) ODE and classify the trajectory"},
      {"rd", RunKind::ReactionDiffusion, "run the reaction-diffusion model"},
      {"euler1d", RunKind::Euler1d, "run the 1D model with convection"},
      {"lagrangian", RunKind::Lagrangian, "run the inviscid model in Lagrangian form"},
  };
  std::vector<std::pair<CLI::App*, RunKind>> run_subs;
  for (const auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    add_common(sub, common);
    run_subs.emplace_back(sub, v.kind);
  }

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run one model per [sweep] value, in parallel");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("-m,--model", sweep_model, "ode, rd, euler1d or lagrangian (else [model] kind)");
  sweep_cmd->add_option("-t,--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  CLI::App* verify_cmd = app.add_subcommand("verify", "re-check diagnostics of a finished run directory");
  verify_cmd->add_option("run_dir", run_dir, "directory holding series.csv and manifest.txt")
      ->required()
      ->check(CLI::ExistingDirectory);

  CLI::App* lift_cmd = app.add_subcommand("lift-check", "lift a snapshot to 3D and check the residuals");
  lift_cmd->add_option("snapshot", snapshot, "snap_<t>.csv from an euler1d run")
      ->required()
      ->check(CLI::ExistingFile);
  lift_cmd->add_option("-r,--radii", radii, "radii to evaluate at")->delimiter(',');
  lift_cmd->add_option("--tol", tol, "pass threshold on normalized residuals");
  lift_cmd->add_option("-o,--out", common.out, std::string("report directory (else $") + kOutEnv + ")");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [sub, kind] : run_subs) {
      if (!sub->parsed()) continue;
      const ConfigDocument doc = prepared(common);
      const fs::path out = resolve_out(common.out, sub->get_name());
      const RunOutcome outcome = run(kind, doc, out, std::cerr);
      std::cout << outcome.manifest.status;
      if (outcome.manifest.t_star) std::cout << " t*=" << format_double(*outcome.manifest.t_star);
      std::cout << " -> " << out.string() << "\n";
      return outcome.exit_code;
    }
    if (sweep_cmd->parsed()) {
      const ConfigDocument doc = prepared(common);
      std::optional<RunKind> kind = doc.kind;
      if (!sweep_model.empty()) {
        kind = parse_run_kind(sweep_model);
        if (!kind) throw Error("unknown model " + sweep_model);
      }
      if (!kind) throw Error("sweep needs --model or [model] kind");
      return sweep(*kind, doc, resolve_out(common.out, "sweep"), threads, std::cerr);
    }
    if (verify_cmd->parsed()) return verify(run_dir, std::cerr);
    if (lift_cmd->parsed()) {
      return lift_check(snapshot, radii, resolve_out(common.out, "lift"), std::cerr, tol);
    }
  } catch (const std::exception& e) {
    std::cerr << "axiswirl: " << e.what() << "\n";
    return exit_code::kError;
  }
  return exit_code::kError;
}
