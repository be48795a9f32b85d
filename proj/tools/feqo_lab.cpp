// feqo-lab: command-line front end for the scenario presets and experiments.
//
//   feqo-lab params [--config F] [--set k=v]...
//   feqo-lab run <experiment> [--out DIR] [--format csv|json|both]
//   feqo-lab gate <rx|ry|rz|iswap|partial-iswap> [--theta RAD]
//   feqo-lab wstate --n N --mode digital|analog
//   feqo-lab analytics collapse|regime
//   feqo-lab presets dump [--out DIR]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical tolerance failure, 1 anything else.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "feqo/errors.hpp"
#include "feqo/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string format = "both";
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_output) {
  cmd->add_option("--config", flags.config_path, "Scenario file (key = value lines)");
  cmd->add_option("--set", flags.overrides, "Override one key, e.g. --set drive.alpha_re=3")->take_all();
  if (with_output) {
    cmd->add_option("--out", flags.out_dir, "Directory for summary, trajectory and plot files");
    cmd->add_option("--format", flags.format, "Trajectory output: csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
  }
}

// Preset (or defaults) first, then the config file, then --set overrides.
feqo::ScenarioConfig resolve(const CommonFlags& flags, std::optional<std::string> preset_name) {
  feqo::ScenarioConfig config = preset_name ? feqo::preset(*preset_name) : feqo::ScenarioConfig{};
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw feqo::ConfigError("cannot read config file '" + flags.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    config.merge_text(ss.str(), flags.config_path);
  }
  config.apply_overrides(flags.overrides);
  return config;
}

feqo::RunOptions run_options(const CommonFlags& flags) {
  feqo::RunOptions opts;
  if (!flags.out_dir.empty()) opts.out_dir = flags.out_dir;
  opts.format = feqo::output_format_from_string(flags.format);
  return opts;
}

void print(const feqo::io::Json& summary) { std::cout << feqo::io::dump_json(summary) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-electron quantum optics simulations", "feqo-lab"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* params = app.add_subcommand("params", "Print the derived parameters of a scenario");
  std::string params_preset;
  params->add_option("--preset", params_preset, "Start from a named preset");
  add_common(params, flags, false);

  auto* run = app.add_subcommand("run", "Run a named experiment");
  std::string experiment;
  run->add_option("experiment", experiment, "Experiment name")->required();
  add_common(run, flags, true);

  auto* gate = app.add_subcommand("gate", "Execute one gate");
  std::string gate_type;
  std::optional<double> theta;
  gate->add_option("type", gate_type, "rx, ry, rz, iswap or partial-iswap")
      ->required()
      ->check(CLI::IsMember({"rx", "ry", "rz", "iswap", "partial-iswap"}));
  gate->add_option("--theta", theta, "Rotation angle (rad)");
  add_common(gate, flags, true);

  auto* wstate = app.add_subcommand("wstate", "Prepare a W state");
  int num_qubits = 3;
  std::string wmode = "digital";
  wstate->add_option("--n", num_qubits, "Number of qubits")->check(CLI::Range(2, 8));
  wstate->add_option("--mode", wmode, "digital or analog")->check(CLI::IsMember({"digital", "analog"}));
  add_common(wstate, flags, true);

  auto* analytics = app.add_subcommand("analytics", "Closed-form predictions");
  analytics->require_subcommand(1);
  auto* collapse = analytics->add_subcommand("collapse", "Collapse and revival times and curves");
  add_common(collapse, flags, true);
  auto* regime = analytics->add_subcommand("regime", "Bragg / Raman-Nath / dispersive classification");
  add_common(regime, flags, false);

  auto* presets = app.add_subcommand("presets", "Embedded scenario presets");
  presets->require_subcommand(1);
  auto* dump = presets->add_subcommand("dump", "Write every preset as <name>.cfg");
  std::string dump_dir = ".";
  dump->add_option("--out", dump_dir, "Target directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*params) {
      print(feqo::run_params(resolve(flags, params_preset.empty() ? std::nullopt : std::optional(params_preset))));
    } else if (*run) {
      print(feqo::run_experiment(experiment, resolve(flags, experiment), run_options(flags)));
    } else if (*gate) {
      const bool exchange = gate_type == "iswap" || gate_type == "partial-iswap";
      feqo::ScenarioConfig config = resolve(flags, exchange ? std::optional<std::string>("fig2b") : std::nullopt);
      config.set("gate.type", gate_type);
      if (theta) config.gate.theta_rad = *theta;
      print(feqo::run_gate(config, run_options(flags)));
    } else if (*wstate) {
      const auto config = resolve(flags, wmode == "digital" ? std::optional<std::string>("fig3") : std::nullopt);
      print(feqo::run_wstate(config, num_qubits, wmode, run_options(flags)));
    } else if (*collapse) {
      print(feqo::run_collapse(resolve(flags, "s1_bragg"), run_options(flags)));
    } else if (*regime) {
      print(feqo::run_regime(resolve(flags, std::nullopt)));
    } else if (*dump) {
      for (const auto& path : feqo::dump_presets(dump_dir)) std::cout << path.string() << "\n";
    }
  } catch (const feqo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const feqo::DomainError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return 2;
  } catch (const feqo::ToleranceError& e) {
    std::cerr << "tolerance failure: " << e.what() << "\n";
    return 3;
  } catch (const feqo::TruncationError& e) {
    std::cerr << "tolerance failure: " << e.what() << " (needs fock cutoff >= " << e.required_cutoff() << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
