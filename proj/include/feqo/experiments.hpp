#pragma once

// Named reproductions and the runners behind the command-line subcommands.
// Every runner returns a summary record: the config echo, derived parameters
// and metrics, with units in the key names. Files are written only when an
// output directory is given.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feqo/config.hpp"
#include "feqo/io.hpp"

namespace feqo {

enum class OutputFormat { Csv, Json, Both };
OutputFormat output_format_from_string(std::string_view name);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  OutputFormat format = OutputFormat::Both;
};

std::vector<std::string> experiment_names();

// Runs `name` on `config` (normally preset(name) plus user overrides).
io::Json run_experiment(std::string_view name, const ScenarioConfig& config, const RunOptions& options = {});

// Derived parameters of a scenario plus its regime report.
io::Json run_params(const ScenarioConfig& config);
// Gate named by config.gate.type on config.gate.model.
io::Json run_gate(const ScenarioConfig& config, const RunOptions& options = {});
// mode: "digital" or "analog".
io::Json run_wstate(const ScenarioConfig& config, int num_qubits, std::string_view mode,
                    const RunOptions& options = {});
io::Json run_collapse(const ScenarioConfig& config, const RunOptions& options = {});
io::Json run_regime(const ScenarioConfig& config);

// Writes every preset as <name>.cfg into `dir` and returns the paths.
std::vector<std::filesystem::path> dump_presets(const std::filesystem::path& dir);

}  // namespace feqo
