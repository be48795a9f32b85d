#pragma once

// Scenario configuration: a flat `key = value` text format with exact-match,
// typed keys. Lines starting with '#' and blank lines are ignored.
//
//   real    1.5, -2e-3
//   int     6
//   bool    true | false
//   enum    bare word from the key's option list
//   list    [0.5, 1.25]
//   auto    only for basis.fock_cutoff

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "feqo/hilbert.hpp"
#include "feqo/physpar.hpp"
#include "feqo/propagate.hpp"

namespace feqo {

struct ScenarioConfig {
  struct {
    double beta = 0.02;
    double E0_eV = 100.0;
  } electron;
  struct {
    double photon_energy_eV = 6.20;
    double alpha_re = 10.0;
    double alpha_im = 0.0;
    double phi0_rad = 0.0;
    bool auto_phase_match = true;
    double phase_match_photon_energy_eV = 0.0;  // 0: match at photon_energy_eV
    double grating_period_nm = 0.0;             // used when auto_phase_match is false
    int harmonic_m = 1;
    double incidence_theta_rad = 0.0;
  } drive;
  struct {
    std::optional<double> box_edge_nm = 100.0;
    std::optional<double> E_z_tilde_V_per_m;
  } mode;
  struct {
    int sidebands = 6;
    std::optional<int> fock_cutoff;  // empty: automatic
  } basis;
  struct {
    std::string method = "fixed_step";
    double step_dt_fs = 0.0;
    double sample_every_fs = 0.0;
    double norm_tol = 1e-8;
    double max_phase_per_step = 0.02;
  } propagator;
  struct {
    std::string type = "rx";
    double theta_rad = 3.141592653589793;
    std::string model = "pinem_full";
    std::string initial = "g";
    double dispersive_bound = 0.1;
    bool exact_kn = false;
  } gate;
  struct {
    int count = 1;
    std::vector<double> initial_theta_rad;
  } qubits;
  struct {
    std::string mode = "digital";
    std::string convention = "arccos";
  } wstate;
  struct {
    double total_time_fs = 0.0;  // 0: protocol default
  } simulation;
  struct {
    double kappa = 0.5;
  } analytics;
  struct {
    double wavelength_nm = 200.0;
  } smith_purcell;

  // Sets one key from its textual value. Throws ConfigError naming the key.
  void set(std::string_view key, std::string_view value);
  // Parses a whole document on top of the current values. `origin` prefixes error messages.
  void merge_text(std::string_view text, std::string_view origin = "config");
  // Applies "key=value" override strings.
  void apply_overrides(const std::vector<std::string>& assignments);

  // Canonical dump of every active key, full precision; parses back to an equal config.
  std::string to_text() const;
  bool operator==(const ScenarioConfig& other) const { return to_text() == other.to_text(); }

  static std::vector<std::string> keys();
};

ScenarioConfig parse_config(std::string_view text, std::string_view origin = "config");
ScenarioConfig load_config(const std::string& path);

// Derived physics from the configuration.
Scenario build_scenario(const ScenarioConfig& config);
PropagatorConfig build_propagator(const ScenarioConfig& config);
int resolved_fock_cutoff(const ScenarioConfig& config);
std::complex<double> configured_alpha(const ScenarioConfig& config);

// Embedded presets.
std::vector<std::string> preset_names();
ScenarioConfig preset(std::string_view name);

}  // namespace feqo
