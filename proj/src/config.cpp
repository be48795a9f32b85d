#include "feqo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "feqo/errors.hpp"

namespace feqo {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + ": expected a real number, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError(std::string(key) + ": expected a list like [1.0, 2.0], got '" + std::string(text) + "'");
  }
  std::vector<double> out;
  std::string_view body = trim(text.substr(1, text.size() - 2));
  while (!body.empty()) {
    const auto comma = body.find(',');
    out.push_back(parse_real(key, trim(body.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    body = trim(body.substr(comma + 1));
    if (body.empty()) throw ConfigError(std::string(key) + ": trailing comma in list");
  }
  return out;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string format_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
  return s + "]";
}

struct KeySpec {
  std::function<void(ScenarioConfig&, std::string_view key, std::string_view value)> set;
  // Empty optional means the key is inactive (other member of an exclusive group).
  std::function<std::optional<std::string>(const ScenarioConfig&)> get;
};

template <typename Member>
KeySpec real_key(Member member) {
  return {[member](ScenarioConfig& c, std::string_view k, std::string_view v) { member(c) = parse_real(k, v); },
          [member](const ScenarioConfig& c) { return std::optional(format_real(member(const_cast<ScenarioConfig&>(c)))); }};
}

template <typename Member>
KeySpec int_key(Member member) {
  return {[member](ScenarioConfig& c, std::string_view k, std::string_view v) { member(c) = parse_int(k, v); },
          [member](const ScenarioConfig& c) { return std::optional(std::to_string(member(const_cast<ScenarioConfig&>(c)))); }};
}

template <typename Member>
KeySpec bool_key(Member member) {
  return {[member](ScenarioConfig& c, std::string_view k, std::string_view v) { member(c) = parse_bool(k, v); },
          [member](const ScenarioConfig& c) { return std::optional(format_bool(member(const_cast<ScenarioConfig&>(c)))); }};
}

template <typename Member>
KeySpec enum_key(Member member, std::initializer_list<std::string_view> options) {
  std::vector<std::string_view> opts(options);
  return {[member, opts](ScenarioConfig& c, std::string_view k, std::string_view v) {
            bool ok = std::find(opts.begin(), opts.end(), v) != opts.end();
            if (!ok) {
              std::string msg = std::string(k) + ": '" + std::string(v) + "' is not one of";
              for (auto o : opts) msg += " " + std::string(o);
              throw ConfigError(msg);
            }
            member(c) = std::string(v);
          },
          [member](const ScenarioConfig& c) { return std::optional(member(const_cast<ScenarioConfig&>(c))); }};
}

// Keys in canonical order.
const std::vector<std::pair<std::string, KeySpec>>& key_table() {
  static const std::vector<std::pair<std::string, KeySpec>> table = [] {
    std::vector<std::pair<std::string, KeySpec>> t;
    t.emplace_back("electron.beta", real_key([](ScenarioConfig& c) -> double& { return c.electron.beta; }));
    t.emplace_back("electron.E0_eV", real_key([](ScenarioConfig& c) -> double& { return c.electron.E0_eV; }));
    t.emplace_back("drive.photon_energy_eV",
                   real_key([](ScenarioConfig& c) -> double& { return c.drive.photon_energy_eV; }));
    t.emplace_back("drive.alpha_re", real_key([](ScenarioConfig& c) -> double& { return c.drive.alpha_re; }));
    t.emplace_back("drive.alpha_im", real_key([](ScenarioConfig& c) -> double& { return c.drive.alpha_im; }));
    t.emplace_back("drive.phi0_rad", real_key([](ScenarioConfig& c) -> double& { return c.drive.phi0_rad; }));
    t.emplace_back("drive.auto_phase_match",
                   KeySpec{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                             c.drive.auto_phase_match = parse_bool(k, v);
                             if (c.drive.auto_phase_match) c.drive.grating_period_nm = 0.0;
                           },
                           [](const ScenarioConfig& c) { return std::optional(format_bool(c.drive.auto_phase_match)); }});
    t.emplace_back("drive.phase_match_photon_energy_eV",
                   real_key([](ScenarioConfig& c) -> double& { return c.drive.phase_match_photon_energy_eV; }));
    t.emplace_back("drive.grating_period_nm",
                   KeySpec{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                             c.drive.grating_period_nm = parse_real(k, v);
                             c.drive.auto_phase_match = false;
                           },
                           [](const ScenarioConfig& c) -> std::optional<std::string> {
                             if (c.drive.auto_phase_match) return std::nullopt;
                             return format_real(c.drive.grating_period_nm);
                           }});
    t.emplace_back("drive.harmonic_m", int_key([](ScenarioConfig& c) -> int& { return c.drive.harmonic_m; }));
    t.emplace_back("drive.incidence_theta_rad",
                   real_key([](ScenarioConfig& c) -> double& { return c.drive.incidence_theta_rad; }));
    t.emplace_back("mode.box_edge_nm",
                   KeySpec{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                             c.mode.box_edge_nm = parse_real(k, v);
                             c.mode.E_z_tilde_V_per_m.reset();
                           },
                           [](const ScenarioConfig& c) -> std::optional<std::string> {
                             if (!c.mode.box_edge_nm) return std::nullopt;
                             return format_real(*c.mode.box_edge_nm);
                           }});
    t.emplace_back("mode.E_z_tilde_V_per_m",
                   KeySpec{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                             c.mode.E_z_tilde_V_per_m = parse_real(k, v);
                             c.mode.box_edge_nm.reset();
                           },
                           [](const ScenarioConfig& c) -> std::optional<std::string> {
                             if (!c.mode.E_z_tilde_V_per_m) return std::nullopt;
                             return format_real(*c.mode.E_z_tilde_V_per_m);
                           }});
    t.emplace_back("basis.sidebands", int_key([](ScenarioConfig& c) -> int& { return c.basis.sidebands; }));
    t.emplace_back("basis.fock_cutoff",
                   KeySpec{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                             if (v == "auto") c.basis.fock_cutoff.reset();
                             else c.basis.fock_cutoff = parse_int(k, v);
                           },
                           [](const ScenarioConfig& c) {
                             return std::optional(c.basis.fock_cutoff ? std::to_string(*c.basis.fock_cutoff)
                                                                      : std::string("auto"));
                           }});
    t.emplace_back("propagator.method", enum_key([](ScenarioConfig& c) -> std::string& { return c.propagator.method; },
                                                 {"fixed_step", "eigen_oracle"}));
    t.emplace_back("propagator.step_dt_fs",
                   real_key([](ScenarioConfig& c) -> double& { return c.propagator.step_dt_fs; }));
    t.emplace_back("propagator.sample_every_fs",
                   real_key([](ScenarioConfig& c) -> double& { return c.propagator.sample_every_fs; }));
    t.emplace_back("propagator.norm_tol", real_key([](ScenarioConfig& c) -> double& { return c.propagator.norm_tol; }));
    t.emplace_back("propagator.max_phase_per_step",
                   real_key([](ScenarioConfig& c) -> double& { return c.propagator.max_phase_per_step; }));
    t.emplace_back("gate.type", enum_key([](ScenarioConfig& c) -> std::string& { return c.gate.type; },
                                         {"rx", "ry", "rz", "iswap", "partial-iswap"}));
    t.emplace_back("gate.theta_rad", real_key([](ScenarioConfig& c) -> double& { return c.gate.theta_rad; }));
    t.emplace_back("gate.model", enum_key([](ScenarioConfig& c) -> std::string& { return c.gate.model; },
                                          {"pinem_full", "jc_lab", "jc_interaction", "tc_lab", "dispersive_xy"}));
    t.emplace_back("gate.initial",
                   enum_key([](ScenarioConfig& c) -> std::string& { return c.gate.initial; }, {"g", "e"}));
    t.emplace_back("gate.dispersive_bound",
                   real_key([](ScenarioConfig& c) -> double& { return c.gate.dispersive_bound; }));
    t.emplace_back("gate.exact_kn", bool_key([](ScenarioConfig& c) -> bool& { return c.gate.exact_kn; }));
    t.emplace_back("qubits.count", int_key([](ScenarioConfig& c) -> int& { return c.qubits.count; }));
    t.emplace_back("qubits.initial_theta_rad",
                   KeySpec{[](ScenarioConfig& c, std::string_view k, std::string_view v) {
                             c.qubits.initial_theta_rad = parse_list(k, v);
                           },
                           [](const ScenarioConfig& c) { return std::optional(format_list(c.qubits.initial_theta_rad)); }});
    t.emplace_back("wstate.mode",
                   enum_key([](ScenarioConfig& c) -> std::string& { return c.wstate.mode; }, {"digital", "analog"}));
    t.emplace_back("wstate.convention", enum_key([](ScenarioConfig& c) -> std::string& { return c.wstate.convention; },
                                                 {"arccos", "arcsin"}));
    t.emplace_back("simulation.total_time_fs",
                   real_key([](ScenarioConfig& c) -> double& { return c.simulation.total_time_fs; }));
    t.emplace_back("analytics.kappa", real_key([](ScenarioConfig& c) -> double& { return c.analytics.kappa; }));
    t.emplace_back("smith_purcell.wavelength_nm",
                   real_key([](ScenarioConfig& c) -> double& { return c.smith_purcell.wavelength_nm; }));
    return t;
  }();
  return table;
}

const KeySpec& find_key(std::string_view key) {
  for (const auto& [name, spec] : key_table())
    if (name == key) return spec;
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

}  // namespace

void ScenarioConfig::set(std::string_view key, std::string_view value) {
  find_key(key).set(*this, key, trim(value));
}

void ScenarioConfig::merge_text(std::string_view text, std::string_view origin) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void ScenarioConfig::apply_overrides(const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("--set: expected key=value, got '" + a + "'");
    try {
      set(trim(std::string_view(a).substr(0, eq)), std::string_view(a).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("--set: ") + e.what());
    }
  }
}

std::string ScenarioConfig::to_text() const {
  std::string out;
  for (const auto& [name, spec] : key_table()) {
    if (auto v = spec.get(*this)) out += name + " = " + *v + "\n";
  }
  return out;
}

std::vector<std::string> ScenarioConfig::keys() {
  std::vector<std::string> k;
  for (const auto& [name, spec] : key_table()) k.push_back(name);
  return k;
}

ScenarioConfig parse_config(std::string_view text, std::string_view origin) {
  ScenarioConfig c;
  c.merge_text(text, origin);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::complex<double> configured_alpha(const ScenarioConfig& c) { return {c.drive.alpha_re, c.drive.alpha_im}; }

Scenario build_scenario(const ScenarioConfig& c) {
  Scenario s;
  s.electron = derive_electron(c.electron.beta, c.electron.E0_eV);
  const double omega = energy_to_angular(c.drive.photon_energy_eV);
  double period = c.drive.grating_period_nm;
  if (c.drive.auto_phase_match) {
    const double match_eV = c.drive.phase_match_photon_energy_eV > 0.0 ? c.drive.phase_match_photon_energy_eV
                                                                         : c.drive.photon_energy_eV;
    period = classical_grating_period(wavelength_nm(energy_to_angular(match_eV)), c.electron.beta);
  } else if (!(period > 0.0)) {
    throw ConfigError("drive.grating_period_nm: must be positive when drive.auto_phase_match is false");
  }
  s.drive = make_drive(c.drive.photon_energy_eV, period, configured_alpha(c), c.drive.phi0_rad,
                       c.drive.incidence_theta_rad, c.drive.harmonic_m);
  if (c.mode.box_edge_nm) s.mode = ModeQuantization::from_box_edge(omega, *c.mode.box_edge_nm);
  else if (c.mode.E_z_tilde_V_per_m) s.mode = ModeQuantization::from_amplitude(omega, *c.mode.E_z_tilde_V_per_m);
  else throw ConfigError("mode: one of mode.box_edge_nm or mode.E_z_tilde_V_per_m is required");
  return s;
}

PropagatorConfig build_propagator(const ScenarioConfig& c) {
  PropagatorConfig p;
  p.method = c.propagator.method == "eigen_oracle" ? PropagationMethod::EigenOracle : PropagationMethod::FixedStep;
  p.step_dt_fs = c.propagator.step_dt_fs;
  p.sample_every_fs = c.propagator.sample_every_fs;
  p.norm_tol = c.propagator.norm_tol;
  p.max_phase_per_step = c.propagator.max_phase_per_step;
  return p;
}

int resolved_fock_cutoff(const ScenarioConfig& c) {
  return c.basis.fock_cutoff ? *c.basis.fock_cutoff : default_fock_cutoff(std::abs(configured_alpha(c)));
}

namespace {

const std::map<std::string, std::string, std::less<>>& preset_texts() {
  static const std::map<std::string, std::string, std::less<>> presets = {
      {"fig2a", R"(# Resonant X gate, weak field
gate.type = rx
gate.initial = g
)"},
      {"fig2a_strong", R"(# Resonant X gate, sub-diffraction field
mode.E_z_tilde_V_per_m = 5e8
gate.type = rx
gate.initial = g
)"},
      {"fig2b", R"(# Dispersive iSWAP between two electrons
drive.photon_energy_eV = 6.2436
drive.phase_match_photon_energy_eV = 6.20
drive.alpha_re = 0
mode.E_z_tilde_V_per_m = 7.58e6
basis.sidebands = 2
basis.fock_cutoff = 2
gate.type = iswap
gate.model = tc_lab
qubits.count = 2
qubits.initial_theta_rad = [1.0471975511965976, 2.8797932657906435]
)"},
      {"fig3", R"(# Digital W state from a partial iSWAP chain
drive.photon_energy_eV = 6.2436
drive.phase_match_photon_energy_eV = 6.20
drive.alpha_re = 0
mode.E_z_tilde_V_per_m = 7.58e6
basis.sidebands = 2
basis.fock_cutoff = 1
gate.type = partial-iswap
gate.model = tc_lab
qubits.count = 3
qubits.initial_theta_rad = [0, 3.141592653589793, 3.141592653589793]
wstate.mode = digital
)"},
      {"s1_bragg", R"(# Collapse and revival, slow electron
drive.alpha_re = 3
mode.E_z_tilde_V_per_m = 5e8
gate.initial = e
propagator.sample_every_fs = 0.5
simulation.total_time_fs = 1290
)"},
      {"s2_ramannath", R"(# Faster electron, strong field
electron.beta = 0.05
drive.alpha_re = 3
mode.E_z_tilde_V_per_m = 1e9
gate.initial = g
propagator.sample_every_fs = 0.05
simulation.total_time_fs = 129
)"},
      {"smith_purcell", R"(# Grating periods for phase matching
smith_purcell.wavelength_nm = 200
drive.harmonic_m = 1
)"},
      {"params_only", R"(# Parameter pipeline only
)"},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : preset_texts()) names.push_back(name);
  return names;
}

ScenarioConfig preset(std::string_view name) {
  const auto& presets = preset_texts();
  auto it = presets.find(name);
  if (it == presets.end()) {
    std::string msg = "unknown preset '" + std::string(name) + "'; available:";
    for (const auto& [n, t] : presets) msg += " " + n;
    throw ConfigError(msg);
  }
  return parse_config(it->second, "preset " + it->first);
}

}  // namespace feqo
