#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "feqo/errors.hpp"
#include "feqo/experiments.hpp"

using namespace feqo;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("feqo_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::size_t line_count(const fs::path& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("parameter report") {
  const auto j = run_experiment("params_only", preset("params_only"));
  CHECK(j.at("derived").at("g_over_omega").get<double>() == Approx(0.00038447204690817473).epsilon(1e-10));
  CHECK(j.at("derived").at("g_rad_per_fs").get<double>() == Approx(0.0036215183682374694).epsilon(1e-12));
  CHECK(j.at("metrics").at("regime").at("regime") == "BRAGG");
  CHECK(j.at("metrics").at("T_pi_fs").get<double>() == Approx(43.3).epsilon(0.01));
  CHECK_FALSE(j.at("derived").contains("J_rad_per_fs"));
  CHECK(run_params(preset("fig2b")).at("derived").contains("J_rad_per_fs"));
}

TEST_CASE("derived keys carry units") {
  const auto derived = run_params(ScenarioConfig{}).at("derived");
  const std::vector<std::string> unitless{"beta", "gamma", "g_over_omega", "g_over_Delta", "fock_cutoff"};
  for (const auto& [key, value] : derived.items()) {
    if (std::find(unitless.begin(), unitless.end(), key) != unitless.end()) continue;
    const bool has_unit = key.find("_eV") != std::string::npos || key.find("_nm") != std::string::npos ||
                          key.find("_per_") != std::string::npos || key.find("_m3") != std::string::npos;
    CHECK_MESSAGE(has_unit, key);
  }
}

TEST_CASE("grating periods") {
  const auto j = run_experiment("smith_purcell", preset("smith_purcell"));
  const auto& m = j.at("metrics");
  CHECK(m.at("grating_period_classical_nm").get<double>() == Approx(4.0).epsilon(1e-12));
  CHECK(m.at("grating_period_m1_nm").get<double>() == Approx(4.081632653061225).epsilon(1e-10));
  CHECK(m.at("grating_period_m2_nm").get<double>() == Approx(8.16326530612245).epsilon(1e-10));
  CHECK(m.at("m0_error").get<std::string>().find("no coupling") != std::string::npos);
}

TEST_CASE("unknown experiment") {
  CHECK_THROWS_AS(run_experiment("fig7", ScenarioConfig{}), ConfigError);
  CHECK(experiment_names().size() == 8);
}

TEST_CASE("trajectory files follow the sampling grid") {
  ScenarioConfig c = preset("fig2a");
  c.set("propagator.sample_every_fs", "0.7");
  c.set("basis.sidebands", "2");
  const fs::path dir = scratch("csv");
  const auto j = run_experiment("fig2a", c, {dir, OutputFormat::Both});
  const double T = j.at("metrics").at("gate_duration_fs").get<double>();
  const fs::path csv = dir / "fig2a_trajectory.csv";
  REQUIRE(fs::exists(csv));
  CHECK(line_count(csv) == static_cast<std::size_t>(std::floor(T / 0.7)) + 1 + 1);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t_fs,pop_e1_n-1/2,pop_e1_n+1/2,photon_mean,entropy_nats,norm");
  const auto plot = io::read_json(dir / "fig2a_plot.json");
  CHECK(plot.at("x_label") == "time (fs)");
  CHECK(plot.at("x").size() == line_count(csv) - 1);
  CHECK(fs::exists(dir / "fig2a_summary.json"));

  const fs::path json_only = scratch("json_only");
  run_experiment("fig2a", c, {json_only, OutputFormat::Json});
  CHECK_FALSE(fs::exists(json_only / "fig2a_trajectory.csv"));
  CHECK(fs::exists(json_only / "fig2a_plot.json"));
}

TEST_CASE("config echo reproduces the metrics") {
  ScenarioConfig c = preset("fig2a");
  c.set("basis.sidebands", "2");
  const auto first = run_experiment("fig2a", c);
  const ScenarioConfig echoed = parse_config(first.at("config").get<std::string>());
  const auto second = run_experiment("fig2a", echoed);
  CHECK(io::dump_json(first.at("metrics")) == io::dump_json(second.at("metrics")));
}

TEST_CASE("density matrix export and import") {
  const fs::path dir = scratch("rho");
  ScenarioConfig c = preset("fig2a");
  c.set("basis.sidebands", "2");
  run_experiment("fig2a", c, {dir, OutputFormat::Json});
  const fs::path file = dir / "fig2a_rho_final.json";
  REQUIRE(fs::exists(file));
  const DensityOperator rho = io::import_density_matrix(file);
  CHECK(rho.dimension() == 2);
  CHECK(rho.trace() == Approx(1.0).epsilon(1e-12));

  auto doc = io::read_json(file);
  doc["imag"][0][1] = 0.25;
  doc["imag"][1][0] = 0.25;
  io::write_json(dir / "broken.json", doc);
  CHECK_THROWS_AS(io::import_density_matrix(dir / "broken.json"), ToleranceError);
  doc = io::read_json(file);
  doc["labels"] = {"e", "x"};
  io::write_json(dir / "labels.json", doc);
  CHECK_THROWS_AS(io::import_density_matrix(dir / "labels.json"), ConfigError);
}

TEST_CASE("density export selects qubits") {
  const BasisSpec b(3, symmetric_window(2), 1);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXcd v(b.dimension());
    for (Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
    const StateVector psi(b, v.normalized());
    const auto j = io::density_matrix_json(psi, {0, 2});
    CHECK(j.at("qubits") == io::Json::array({1, 3}));
    CHECK(j.at("real").size() == 4);
    double trace = 0.0;
    for (int i = 0; i < 4; ++i) trace += j.at("real")[i][i].get<double>();
    CHECK(trace == Approx(1.0).epsilon(1e-12));
  }
  const StateVector psi(b, Eigen::VectorXcd::Unit(b.dimension(), 0));
  CHECK_THROWS_AS(io::density_matrix_json(psi, {2, 0}), DomainError);
  CHECK_THROWS_AS(io::density_matrix_json(psi, {}), DomainError);
  CHECK_THROWS_AS(io::density_matrix_json(psi, {3}), DomainError);
}

TEST_CASE("JSON numbers keep full precision") {
  io::Json j{{"x", 0.1}, {"bad", std::nan("")}, {"list", {1.0, 2.5}}};
  const std::string text = io::dump_json(j);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  CHECK(text.find("null") != std::string::npos);
  CHECK(text.find("[1, 2.5]") != std::string::npos);
}

TEST_CASE("presets dump") {
  const fs::path dir = scratch("presets");
  const auto files = dump_presets(dir);
  CHECK(files.size() == preset_names().size());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(parse_config(ss.str(), f.string()).to_text() == preset(f.stem().string()).to_text());
  }
}
