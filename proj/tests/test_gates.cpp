#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "feqo/errors.hpp"
#include "feqo/gates.hpp"

using namespace feqo;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Scenario dispersive_scenario() {
  const double period = classical_grating_period(wavelength_nm(energy_to_angular(6.20)), 0.02);
  const double omega = energy_to_angular(6.2436);
  return {derive_electron(0.02), make_drive(6.2436, period), ModeQuantization::from_amplitude(omega, 7.58e6)};
}

Scenario resonant_weak() {
  const double omega = energy_to_angular(6.20);
  const double period = classical_grating_period(wavelength_nm(omega), 0.02);
  return {derive_electron(0.02), make_drive(6.20, period), ModeQuantization::from_amplitude(omega, 7.48e6)};
}

StateVector register_state(const BasisSpec& b, const std::vector<HalfIndex>& levels, int photons) {
  std::vector<ElectronFactor> e;
  for (auto n : levels) e.push_back(sideband_state(b.sidebands(), n));
  return tensor_product(b, e, fock_state(photons, b.fock_cutoff()));
}

ExecutionContext exchange_context(int n) {
  PropagatorConfig exact;
  exact.method = PropagationMethod::EigenOracle;
  return {dispersive_scenario(), BasisSpec(n, symmetric_window(2), 0), ModelKind::DispersiveXy, exact, false, false};
}

}  // namespace

TEST_CASE("single-qubit durations") {
  const double g = 0.0036215183682374694;
  const auto rx = schedule_rx(kPi, g, 10.0);
  CHECK(rx.total_duration_fs() == Approx(43.374).epsilon(1e-4));
  CHECK(rx.total_duration_fs() == Approx(kPi / (2.0 * g * 10.0)).epsilon(1e-14));
  CHECK(schedule_ry(kPi, g, 10.0).total_duration_fs() == rx.total_duration_fs());
  CHECK(schedule_ry(kPi, g, 10.0).segments[0].drive_phase == Approx(rx.segments[0].drive_phase + 0.5 * kPi));
  CHECK(schedule_rx(-kPi, g, 10.0).segments[0].drive_phase == Approx(kPi));
  CHECK(schedule_rx(-kPi, g, 10.0).total_duration_fs() == rx.total_duration_fs());
  CHECK(schedule_rz_composite(kPi, g, 10.0).segments.size() == 3);
  CHECK_THROWS_AS(schedule_rx(kPi, 0.0, 10.0), DomainError);
  CHECK_THROWS_AS(schedule_rx(kPi, g, 0.0), DomainError);
}

TEST_CASE("semiclassical rotations") {
  const double g = 0.01;
  const Eigen::Matrix2cd x = semiclassical_unitary(schedule_rx(kPi, g, 5.0), g);
  CHECK(std::abs(x(0, 0)) < 1e-14);
  CHECK(std::abs(x(1, 0)) == Approx(1.0));
  for (double theta : {0.3, kPi / 2, kPi, 2.5}) {
    const Eigen::Matrix2cd z = semiclassical_unitary(schedule_rz_composite(theta, g, 5.0), g);
    CHECK(std::abs(z(0, 1)) < 1e-12);
    CHECK(std::abs(z(1, 0)) < 1e-12);
    CHECK(std::abs(z(0, 0)) == Approx(1.0));
    CHECK(std::abs(std::remainder(std::arg(z(1, 1) / z(0, 0)) - theta, 2 * kPi)) < 1e-12);
  }
  const Eigen::Matrix2cd u = semiclassical_unitary(0.7, 1.1);
  CHECK((u * u.adjoint() - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
}

TEST_CASE("exchange unitary") {
  const Eigen::MatrixXcd u = exchange_unitary(2, {0, 1}, 0.3);
  CHECK(u(1, 1).real() == Approx(0.955336489125606).epsilon(1e-14));
  CHECK(std::abs(u(2, 1) - Complex(0.0, -0.2955202066613396)) < 1e-15);
  CHECK(u(0, 0) == Complex(1.0));
  CHECK(u(3, 3) == Complex(1.0));
  CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-15);
  const Eigen::MatrixXcd u3 = exchange_unitary(3, {1, 2}, 0.3);
  CHECK(u3(2, 2).real() == Approx(0.955336489125606));  // |ege>
  CHECK(std::abs(u3(1, 2)) == Approx(0.2955202066613396));
}

TEST_CASE("exchange schedules") {
  const auto p = ExchangeParams::from(dispersive_scenario());
  CHECK(p.ratio() == Approx(0.0549457510900364).epsilon(1e-10));
  CHECK(p.abs_J() == Approx(0.00019998109914410193).epsilon(1e-10));
  CHECK(p.J() < 0.0);
  const auto iswap = schedule_iswap(p);
  CHECK(iswap.total_duration_fs() == Approx(7854.723939000934).epsilon(1e-10));
  CHECK(iswap.warnings.empty());
  const auto phases = iswap.accumulated_phases(2);
  CHECK(phases[0] == Approx(phases[1]));

  const auto w = schedule_wstate_digital(3, p);
  REQUIRE(w.segments.size() == 2);
  CHECK(w.segments[0].duration_fs == Approx(4777.034540829927).epsilon(1e-10));
  CHECK(w.segments[1].duration_fs == Approx(3927.361969500467).epsilon(1e-10));

  ExchangeParams loose = p;
  loose.dispersive_bound = 0.01;
  CHECK(schedule_partial_iswap(1.0, loose).warnings.size() == 1);
  ExchangeParams resonant = p;
  resonant.detuning = 0.0;
  CHECK_THROWS_AS(schedule_partial_iswap(1.0, resonant), DomainError);
}

TEST_CASE("W rotation angles") {
  const auto two = wstate_digital_sequence(2);
  REQUIRE(two.size() == 1);
  CHECK(two[0].angle == Approx(kPi / 4));
  const auto three = wstate_digital_sequence(3);
  CHECK(three[0].angle == Approx(std::acos(1.0 / std::sqrt(3.0))));
  CHECK(three[1].angle == Approx(kPi / 4));
  CHECK(wstate_digital_sequence(3, WAngleConvention::LiteralArcsin)[0].angle == Approx(std::asin(1.0 / std::sqrt(3.0))));
  CHECK_THROWS_AS(wstate_digital_sequence(1), DomainError);
}

TEST_CASE("W chain on the exchange model spreads one excitation evenly") {
  const auto p = ExchangeParams::from(dispersive_scenario());
  for (int n = 2; n <= 6; ++n) {
    const auto ctx = exchange_context(n);
    std::vector<HalfIndex> levels(n, kGround);
    levels[0] = kExcited;
    const auto r = execute(schedule_wstate_digital(n, p), register_state(ctx.basis, levels, 0), ctx);
    const Eigen::VectorXcd q = extract_qubits(r.final_state);
    for (int k = 0; k < n; ++k) {
      const Index index = (Index{1} << n) - 1 - (Index{1} << (n - 1 - k));
      CHECK(std::norm(q(index)) == Approx(1.0 / n).epsilon(1e-10));
    }
    CHECK(q.norm() == Approx(1.0).epsilon(1e-12));
    CHECK(r.leakage < 1e-14);
  }
}

TEST_CASE("iSWAP on the exchange model moves the excitation") {
  const auto p = ExchangeParams::from(dispersive_scenario());
  const auto ctx = exchange_context(2);
  const auto r = execute(schedule_iswap(p), register_state(ctx.basis, {kExcited, kGround}, 0), ctx);
  const Eigen::VectorXcd q = extract_qubits(r.final_state);
  CHECK(std::norm(q(2)) == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(q(2) - Complex(0.0, 1.0)) < 1e-10);
  CHECK(*execute(schedule_iswap(p), register_state(ctx.basis, {kExcited, kGround}, 0), ctx, q).fidelity ==
        Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analog W state from one photon") {
  const auto s = resonant_weak();
  const double g = coupling_constant(s).g;
  CHECK(wstate_tc_analog(3, g).total_duration_fs() == Approx(kPi / (2.0 * g * std::sqrt(3.0))));
  const BasisSpec b(3, symmetric_window(2), 1);
  const ExecutionContext ctx{s, b, std::nullopt, {}, false, false};
  const auto r = execute(wstate_tc_analog(3, g), register_state(b, {kGround, kGround, kGround}, 1), ctx);
  CHECK(photon_mean(r.final_state) < 1e-8);
  for (int e = 0; e < 3; ++e) CHECK(sideband_populations(r.final_state, e).at(kExcited) == Approx(1.0 / 3).epsilon(1e-6));
}

TEST_CASE("property: virtual Z leaves populations alone") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const BasisSpec b(2, symmetric_window(4), 2);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXcd v(b.dimension());
    for (Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
    const StateVector psi(b, v.normalized());
    const std::vector<double> phi{angle(rng), angle(rng)};
    const auto out = apply_virtual_z(psi, phi);
    CHECK((out.amplitudes().cwiseAbs() - psi.amplitudes().cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
    const auto back = apply_virtual_z(out, {-phi[0], -phi[1]});
    CHECK((back.amplitudes() - psi.amplitudes()).norm() < 1e-13);
  }
}

TEST_CASE("virtual Z phase convention") {
  const BasisSpec b(1, symmetric_window(2), 0);
  const auto e = apply_virtual_z(register_state(b, {kExcited}, 0), {0.4});
  CHECK(std::abs(e.amplitudes()(b.encode({{1}, 0})) - std::polar(1.0, -0.4)) < 1e-15);
  const auto g = apply_virtual_z(register_state(b, {kGround}, 0), {0.4});
  CHECK(std::abs(g.amplitudes()(b.encode({{0}, 0})) - std::polar(1.0, 0.4)) < 1e-15);
}

TEST_CASE("qubit-space helpers") {
  CHECK(qubit_labels(2) == std::vector<std::string>{"ee", "eg", "ge", "gg"});
  const Eigen::VectorXcd eg = qubit_product_state({0.0, kPi});
  CHECK(std::abs(eg(1) - 1.0) < 1e-15);
  const BasisSpec b(2, symmetric_window(4), 2);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd q(4);
  for (Index i = 0; i < 4; ++i) q(i) = Complex(normal(rng), normal(rng));
  q.normalize();
  const Eigen::VectorXcd electrons = embed_qubits(b, q);
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(b.dimension());
  for (Index i = 0; i < electrons.size(); ++i) full(i * b.photon_dim()) = electrons(i);
  CHECK((extract_qubits(StateVector(b, full)) - q).norm() < 1e-15);
  CHECK(qubit_fidelity(StateVector(b, full), q) == Approx(1.0).epsilon(1e-12));
  const Eigen::MatrixXcd rho = q * q.adjoint();
  CHECK(qubit_fidelity(StateVector(b, full), rho) == Approx(1.0).epsilon(1e-7));
  CHECK_THROWS(qubit_fidelity(StateVector(b, full), IdealTarget{}));
}
