#include <doctest.h>

#include <cmath>
#include <random>

#include "feqo/errors.hpp"
#include "feqo/hamiltonian.hpp"
#include "feqo/propagate.hpp"

using namespace feqo;
using doctest::Approx;

namespace {

StateVector excited_vacuum(const BasisSpec& b) {
  std::vector<ElectronFactor> e{sideband_state(b.sidebands(), kExcited)};
  return tensor_product(b, e, fock_state(0, b.fock_cutoff()));
}

Scenario strong_resonant() {
  const double omega = energy_to_angular(6.20);
  const double period = classical_grating_period(wavelength_nm(omega), 0.02);
  return {derive_electron(0.02), make_drive(6.20, period, 3.0), ModeQuantization::from_amplitude(omega, 5e8)};
}

HermitianOperator random_hermitian(const BasisSpec& b, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  HermitianOperator::Builder builder(b);
  for (Index i = 0; i < b.dimension(); ++i) {
    builder.add_diagonal(i, 0.1 * normal(rng));
    for (Index j = i + 1; j < b.dimension(); ++j) builder.add_coupling(i, j, 0.05 * Complex(normal(rng), normal(rng)));
  }
  return std::move(builder).build();
}

}  // namespace

TEST_CASE("zero Hamiltonian is the identity") {
  const BasisSpec b(1, symmetric_window(2), 3);
  const auto psi = excited_vacuum(b);
  const auto h = build_jc_interaction(0.0, b);
  PropagatorConfig cfg;
  cfg.step_dt_fs = 1.0;
  const auto traj = propagate(h, psi, 50.0, cfg);
  CHECK((traj.final_state->amplitudes() - psi.amplitudes()).norm() == 0.0);
  cfg.method = PropagationMethod::EigenOracle;
  CHECK((propagate(h, psi, 50.0, cfg).final_state->amplitudes() - psi.amplitudes()).norm() < 1e-15);
}

TEST_CASE("vacuum Rabi oscillation") {
  const double g = 0.05;
  const BasisSpec b(1, symmetric_window(2), 2);
  const auto h = build_jc_interaction(g, b);
  PropagatorConfig cfg;
  cfg.sample_every_fs = 1.0;
  const auto traj = propagate(h, excited_vacuum(b), 100.0, cfg);
  REQUIRE(traj.samples.size() == 101);
  const int e_slot = b.slot_of(kExcited);
  for (const auto& s : traj.samples) {
    const double expected = std::pow(std::cos(g * s.t_fs), 2);
    CHECK(std::abs(s.populations[0][e_slot] - expected) < 1e-7);
    CHECK(s.photon_mean == Approx(1.0 - expected).epsilon(1e-6));
    CHECK(std::abs(s.norm - 1.0) < 1e-9);
  }
  // Samples carry the global time offset.
  const auto shifted = propagate(h, excited_vacuum(b), 10.0, cfg, 5.0);
  CHECK(shifted.samples.front().t_fs == 5.0);
  CHECK(shifted.samples.back().t_fs == 15.0);
}

TEST_CASE("default sampling gives 200 intervals") {
  const BasisSpec b(1, symmetric_window(2), 2);
  const auto traj = propagate(build_jc_interaction(0.05, b), excited_vacuum(b), 40.0);
  CHECK(traj.samples.size() == 201);
  CHECK(traj.samples.back().t_fs == Approx(40.0));
}

TEST_CASE("spectral radius estimate") {
  const BasisSpec b(1, symmetric_window(2), 8);
  const double g = 0.1;
  const double rho = estimate_spectral_radius(build_jc_interaction(g, b), 200);
  CHECK(rho == Approx(g * std::sqrt(8.0)).epsilon(1e-3));
}

TEST_CASE("fixed step agrees with the eigen oracle on the full model") {
  const auto s = strong_resonant();
  const BasisSpec b(1, symmetric_window(6), 37);
  std::vector<ElectronFactor> e{sideband_state(b.sidebands(), kExcited)};
  const auto psi = tensor_product(b, e, coherent_state(3.0, 37));
  const auto h = build_model(ModelKind::PinemFull, s, b);
  PropagatorConfig fixed;
  PropagatorConfig exact;
  exact.method = PropagationMethod::EigenOracle;
  const auto a = propagate(h, psi, 30.0, fixed);
  const auto c = propagate(h, psi, 30.0, exact);
  CHECK((a.final_state->amplitudes() - c.final_state->amplitudes()).norm() < 1e-6);
  REQUIRE(a.samples.size() == c.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    for (int slot = 0; slot < b.sideband_count(); ++slot)
      CHECK(std::abs(a.samples[k].populations[0][slot] - c.samples[k].populations[0][slot]) < 1e-6);
  }
}

TEST_CASE("property: propagation composes and stays unitary") {
  std::mt19937_64 rng(7);
  const BasisSpec b(2, symmetric_window(2), 4);  // dimension 20
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = random_hermitian(b, rng);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(b.dimension());
    for (Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
    const StateVector psi(b, v.normalized());
    const EigenPropagator u(h);
    const auto once = u.apply(psi.amplitudes(), 130.0);
    const auto twice = u.apply(u.apply(psi.amplitudes(), 50.0), 80.0);
    CHECK((once - twice).norm() < 1e-11);
    CHECK(once.norm() == Approx(1.0).epsilon(1e-12));
    CHECK((u.apply(once, -130.0) - psi.amplitudes()).norm() < 1e-11);

    PropagatorConfig cfg;
    cfg.sample_every_fs = 50.0;
    const auto traj = propagate(h, psi, 200.0, cfg);
    for (const auto& s : traj.samples) CHECK(std::abs(s.norm - 1.0) < 1e-8);
    CHECK((traj.final_state->amplitudes() - u.apply(psi.amplitudes(), 200.0)).norm() < 1e-6);
  }
}

TEST_CASE("norm drift beyond tolerance is reported") {
  const BasisSpec b(1, symmetric_window(2), 2);
  PropagatorConfig cfg;
  cfg.max_phase_per_step = 2.5;
  CHECK_THROWS_AS(propagate(build_jc_interaction(0.05, b), excited_vacuum(b), 1000.0, cfg), ToleranceError);
}

TEST_CASE("invalid inputs") {
  const BasisSpec b(1, symmetric_window(2), 2);
  const auto h = build_jc_interaction(0.05, b);
  CHECK_THROWS_AS(propagate(h, excited_vacuum(b), -1.0), DomainError);
  PropagatorConfig cfg;
  cfg.sample_every_fs = -1.0;
  CHECK_THROWS_AS(propagate(h, excited_vacuum(b), 1.0, cfg), DomainError);
  const BasisSpec other(1, symmetric_window(2), 3);
  CHECK_THROWS(propagate(h, excited_vacuum(other), 1.0));
  CHECK_THROWS_AS(EigenPropagator(h, 4), DomainError);
}

TEST_CASE("trajectory append drops the repeated joint sample") {
  const BasisSpec b(1, symmetric_window(2), 2);
  const auto h = build_jc_interaction(0.05, b);
  PropagatorConfig cfg;
  cfg.sample_every_fs = 1.0;
  auto first = propagate(h, excited_vacuum(b), 5.0, cfg);
  const auto second = propagate(h, *first.final_state, 5.0, cfg, 5.0);
  first.append(second);
  CHECK(first.samples.size() == 11);
  CHECK(first.samples.back().t_fs == 10.0);
}
