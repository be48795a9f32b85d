#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "feqo/errors.hpp"
#include "feqo/hamiltonian.hpp"

using namespace feqo;
using doctest::Approx;

namespace {

Scenario resonant(double field = 5e8, double beta = 0.02) {
  const double omega = energy_to_angular(6.20);
  const double period = classical_grating_period(wavelength_nm(omega), beta);
  return {derive_electron(beta), make_drive(6.20, period, 3.0), ModeQuantization::from_amplitude(omega, field)};
}

Scenario detuned() {
  const double period = classical_grating_period(wavelength_nm(energy_to_angular(6.20)), 0.02);
  const double omega = energy_to_angular(6.2436);
  return {derive_electron(0.02), make_drive(6.2436, period), ModeQuantization::from_amplitude(omega, 7.58e6)};
}

double hbar() { return kConstants.hbar_eVfs; }

Eigen::MatrixXcd permutation(const BasisSpec& b, int i, int j) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(b.dimension(), b.dimension());
  for (Index k = 0; k < b.dimension(); ++k) {
    CompositeLabel l = b.decode(k);
    std::swap(l.slots[i], l.slots[j]);
    p(b.encode(l), k) = 1.0;
  }
  return p;
}

}  // namespace

TEST_CASE("model names") {
  for (auto k : {ModelKind::PinemFull, ModelKind::JcLab, ModelKind::JcInteraction, ModelKind::TcLab,
                 ModelKind::DispersiveXy}) {
    CHECK(model_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(model_kind_from_string("quantum_rabi"));
}

TEST_CASE("PINEM ladder matrix elements") {
  const Scenario s = resonant();
  const double g = coupling_constant(s).g;
  const BasisSpec b(1, symmetric_window(6), 4);
  const Eigen::MatrixXcd h = build_pinem(s, b).dense();
  for (int slot = 1; slot < b.sideband_count(); ++slot) {
    for (int m = 0; m + 1 <= b.fock_cutoff(); ++m) {
      const Index upper = b.encode({{slot}, m});
      const Index lower = b.encode({{slot - 1}, m + 1});
      CHECK(std::abs(h(upper, lower) - hbar() * g * std::sqrt(m + 1.0)) < 1e-15);
    }
  }
  // Free part.
  const Index i = b.encode({{4}, 2});
  const double n = b.sidebands()[4].value();
  const double expected = n * hbar() * s.qubit_frequency() + n * n * hbar() * coupling_constant(s).omega_rec +
                          2.0 * s.drive.photon_energy_eV;
  CHECK(h(i, i).real() == Approx(expected).epsilon(1e-12));
  CHECK(build_pinem(s, b).matrix().nonZeros() <= b.dimension() * 3);
}

TEST_CASE("zero coupling has no matrix elements") {
  const BasisSpec b(1, symmetric_window(2), 3);
  CHECK(build_jc_interaction(0.0, b).dense().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("PINEM restricted to the qubit pair is JC up to a constant") {
  const Scenario s = resonant();
  const BasisSpec b(1, symmetric_window(2), 6);
  const Eigen::MatrixXcd diff = build_pinem(s, b).dense() - build_jc(s, b).dense();
  const Complex shift = diff(0, 0);
  CHECK((diff - shift * Eigen::MatrixXcd::Identity(b.dimension(), b.dimension())).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("JC and JC interaction") {
  const Scenario s = resonant();
  const double g = coupling_constant(s).g;
  const BasisSpec b(1, symmetric_window(2), 5);
  const Eigen::MatrixXcd jc = build_jc(s, b).dense();
  const Eigen::MatrixXcd inter = build_jc_interaction(g, b).dense();
  for (int m = 0; m < b.fock_cutoff(); ++m) {
    CHECK(std::abs(jc(b.encode({{1}, m}), b.encode({{0}, m + 1})) - hbar() * g * std::sqrt(m + 1.0)) < 1e-15);
  }
  CHECK(inter.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(inter(b.encode({{1}, 0}), b.encode({{0}, 1})) - hbar() * g) < 1e-15);
  // At resonance the uncoupled |e,m> and |g,m+1> are degenerate.
  CHECK(jc(b.encode({{1}, 2}), b.encode({{1}, 2})).real() ==
        Approx(jc(b.encode({{0}, 3}), b.encode({{0}, 3})).real()).epsilon(1e-12));
  const Eigen::MatrixXcd off = jc - Eigen::MatrixXcd(jc.diagonal().asDiagonal());
  CHECK((off - inter).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(build_jc(s, BasisSpec(1, symmetric_window(4), 2)), DomainError);
}

TEST_CASE("drive phase enters the photon-absorbing term") {
  const BasisSpec b(1, symmetric_window(2), 2);
  const double phase = 0.8;
  const Eigen::MatrixXcd h = build_jc_interaction(0.1, b, phase).dense();
  const Complex up = h(b.encode({{1}, 0}), b.encode({{0}, 1}));
  CHECK(std::abs(up - hbar() * 0.1 * std::polar(1.0, phase)) < 1e-15);
}

TEST_CASE("Tavis-Cummings") {
  const Scenario s = resonant(7.48e6);
  const double g = coupling_constant(s).g;
  const BasisSpec one(1, symmetric_window(2), 3);
  CHECK((build_tc(s, one).dense() - build_jc(s, one).dense()).cwiseAbs().maxCoeff() < 1e-15);

  const BasisSpec three(3, symmetric_window(2), 2);
  const Eigen::MatrixXcd h = build_tc(s, three).dense();
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
    const Eigen::MatrixXcd p = permutation(three, i, j);
    CHECK((p.adjoint() * h * p - h).cwiseAbs().maxCoeff() < 1e-13);
  }
  Eigen::VectorXcd bright = Eigen::VectorXcd::Zero(three.dimension());
  for (int q = 0; q < 3; ++q) {
    std::vector<int> slots(3, 0);
    slots[q] = 1;
    bright(three.encode({slots, 0})) = 1.0 / std::sqrt(3.0);
  }
  Eigen::VectorXcd ground1 = Eigen::VectorXcd::Zero(three.dimension());
  ground1(three.encode({{0, 0, 0}, 1})) = 1.0;
  CHECK(std::abs(bright.dot(h * ground1) - hbar() * g * std::sqrt(3.0)) < 1e-15);
}

TEST_CASE("dispersive exchange") {
  const BasisSpec b(2, symmetric_window(2), 0);
  const double J = 2e-4;
  const Eigen::MatrixXcd h = build_dispersive_xy(J, b).dense();
  const Index ee = b.encode({{1, 1}, 0}), eg = b.encode({{1, 0}, 0}), ge = b.encode({{0, 1}, 0}),
              gg = b.encode({{0, 0}, 0});
  CHECK(std::abs(h(eg, ge) - hbar() * J) < 1e-18);
  CHECK(h.row(ee).cwiseAbs().maxCoeff() == 0.0);
  CHECK(h.row(gg).cwiseAbs().maxCoeff() == 0.0);
  CHECK(commutator_norm(build_dispersive_xy(J, b), total_sigma_z(b)) < 1e-12);
  CHECK(build_dispersive_xy(0.0, b).dense().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_dispersive_xy(J, BasisSpec(1, symmetric_window(2), 0)), DomainError);

  // Through build_model the exchange rate carries the sign of the detuning.
  const auto d = detuned();
  const auto c = coupling_constant(d);
  const Eigen::MatrixXcd hm = build_model(ModelKind::DispersiveXy, d, b).dense();
  CHECK(hm(eg, ge).real() == Approx(hbar() * c.g * c.g / c.detuning).epsilon(1e-12));
  CHECK_THROWS_AS(build_model(ModelKind::DispersiveXy, resonant(), b), DomainError);
}

TEST_CASE("excitation observable") {
  const BasisSpec b(2, symmetric_window(4), 3);
  const Eigen::MatrixXcd n = excitation_observable(b).dense();
  CHECK(n(b.encode({{1, 1}, 0}), b.encode({{1, 1}, 0})).real() == Approx(-1.0));
  CHECK(n(b.encode({{3, 0}, 2}), b.encode({{3, 0}, 2})).real() == Approx(1.5 - 1.5 + 2.0));

  const BasisSpec one(1, symmetric_window(2), 170);
  std::vector<ElectronFactor> g{sideband_state(one.sidebands(), kGround)};
  const auto psi = tensor_product(one, g, coherent_state(10.0, 170));
  CHECK(excitation_observable(one).expectation(psi.amplitudes()) == Approx(-0.5 + 100.0).epsilon(1e-8));
}

TEST_CASE("property: every builder is exactly Hermitian") {
  const Scenario s = resonant();
  const auto d = detuned();
  CouplingOptions phased;
  phased.drive_phase = 1.3;
  CouplingOptions exact;
  exact.exact_kn = true;
  CHECK(hermiticity_defect(build_pinem(s, BasisSpec(1, symmetric_window(6), 10), phased)) == 0.0);
  CHECK(hermiticity_defect(build_pinem(s, BasisSpec(2, symmetric_window(4), 3), exact)) == 0.0);
  CHECK(hermiticity_defect(build_jc(s, BasisSpec(1, symmetric_window(2), 10), phased)) == 0.0);
  CHECK(hermiticity_defect(build_jc_interaction(0.3, BasisSpec(1, symmetric_window(2), 10), 0.4)) == 0.0);
  CHECK(hermiticity_defect(build_tc(d, BasisSpec(3, symmetric_window(2), 3))) == 0.0);
  CHECK(hermiticity_defect(build_dispersive_xy(1e-3, BasisSpec(3, symmetric_window(2), 0), {0, 2})) == 0.0);
  CHECK(hermiticity_defect(build_model(ModelKind::TcLab, d, BasisSpec(2, symmetric_window(2), 2))) == 0.0);
}

TEST_CASE("property: excitation conservation at dimension <= 200") {
  const Scenario s = resonant();
  const auto d = detuned();
  const BasisSpec full(1, symmetric_window(6), 20);      // 126
  const BasisSpec pair(2, symmetric_window(4), 9);       // 160
  const BasisSpec qubit(1, symmetric_window(2), 50);     // 102
  const BasisSpec three(3, symmetric_window(2), 20);     // 168
  CouplingOptions exact;
  exact.exact_kn = true;
  CHECK(commutator_norm(build_pinem(s, full), excitation_observable(full)) < 1e-12);
  CHECK(commutator_norm(build_pinem(s, pair, exact), excitation_observable(pair)) < 1e-12);
  CHECK(commutator_norm(build_jc(s, qubit), excitation_observable(qubit)) < 1e-12);
  CHECK(commutator_norm(build_jc_interaction(0.2, qubit), excitation_observable(qubit)) < 1e-12);
  CHECK(commutator_norm(build_tc(d, three), excitation_observable(three)) < 1e-12);
  CHECK(commutator_norm(build_model(ModelKind::PinemFull, s, full), excitation_observable(full)) < 1e-12);
}

TEST_CASE("exact-k mode rescales the ladder") {
  const Scenario s = resonant();
  const BasisSpec b(1, symmetric_window(4), 2);
  CouplingOptions exact;
  exact.exact_kn = true;
  const Eigen::MatrixXcd plain = build_pinem(s, b).dense();
  const Eigen::MatrixXcd scaled = build_pinem(s, b, exact).dense();
  const double ratio_q = s.drive.q_per_nm * 1e9 / s.electron.k0_per_m;
  for (int slot = 1; slot < b.sideband_count(); ++slot) {
    const Index up = b.encode({{slot}, 0}), down = b.encode({{slot - 1}, 1});
    const double n = b.sidebands()[slot].value();
    CHECK(std::abs(scaled(up, down) / plain(up, down) - (1.0 + (n - 0.5) * ratio_q)) < 1e-12);
  }
}

TEST_CASE("rotating frame") {
  const Scenario s = resonant();
  const BasisSpec b(1, symmetric_window(2), 4);
  const HermitianOperator lab = build_jc(s, b);
  const HermitianOperator rot = rotating_frame(lab, s.qubit_frequency());
  CHECK(rot.dense().diagonal().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(commutator_norm(rot, excitation_observable(b)) < 1e-12);
}
