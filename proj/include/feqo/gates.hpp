#pragma once

// Gate scheduling, execution on a chosen model, readout frame corrections and
// scoring against ideal evolutions.
//
// Qubit-space vectors and matrices use the ordering (e, g) per qubit with the
// first electron slowest, so index 0 of a two-qubit vector is |ee>.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "feqo/hamiltonian.hpp"
#include "feqo/hilbert.hpp"
#include "feqo/propagate.hpp"

namespace feqo {

struct Segment {
  ModelKind model = ModelKind::JcInteraction;
  double duration_fs = 0;
  double drive_phase = 0;            // rad, enters the coupling as e^{i phase}
  Complex coherent_alpha{0.0, 0.0};  // equivalent drive amplitude |alpha| e^{i phase}
  double omega_L = 0;                // rad/fs; 0 keeps the scenario's laser frequency
  std::vector<int> targets;          // coupled electrons; empty means all
  std::string label;
};

// U_Z(phi) = diag(e^{-i phi}, e^{i phi}) on (e, g), i.e. exp(-2i phi n) on sideband n.
struct VirtualZ {
  int qubit = 0;
  double phi = 0;
  int after_segment = -1;  // applied once this segment has run; -1 means at final readout
  // Compensates the cavity-induced level shift of the physical model. Skipped
  // when the segment runs on the effective exchange model, which has no such shift.
  bool stark = false;
  std::string reason;
};

struct GateSchedule {
  std::vector<Segment> segments;
  std::vector<VirtualZ> virtual_z_log;
  std::vector<std::string> warnings;

  double total_duration_fs() const;
  // Net frame phase per qubit, summed over the log.
  std::vector<double> accumulated_phases(int num_qubits) const;
  GateSchedule& then(const GateSchedule& next);
};

// T = |theta| / (2 g |alpha|); negative theta flips the drive phase by pi.
GateSchedule schedule_rx(double theta, double g, Complex alpha, double omega_L = 0.0);
// Same duration with the drive phase advanced by pi/2.
GateSchedule schedule_ry(double theta, double g, Complex alpha, double omega_L = 0.0);
// Rx(pi/2), Ry(theta), Rx(-pi/2) in time order; equals diag(e^{-i theta/2}, e^{i theta/2}) up to a global phase.
GateSchedule schedule_rz_composite(double theta, double g, Complex alpha, double omega_L = 0.0);

// Dispersive exchange parameters derived from a detuned scenario.
struct ExchangeParams {
  double g = 0;          // |g|, rad/fs
  double detuning = 0;   // v0 q - omega_L, signed, rad/fs
  double omega_L = 0;    // rad/fs
  double dispersive_bound = 0.1;

  static ExchangeParams from(const Scenario& scenario, double dispersive_bound = 0.1);
  double J() const { return g * g / detuning; }                    // signed
  double abs_J() const { return g * g / std::abs(detuning); }
  double ratio() const { return g / std::abs(detuning); }
};

// Exchange by `rotation_angle` = |J| t on the electron pair. Attaches the
// per-qubit Stark frame correction phi = -chi T / 2 with chi = g^2 / detuning.
GateSchedule schedule_partial_iswap(double rotation_angle, const ExchangeParams& p, std::pair<int, int> pair = {0, 1});
// Partial iSWAP at pi/2 plus U_Z(|J| T) on both qubits.
GateSchedule schedule_iswap(const ExchangeParams& p, std::pair<int, int> pair = {0, 1});

enum class WAngleConvention { AmplitudeRetention, LiteralArcsin };

struct PairRotation {
  int first = 0;
  int second = 1;
  double angle = 0;  // |J| t
};

// Chain (k, k+1) with angle arccos(1/sqrt(N-k+1)), or arcsin(...) for the literal variant.
std::vector<PairRotation> wstate_digital_sequence(int num_qubits,
                                                  WAngleConvention convention = WAngleConvention::AmplitudeRetention);
// Partial iSWAP chain followed by U_Z(pi/2) on the second qubit.
GateSchedule schedule_wstate_digital(int num_qubits, const ExchangeParams& p,
                                     WAngleConvention convention = WAngleConvention::AmplitudeRetention);
// One resonant Tavis-Cummings segment of length pi / (2 g sqrt(N)).
GateSchedule wstate_tc_analog(int num_qubits, double g);

// Readout frame rotations on a state. Populations are untouched.
StateVector apply_virtual_z(const StateVector& state, const std::vector<double>& phi_per_qubit);
GateSchedule& apply_virtual_z(GateSchedule& schedule, int qubit, double phi, std::string reason);

// Semiclassical single-qubit propagator of a resonant drive with the photon
// operator replaced by alpha: exp(-i g |alpha| T (cos(phase) X - sin(phase) Y)) on (e, g).
Eigen::Matrix2cd semiclassical_unitary(double drive_phase, double rotation_angle);
Eigen::Matrix2cd semiclassical_unitary(const GateSchedule& schedule, double g);

// exp(-i Jt (sigma_+ sigma_- + h.c.)) on qubits (i, j) of an n-qubit register.
Eigen::MatrixXcd exchange_unitary(int num_qubits, std::pair<int, int> pair, double Jt);

// Qubit-space helpers.
Eigen::VectorXcd qubit_product_state(const std::vector<double>& thetas);
Eigen::VectorXcd embed_qubits(const BasisSpec& basis, const Eigen::VectorXcd& qubit_vector);
Eigen::MatrixXcd embed_qubits(const BasisSpec& basis, const Eigen::MatrixXcd& qubit_density);
// Amplitudes on the computational labels with the photon in vacuum, in qubit ordering.
Eigen::VectorXcd extract_qubits(const StateVector& state);
// Electron state restricted to the computational block and renormalized.
DensityOperator computational_block(const DensityOperator& electrons, const BasisSpec& basis);
// Labels of the computational block, "e..e" first.
std::vector<std::string> qubit_labels(int num_qubits);

using IdealTarget = std::variant<std::monostate, Eigen::VectorXcd, Eigen::MatrixXcd>;

struct ExecutionContext {
  Scenario scenario;
  BasisSpec basis;
  std::optional<ModelKind> model_override;
  PropagatorConfig propagator;
  bool exact_kn = false;
  bool record_trajectory = true;
};

struct GateResult {
  StateVector final_state;
  DensityOperator reduced_qubits;  // all electrons, full sideband window
  std::optional<double> fidelity;
  double entropy_nats = 0;
  double leakage = 0;
  double wall_time_fs = 0;
  Trajectory trajectory;
  std::vector<std::string> warnings;
};

GateResult execute(const GateSchedule& schedule, const StateVector& initial, const ExecutionContext& ctx,
                   const IdealTarget& ideal_target = {});

// Fidelity of the electron state of `state` against a qubit-space target.
double qubit_fidelity(const StateVector& state, const IdealTarget& target);

}  // namespace feqo
