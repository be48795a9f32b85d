#include "feqo/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "feqo/analytics.hpp"
#include "feqo/errors.hpp"

namespace feqo {

namespace {

constexpr double kPi = std::numbers::pi;

void require_drive(double g, Complex alpha) {
  if (!(g > 0.0)) throw DomainError("single-qubit gates need g > 0");
  if (!(std::abs(alpha) > 0.0)) throw DomainError("single-qubit gates need |alpha| > 0");
}

GateSchedule single_rotation(double theta, double g, Complex alpha, double omega_L, double base_phase,
                             const std::string& name) {
  require_drive(g, alpha);
  const double phase = base_phase + (theta < 0.0 ? kPi : 0.0);
  Segment s;
  s.model = ModelKind::PinemFull;
  s.duration_fs = std::abs(theta) / (2.0 * g * std::abs(alpha));
  s.drive_phase = phase;
  s.coherent_alpha = std::polar(std::abs(alpha), phase);
  s.omega_L = omega_L;
  std::ostringstream label;
  label << name << "(" << theta << ")";
  s.label = label.str();
  GateSchedule out;
  out.segments.push_back(std::move(s));
  return out;
}

int qubit_count(const BasisSpec& basis) { return basis.num_electrons(); }

}  // namespace

double GateSchedule::total_duration_fs() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration_fs;
  return t;
}

std::vector<double> GateSchedule::accumulated_phases(int num_qubits) const {
  std::vector<double> phi(num_qubits, 0.0);
  for (const auto& z : virtual_z_log) {
    if (z.qubit < 0 || z.qubit >= num_qubits) throw std::out_of_range("virtual Z on a qubit outside the register");
    phi[z.qubit] += z.phi;
  }
  return phi;
}

GateSchedule& GateSchedule::then(const GateSchedule& next) {
  const int offset = static_cast<int>(segments.size());
  segments.insert(segments.end(), next.segments.begin(), next.segments.end());
  for (VirtualZ z : next.virtual_z_log) {
    if (z.after_segment >= 0) z.after_segment += offset;
    virtual_z_log.push_back(std::move(z));
  }
  warnings.insert(warnings.end(), next.warnings.begin(), next.warnings.end());
  return *this;
}

GateSchedule schedule_rx(double theta, double g, Complex alpha, double omega_L) {
  return single_rotation(theta, g, alpha, omega_L, 0.0, "Rx");
}

GateSchedule schedule_ry(double theta, double g, Complex alpha, double omega_L) {
  return single_rotation(theta, g, alpha, omega_L, 0.5 * kPi, "Ry");
}

GateSchedule schedule_rz_composite(double theta, double g, Complex alpha, double omega_L) {
  GateSchedule s = schedule_rx(0.5 * kPi, g, alpha, omega_L);
  s.then(schedule_ry(theta, g, alpha, omega_L));
  s.then(schedule_rx(-0.5 * kPi, g, alpha, omega_L));
  return s;
}

ExchangeParams ExchangeParams::from(const Scenario& scenario, double dispersive_bound) {
  const DerivedCoupling c = coupling_constant(scenario);
  ExchangeParams p;
  p.g = c.g;
  p.detuning = c.detuning;
  p.omega_L = scenario.drive.omega_L;
  p.dispersive_bound = dispersive_bound;
  return p;
}

GateSchedule schedule_partial_iswap(double rotation_angle, const ExchangeParams& p, std::pair<int, int> pair) {
  if (!(std::abs(p.detuning) > 0.0)) throw DomainError("partial iSWAP needs a nonzero detuning");
  if (!(p.g > 0.0)) throw DomainError("partial iSWAP needs g > 0");
  if (!(rotation_angle >= 0.0)) throw DomainError("partial iSWAP rotation angle must be >= 0");
  GateSchedule out;
  if (p.ratio() > p.dispersive_bound) {
    std::ostringstream msg;
    msg << "|g/Delta| = " << p.ratio() << " exceeds the dispersive bound " << p.dispersive_bound;
    out.warnings.push_back(msg.str());
  }
  Segment s;
  s.model = ModelKind::TcLab;
  s.duration_fs = rotation_angle / p.abs_J();
  s.omega_L = p.omega_L;
  s.targets = {pair.first, pair.second};
  std::ostringstream label;
  label << "iSWAP(" << rotation_angle << ")[" << pair.first + 1 << "," << pair.second + 1 << "]";
  s.label = label.str();
  const double chi = p.g * p.g / p.detuning;
  for (int q : {pair.first, pair.second}) {
    out.virtual_z_log.push_back({q, -0.5 * chi * s.duration_fs, 0, true, "dispersive level shift"});
  }
  out.segments.push_back(std::move(s));
  return out;
}

GateSchedule schedule_iswap(const ExchangeParams& p, std::pair<int, int> pair) {
  GateSchedule out = schedule_partial_iswap(0.5 * kPi, p, pair);
  const double phi = p.abs_J() * out.total_duration_fs();
  for (int q : {pair.first, pair.second}) out.virtual_z_log.push_back({q, phi, 0, false, "iSWAP frame"});
  return out;
}

std::vector<PairRotation> wstate_digital_sequence(int num_qubits, WAngleConvention convention) {
  if (num_qubits < 2) throw DomainError("W state needs at least two qubits");
  std::vector<PairRotation> seq;
  for (int k = 1; k < num_qubits; ++k) {
    const double x = 1.0 / std::sqrt(static_cast<double>(num_qubits - k + 1));
    const double angle = convention == WAngleConvention::AmplitudeRetention ? std::acos(x) : std::asin(x);
    seq.push_back({k - 1, k, angle});
  }
  return seq;
}

GateSchedule schedule_wstate_digital(int num_qubits, const ExchangeParams& p, WAngleConvention convention) {
  GateSchedule out;
  for (const auto& r : wstate_digital_sequence(num_qubits, convention)) {
    out.then(schedule_partial_iswap(r.angle, p, {r.first, r.second}));
  }
  out.virtual_z_log.push_back({1, 0.5 * kPi, static_cast<int>(out.segments.size()) - 1, false, "W phase"});
  return out;
}

GateSchedule wstate_tc_analog(int num_qubits, double g) {
  if (num_qubits < 1) throw DomainError("analog W state needs at least one qubit");
  if (!(g > 0.0)) throw DomainError("analog W state needs g > 0");
  Segment s;
  s.model = ModelKind::TcLab;
  s.duration_fs = kPi / (2.0 * g * std::sqrt(static_cast<double>(num_qubits)));
  s.label = "TC bright-state transfer";
  GateSchedule out;
  out.segments.push_back(std::move(s));
  return out;
}

StateVector apply_virtual_z(const StateVector& state, const std::vector<double>& phi) {
  const auto& basis = state.basis();
  if (static_cast<int>(phi.size()) != basis.num_electrons()) {
    throw std::invalid_argument("one virtual Z phase per electron expected");
  }
  Eigen::VectorXcd amps = state.amplitudes();
  const auto& window = basis.sidebands();
  for (Index i = 0; i < basis.dimension(); ++i) {
    const CompositeLabel label = basis.decode(i);
    double angle = 0.0;
    for (int e = 0; e < basis.num_electrons(); ++e) angle -= 2.0 * phi[e] * window[label.slots[e]].value();
    if (angle != 0.0) amps(i) *= std::polar(1.0, angle);
  }
  return StateVector(basis, std::move(amps), 1.0);
}

GateSchedule& apply_virtual_z(GateSchedule& schedule, int qubit, double phi, std::string reason) {
  schedule.virtual_z_log.push_back({qubit, phi, -1, false, std::move(reason)});
  return schedule;
}

Eigen::Matrix2cd semiclassical_unitary(double drive_phase, double rotation_angle) {
  const double c = std::cos(0.5 * rotation_angle);
  const double s = std::sin(0.5 * rotation_angle);
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd u;
  u << c, -i * s * std::polar(1.0, drive_phase), -i * s * std::polar(1.0, -drive_phase), c;
  return u;
}

Eigen::Matrix2cd semiclassical_unitary(const GateSchedule& schedule, double g) {
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  for (const auto& s : schedule.segments) {
    const double angle = 2.0 * g * std::abs(s.coherent_alpha) * s.duration_fs;
    u = semiclassical_unitary(s.drive_phase, angle) * u;
  }
  return u;
}

Eigen::MatrixXcd exchange_unitary(int num_qubits, std::pair<int, int> pair, double Jt) {
  const Index dim = Index{1} << num_qubits;
  const auto [a, b] = pair;
  const int shift_a = num_qubits - 1 - a;
  const int shift_b = num_qubits - 1 - b;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  const Complex mix(0.0, -std::sin(Jt));
  for (Index k = 0; k < dim; ++k) {
    const bool bit_a = (k >> shift_a) & 1;
    const bool bit_b = (k >> shift_b) & 1;
    if (bit_a == bit_b) continue;
    const Index partner = k ^ ((Index{1} << shift_a) | (Index{1} << shift_b));
    u(k, k) = std::cos(Jt);
    u(k, partner) = mix;
  }
  return u;
}

Eigen::VectorXcd qubit_product_state(const std::vector<double>& thetas) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  for (double t : thetas) {
    Eigen::VectorXcd q(2);
    q << std::cos(0.5 * t), std::sin(0.5 * t);
    Eigen::VectorXcd next(psi.size() * 2);
    for (Index i = 0; i < psi.size(); ++i) next.segment(2 * i, 2) = psi(i) * q;
    psi = std::move(next);
  }
  return psi;
}

namespace {

std::vector<Index> qubit_to_electron_index(const BasisSpec& basis) {
  const int n = qubit_count(basis);
  const int slots[2] = {basis.slot_of(kExcited), basis.slot_of(kGround)};
  const Index w = basis.sideband_count();
  std::vector<Index> map(Index{1} << n);
  for (Index k = 0; k < static_cast<Index>(map.size()); ++k) {
    Index flat = 0;
    for (int q = 0; q < n; ++q) flat = flat * w + slots[(k >> (n - 1 - q)) & 1];
    map[k] = flat;
  }
  return map;
}

Index electron_space_dim(const BasisSpec& basis) {
  Index d = 1;
  for (int e = 0; e < basis.num_electrons(); ++e) d *= basis.sideband_count();
  return d;
}

}  // namespace

Eigen::VectorXcd embed_qubits(const BasisSpec& basis, const Eigen::VectorXcd& v) {
  const auto map = qubit_to_electron_index(basis);
  if (v.size() != static_cast<Index>(map.size())) throw std::invalid_argument("qubit vector size mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(electron_space_dim(basis));
  for (Index k = 0; k < v.size(); ++k) out(map[k]) = v(k);
  return out;
}

Eigen::MatrixXcd embed_qubits(const BasisSpec& basis, const Eigen::MatrixXcd& rho) {
  const auto map = qubit_to_electron_index(basis);
  if (rho.rows() != static_cast<Index>(map.size()) || rho.cols() != rho.rows()) {
    throw std::invalid_argument("qubit density size mismatch");
  }
  const Index d = electron_space_dim(basis);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (Index i = 0; i < rho.rows(); ++i)
    for (Index j = 0; j < rho.cols(); ++j) out(map[i], map[j]) = rho(i, j);
  return out;
}

Eigen::VectorXcd extract_qubits(const StateVector& state) {
  const auto& basis = state.basis();
  const auto map = qubit_to_electron_index(basis);
  Eigen::VectorXcd out(static_cast<Index>(map.size()));
  for (Index k = 0; k < out.size(); ++k) out(k) = state.amplitudes()(map[k] * basis.photon_dim());
  return out;
}

DensityOperator computational_block(const DensityOperator& electrons, const BasisSpec& basis) {
  const auto map = qubit_to_electron_index(basis);
  const Index n = static_cast<Index>(map.size());
  if (electrons.dimension() != electron_space_dim(basis)) throw std::invalid_argument("electron density size mismatch");
  Eigen::MatrixXcd block(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) block(i, j) = electrons.matrix()(map[i], map[j]);
  const double tr = block.trace().real();
  if (!(tr > 0.0)) throw ToleranceError("no population left in the computational subspace");
  block /= tr;
  block = 0.5 * (block + block.adjoint()).eval();
  return DensityOperator("qubits", std::vector<Index>(qubit_count(basis), 2), std::move(block));
}

std::vector<std::string> qubit_labels(int num_qubits) {
  std::vector<std::string> labels;
  for (Index k = 0; k < (Index{1} << num_qubits); ++k) {
    std::string s;
    for (int q = 0; q < num_qubits; ++q) s += ((k >> (num_qubits - 1 - q)) & 1) ? 'g' : 'e';
    labels.push_back(std::move(s));
  }
  return labels;
}

double qubit_fidelity(const StateVector& state, const IdealTarget& target) {
  const auto& basis = state.basis();
  const DensityOperator rho = partial_trace(state, SubsystemSelector::all_electrons(basis));
  if (const auto* v = std::get_if<Eigen::VectorXcd>(&target)) {
    const Eigen::VectorXcd t = embed_qubits(basis, *v).normalized();
    return std::clamp(t.dot(rho.matrix() * t).real(), 0.0, 1.0);
  }
  if (const auto* m = std::get_if<Eigen::MatrixXcd>(&target)) {
    const DensityOperator sigma("target", rho.dims(), embed_qubits(basis, *m));
    return uhlmann_fidelity(rho, sigma);
  }
  throw std::invalid_argument("no ideal target given");
}

GateResult execute(const GateSchedule& schedule, const StateVector& initial, const ExecutionContext& ctx,
                   const IdealTarget& ideal_target) {
  if (!(initial.basis() == ctx.basis)) throw std::invalid_argument("initial state does not live on the context basis");
  const double total = schedule.total_duration_fs();
  PropagatorConfig cfg = ctx.propagator;
  if (cfg.sample_every_fs == 0.0) cfg.sample_every_fs = total > 0.0 ? total / 200.0 : 1.0;
  if (!ctx.record_trajectory) cfg.sample_every_fs = std::max(total, 1.0);

  const int n = ctx.basis.num_electrons();
  auto apply_frames = [&](StateVector psi, int after_segment, bool effective_model) {
    std::vector<double> phi(n, 0.0);
    bool any = false;
    for (const auto& z : schedule.virtual_z_log) {
      if (z.after_segment != after_segment || (z.stark && effective_model)) continue;
      if (z.qubit < 0 || z.qubit >= n) throw std::out_of_range("virtual Z on a qubit outside the register");
      phi[z.qubit] += z.phi;
      any = true;
    }
    return any ? apply_virtual_z(psi, phi) : psi;
  };

  StateVector psi = initial;
  Trajectory traj;
  double t = 0.0;
  bool last_effective = false;
  for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
    const Segment& seg = schedule.segments[k];
    const ModelKind model = ctx.model_override.value_or(seg.model);
    const Scenario scenario = seg.omega_L > 0.0 ? ctx.scenario.with_omega(seg.omega_L) : ctx.scenario;
    CouplingOptions opts;
    opts.drive_phase = seg.drive_phase;
    opts.exact_kn = ctx.exact_kn;
    if (n > 1) opts.coupled_electrons = seg.targets;
    const HermitianOperator h = build_model(model, scenario, ctx.basis, opts);
    Trajectory part = propagate(h, psi, seg.duration_fs, cfg, t);
    traj.append(part);
    t += seg.duration_fs;
    last_effective = model == ModelKind::DispersiveXy;
    psi = apply_frames(*part.final_state, static_cast<int>(k), last_effective);
  }
  if (schedule.segments.empty()) traj.samples.push_back(measure(psi, 0.0));
  psi = apply_frames(psi, -1, last_effective);
  traj.final_state = psi;

  DensityOperator reduced = partial_trace(psi, SubsystemSelector::all_electrons(ctx.basis));
  GateResult result{psi, reduced, std::nullopt, von_neumann_entropy(reduced), leakage_fraction(psi), total,
                    std::move(traj), schedule.warnings};
  if (!std::holds_alternative<std::monostate>(ideal_target)) result.fidelity = qubit_fidelity(psi, ideal_target);
  return result;
}

}  // namespace feqo
