#include "feqo/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "feqo/errors.hpp"
#include "feqo/linalg.hpp"
#include "feqo/physpar.hpp"

namespace feqo {

void Trajectory::append(const Trajectory& other) {
  auto first = other.samples.begin();
  if (!samples.empty() && first != other.samples.end() && std::abs(first->t_fs - samples.back().t_fs) < 1e-9) ++first;
  samples.insert(samples.end(), first, other.samples.end());
  if (other.final_state) final_state = other.final_state;
  step_dt_fs = std::max(step_dt_fs, other.step_dt_fs);
}

TrajectorySample measure(const StateVector& state, double t_fs) {
  const auto& basis = state.basis();
  TrajectorySample s;
  s.t_fs = t_fs;
  s.norm = state.norm();
  s.photon_mean = photon_mean(state);
  s.populations.assign(basis.num_electrons(), std::vector<double>(basis.sideband_count(), 0.0));
  const auto& amps = state.amplitudes();
  for (Index i = 0; i < basis.dimension(); ++i) {
    const double p = std::norm(amps(i));
    if (p == 0.0) continue;
    const CompositeLabel label = basis.decode(i);
    for (int e = 0; e < basis.num_electrons(); ++e) s.populations[e][label.slots[e]] += p;
  }
  const auto dims = basis.subsystem_dims();
  std::vector<bool> keep(dims.size(), true);
  keep.back() = false;
  const Eigen::MatrixXcd rho = reduce_pure(amps / s.norm, dims, keep);
  s.entropy_nats = linalg::shannon_entropy(linalg::hermitian_eigenvalues(rho));
  return s;
}

double estimate_spectral_radius(const HermitianOperator& h, int iterations) {
  const Index n = h.dimension();
  if (n == 0) return 0.0;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  v.normalize();
  double radius = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Eigen::VectorXcd w = h.matrix() * v;
    radius = w.norm();
    if (radius == 0.0) return 0.0;
    v = w / radius;
  }
  return radius / kConstants.hbar_eVfs;
}

EigenPropagator::EigenPropagator(const HermitianOperator& h, Index dimension_cap) : basis_(h.basis()) {
  if (h.dimension() > dimension_cap) {
    std::ostringstream msg;
    msg << "dimension " << h.dimension() << " exceeds the eigen-oracle cap " << dimension_cap
        << "; use the fixed-step propagator";
    throw DomainError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
  if (es.info() != Eigen::Success) throw ToleranceError("Hermitian eigendecomposition did not converge");
  vectors_ = es.eigenvectors();
  omegas_ = es.eigenvalues() / kConstants.hbar_eVfs;
}

Eigen::VectorXcd EigenPropagator::apply(const Eigen::VectorXcd& psi, double t_fs) const {
  Eigen::VectorXcd c = vectors_.adjoint() * psi;
  for (Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -omegas_(i) * t_fs);
  return vectors_ * c;
}

StateVector EigenPropagator::apply(const StateVector& psi, double t_fs) const {
  if (!(psi.basis() == basis_)) throw std::invalid_argument("state and Hamiltonian live on different bases");
  return StateVector(basis_, apply(psi.amplitudes(), t_fs), 1e-8);
}

StateVector propagate_eigen(const HermitianOperator& h, const StateVector& psi0, double t_fs, Index dimension_cap) {
  return EigenPropagator(h, dimension_cap).apply(psi0, t_fs);
}

namespace {

class Rk4Stepper {
 public:
  explicit Rk4Stepper(const HermitianOperator& h)
      : generator_(h.matrix() * Complex(0.0, -1.0 / kConstants.hbar_eVfs)) {}

  void step(Eigen::VectorXcd& psi, double dt) {
    k1_.noalias() = generator_ * psi;
    tmp_ = psi + (0.5 * dt) * k1_;
    k2_.noalias() = generator_ * tmp_;
    tmp_ = psi + (0.5 * dt) * k2_;
    k3_.noalias() = generator_ * tmp_;
    tmp_ = psi + dt * k3_;
    k4_.noalias() = generator_ * tmp_;
    psi += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  SparseMatrix generator_;
  Eigen::VectorXcd k1_, k2_, k3_, k4_, tmp_;
};

void check_norm(const Eigen::VectorXcd& psi, double t_fs, double tol, double dt) {
  const double drift = std::abs(psi.norm() - 1.0);
  if (!(drift <= tol)) {
    std::ostringstream msg;
    msg << "norm drift " << drift << " at t = " << t_fs << " fs exceeds tolerance " << tol;
    if (dt > 0) msg << " (step " << dt << " fs too large)";
    throw ToleranceError(msg.str());
  }
}

std::vector<double> sample_times(double t0, double total, double every) {
  std::vector<double> times;
  const double eps = 1e-9 * std::max(1.0, every);
  const auto k_first = static_cast<long long>(std::ceil(t0 / every - 1e-9));
  for (long long k = k_first;; ++k) {
    const double t = k * every;
    if (t > t0 + total + eps) break;
    times.push_back(std::max(t, t0));
  }
  return times;
}

}  // namespace

Trajectory propagate(const HermitianOperator& h, const StateVector& psi0, double total_time_fs,
                     const PropagatorConfig& config, double time_offset_fs) {
  if (!(h.basis() == psi0.basis())) throw std::invalid_argument("state and Hamiltonian live on different bases");
  if (!(total_time_fs >= 0.0)) throw DomainError("total time must be >= 0");
  if (config.step_dt_fs < 0.0 || config.sample_every_fs < 0.0) throw DomainError("step and sampling must be >= 0");
  if (!(config.max_phase_per_step > 0.0)) throw DomainError("max phase per step must be positive");

  double every = config.sample_every_fs;
  if (every == 0.0) every = total_time_fs > 0.0 ? total_time_fs / 200.0 : 1.0;

  Trajectory traj;
  const auto times = sample_times(time_offset_fs, total_time_fs, every);
  const double t_end = time_offset_fs + total_time_fs;

  if (config.method == PropagationMethod::EigenOracle) {
    EigenPropagator u(h, config.eigen_dimension_cap);
    for (double t : times) {
      Eigen::VectorXcd psi = u.apply(psi0.amplitudes(), t - time_offset_fs);
      check_norm(psi, t, config.norm_tol, 0.0);
      traj.samples.push_back(measure(StateVector(psi0.basis(), std::move(psi), 1.0), t));
    }
    traj.final_state = u.apply(psi0, total_time_fs);
    return traj;
  }

  const double radius = 1.2 * estimate_spectral_radius(h);
  double dt_max = radius > 0.0 ? config.max_phase_per_step / radius : std::max(total_time_fs, 1.0);
  if (config.step_dt_fs > 0.0) dt_max = std::min(dt_max, config.step_dt_fs);
  traj.step_dt_fs = dt_max;

  Rk4Stepper stepper(h);
  Eigen::VectorXcd psi = psi0.amplitudes();
  double t = time_offset_fs;
  auto advance_to = [&](double target) {
    const double span = target - t;
    if (span <= 0.0) return;
    const auto steps = static_cast<long long>(std::ceil(span / dt_max - 1e-12));
    const double dt = span / static_cast<double>(steps);
    for (long long s = 0; s < steps; ++s) stepper.step(psi, dt);
    t = target;
  };
  for (double ts : times) {
    advance_to(ts);
    check_norm(psi, t, config.norm_tol, dt_max);
    traj.samples.push_back(measure(StateVector(psi0.basis(), psi, 1.0), ts));
  }
  advance_to(t_end);
  check_norm(psi, t, config.norm_tol, dt_max);
  traj.final_state = StateVector(psi0.basis(), std::move(psi), 1.0);
  return traj;
}

}  // namespace feqo
