#pragma once

// Time evolution under a constant Hamiltonian (in eV, times in fs).

#include <functional>
#include <optional>
#include <vector>

#include "feqo/hilbert.hpp"

namespace feqo {

enum class PropagationMethod { FixedStep, EigenOracle };

struct PropagatorConfig {
  PropagationMethod method = PropagationMethod::FixedStep;
  double step_dt_fs = 0.0;        // 0 picks the largest step allowed by max_phase_per_step
  double sample_every_fs = 0.0;   // 0 samples 200 intervals per segment
  double norm_tol = 1e-8;
  double max_phase_per_step = 0.02;
  Index eigen_dimension_cap = 4000;
};

struct TrajectorySample {
  double t_fs = 0;
  std::vector<std::vector<double>> populations;  // [electron][sideband slot]
  double photon_mean = 0;
  double entropy_nats = 0;                       // all electrons vs photon
  double norm = 1;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::optional<StateVector> final_state;
  double step_dt_fs = 0;  // step actually used (0 for the eigen oracle)

  // Appends `other`, dropping its first sample when it repeats our last time.
  void append(const Trajectory& other);
};

TrajectorySample measure(const StateVector& state, double t_fs);

// Largest |eigenvalue| of H/hbar in rad/fs by power iteration.
double estimate_spectral_radius(const HermitianOperator& h, int iterations = 20);

// Exact propagator exp(-i H t / hbar) via a dense Hermitian eigendecomposition.
class EigenPropagator {
 public:
  explicit EigenPropagator(const HermitianOperator& h, Index dimension_cap = 4000);

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t_fs) const;
  StateVector apply(const StateVector& psi, double t_fs) const;

 private:
  BasisSpec basis_;
  Eigen::MatrixXcd vectors_;
  Eigen::VectorXd omegas_;  // eigenvalues / hbar, rad/fs
};

StateVector propagate_eigen(const HermitianOperator& h, const StateVector& psi0, double t_fs,
                            Index dimension_cap = 4000);

// Samples at t0 + k * sample_every for k = 0 .. floor(T / sample_every), where
// t0 is `time_offset_fs`; the final state is at t0 + T.
Trajectory propagate(const HermitianOperator& h, const StateVector& psi0, double total_time_fs,
                     const PropagatorConfig& config = {}, double time_offset_fs = 0.0);

}  // namespace feqo
