#pragma once

// Hamiltonian builders on a BasisSpec. All operators are in eV; the vacuum
// energy hbar omega_L / 2 and the beam energy E0 are dropped.

#include <string_view>
#include <utility>
#include <vector>

#include "feqo/hilbert.hpp"
#include "feqo/physpar.hpp"

namespace feqo {

enum class ModelKind { PinemFull, JcLab, JcInteraction, TcLab, DispersiveXy };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

struct CouplingOptions {
  double drive_phase = 0.0;  // coupling carries e^{i phase} on the photon-absorbing term
  // Scale each ladder element by k_{n-1/2}/k0 instead of using k_n = k0.
  bool exact_kn = false;
  // Electrons that interact with the mode; empty means all of them.
  std::vector<int> coupled_electrons;
};

// Full multi-sideband Hamiltonian:
//   sum_e sum_n (n hbar v0 q + n^2 hbar omega_rec) c_n^dag c_n + hbar omega_L a^dag a
//   + hbar g sum_e sum_n (e^{i phase} c_n^dag c_{n-1} a + h.c.)
HermitianOperator build_pinem(const Scenario& scenario, const BasisSpec& basis, const CouplingOptions& options = {});

// (hbar v0 q / 2) sigma_z + hbar omega_L a^dag a + hbar g (sigma_+ a + sigma_- a^dag). Needs the {-1/2, +1/2} window.
HermitianOperator build_jc(const Scenario& scenario, const BasisSpec& basis, const CouplingOptions& options = {});

// hbar g (e^{i phase} sigma_+ a + h.c.) only.
HermitianOperator build_jc_interaction(double g, const BasisSpec& basis, double drive_phase = 0.0);

// Sum of JC terms for every electron sharing the single mode.
HermitianOperator build_tc(const Scenario& scenario, const BasisSpec& basis, const CouplingOptions& options = {});

// hbar J (sigma_+^i sigma_-^j + sigma_-^i sigma_+^j), identity on the photon factor.
HermitianOperator build_dispersive_xy(double J, const BasisSpec& basis, std::pair<int, int> pair = {0, 1});

// N_tot = sum_e sum_n n c_n^dag c_n + a^dag a (dimensionless, diagonal).
HermitianOperator excitation_observable(const BasisSpec& basis);

// sum_e sigma_z^(e) restricted to the {+-1/2} slots, zero elsewhere.
HermitianOperator total_sigma_z(const BasisSpec& basis);

// H - hbar omega N_tot: the frame rotating at omega on every excitation.
HermitianOperator rotating_frame(const HermitianOperator& h, double omega);

// Builds the named model. Lab-frame models (PINEM, JC, TC) are returned in the
// frame rotating at the qubit frequency v0 q, which is exact because they
// conserve N_tot; the interaction-picture models are returned as is.
HermitianOperator build_model(ModelKind kind, const Scenario& scenario, const BasisSpec& basis,
                              const CouplingOptions& options = {});

}  // namespace feqo
