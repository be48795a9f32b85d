#include "feqo/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "feqo/errors.hpp"

namespace feqo {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::PinemFull: return "pinem_full";
    case ModelKind::JcLab: return "jc_lab";
    case ModelKind::JcInteraction: return "jc_interaction";
    case ModelKind::TcLab: return "tc_lab";
    case ModelKind::DispersiveXy: return "dispersive_xy";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (auto k : {ModelKind::PinemFull, ModelKind::JcLab, ModelKind::JcInteraction, ModelKind::TcLab,
                 ModelKind::DispersiveXy}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (expected pinem_full, jc_lab, jc_interaction, tc_lab, dispersive_xy)");
}

namespace {

void require_qubit_window(const BasisSpec& basis, const char* who) {
  if (basis.sideband_count() != 2) {
    throw DomainError(std::string(who) + " needs the two-level sideband window {-1/2, +1/2}");
  }
}

std::vector<bool> coupled_mask(const BasisSpec& basis, const std::vector<int>& coupled) {
  std::vector<bool> mask(basis.num_electrons(), coupled.empty());
  for (int e : coupled) {
    if (e < 0 || e >= basis.num_electrons()) throw std::invalid_argument("coupled electron index outside basis");
    mask[e] = true;
  }
  return mask;
}

struct LadderTerms {
  double linear_eV = 0;     // hbar v0 q, multiplies n
  double curvature_eV = 0;  // hbar omega_rec, multiplies n^2
  double photon_eV = 0;     // hbar omega_L, multiplies m
  double coupling_eV = 0;   // hbar |g|
  double phase = 0;
  double q_over_k0 = 0;     // used only in exact-k mode
  bool exact_kn = false;
};

// Sideband ladder c_n^dag c_{n-1} a on every coupled electron, plus the diagonal.
HermitianOperator assemble(const BasisSpec& basis, const LadderTerms& t, const std::vector<bool>& coupled) {
  HermitianOperator::Builder b(basis);
  const auto& window = basis.sidebands();
  const Complex phase = std::polar(1.0, t.phase);
  const int pd = basis.photon_dim();
  for (Index i = 0; i < basis.dimension(); ++i) {
    const CompositeLabel label = basis.decode(i);
    double diag = t.photon_eV * label.photons;
    for (int slot : label.slots) {
      const double n = window[slot].value();
      diag += n * t.linear_eV + n * n * t.curvature_eV;
    }
    b.add_diagonal(i, diag);
    if (t.coupling_eV == 0.0 || label.photons + 1 >= pd) continue;
    // |.., n-1, .., m+1> -> |.., n, .., m>: absorb one photon on electron e.
    for (int e = 0; e < basis.num_electrons(); ++e) {
      if (!coupled[e]) continue;
      const int slot = label.slots[e];
      if (slot == 0) continue;
      CompositeLabel source = label;
      source.slots[e] = slot - 1;
      source.photons = label.photons + 1;
      double element = t.coupling_eV * std::sqrt(label.photons + 1.0);
      if (t.exact_kn) element *= 1.0 + (window[slot].value() - 0.5) * t.q_over_k0;
      b.add_coupling(i, basis.encode(source), element * phase);
    }
  }
  return std::move(b).build();
}

LadderTerms lab_terms(const Scenario& s, const CouplingOptions& o, bool with_curvature) {
  const DerivedCoupling c = coupling_constant(s);
  const double hbar = kConstants.hbar_eVfs;
  LadderTerms t;
  t.linear_eV = hbar * s.qubit_frequency();
  t.curvature_eV = with_curvature ? hbar * c.omega_rec : 0.0;
  t.photon_eV = hbar * s.drive.omega_L;
  t.coupling_eV = hbar * c.g;
  t.phase = o.drive_phase;
  t.exact_kn = o.exact_kn;
  t.q_over_k0 = s.drive.q_per_nm * 1e9 / s.electron.k0_per_m;
  return t;
}

}  // namespace

HermitianOperator build_pinem(const Scenario& scenario, const BasisSpec& basis, const CouplingOptions& options) {
  if (basis.sideband_count() < 2) throw DomainError("PINEM Hamiltonian needs at least two sidebands");
  return assemble(basis, lab_terms(scenario, options, true), coupled_mask(basis, options.coupled_electrons));
}

HermitianOperator build_jc(const Scenario& scenario, const BasisSpec& basis, const CouplingOptions& options) {
  require_qubit_window(basis, "Jaynes-Cummings model");
  if (basis.num_electrons() != 1) throw DomainError("Jaynes-Cummings model takes one electron; use build_tc");
  return assemble(basis, lab_terms(scenario, options, false), coupled_mask(basis, options.coupled_electrons));
}

HermitianOperator build_jc_interaction(double g, const BasisSpec& basis, double drive_phase) {
  require_qubit_window(basis, "Jaynes-Cummings interaction");
  LadderTerms t;
  t.coupling_eV = kConstants.hbar_eVfs * g;
  t.phase = drive_phase;
  return assemble(basis, t, coupled_mask(basis, {}));
}

HermitianOperator build_tc(const Scenario& scenario, const BasisSpec& basis, const CouplingOptions& options) {
  require_qubit_window(basis, "Tavis-Cummings model");
  return assemble(basis, lab_terms(scenario, options, false), coupled_mask(basis, options.coupled_electrons));
}

HermitianOperator build_dispersive_xy(double J, const BasisSpec& basis, std::pair<int, int> pair) {
  require_qubit_window(basis, "dispersive exchange model");
  const auto [first, second] = pair;
  if (first == second || first < 0 || second < 0 || first >= basis.num_electrons() ||
      second >= basis.num_electrons()) {
    throw DomainError("dispersive exchange needs two distinct electrons inside the basis");
  }
  const int e_slot = basis.slot_of(kExcited);
  const int g_slot = basis.slot_of(kGround);
  HermitianOperator::Builder b(basis);
  const double element = kConstants.hbar_eVfs * J;
  if (element != 0.0) {
    for (Index i = 0; i < basis.dimension(); ++i) {
      CompositeLabel label = basis.decode(i);
      // sigma_+^first sigma_-^second: |g_first e_second> -> |e_first g_second>.
      if (label.slots[first] == e_slot && label.slots[second] == g_slot) {
        CompositeLabel source = label;
        source.slots[first] = g_slot;
        source.slots[second] = e_slot;
        b.add_coupling(i, basis.encode(source), element);
      }
    }
  }
  return std::move(b).build();
}

HermitianOperator excitation_observable(const BasisSpec& basis) {
  HermitianOperator::Builder b(basis);
  const auto& window = basis.sidebands();
  for (Index i = 0; i < basis.dimension(); ++i) {
    const CompositeLabel label = basis.decode(i);
    double n = label.photons;
    for (int slot : label.slots) n += window[slot].value();
    b.add_diagonal(i, n);
  }
  return std::move(b).build();
}

HermitianOperator total_sigma_z(const BasisSpec& basis) {
  const int e_slot = basis.slot_of(kExcited);
  const int g_slot = basis.slot_of(kGround);
  HermitianOperator::Builder b(basis);
  for (Index i = 0; i < basis.dimension(); ++i) {
    const CompositeLabel label = basis.decode(i);
    double z = 0.0;
    for (int slot : label.slots) z += slot == e_slot ? 1.0 : (slot == g_slot ? -1.0 : 0.0);
    b.add_diagonal(i, z);
  }
  return std::move(b).build();
}

HermitianOperator rotating_frame(const HermitianOperator& h, double omega) {
  if (omega == 0.0) return h;
  return h - excitation_observable(h.basis()).scaled(kConstants.hbar_eVfs * omega);
}

HermitianOperator build_model(ModelKind kind, const Scenario& scenario, const BasisSpec& basis,
                              const CouplingOptions& options) {
  const double qubit_omega = scenario.qubit_frequency();
  switch (kind) {
    case ModelKind::PinemFull: return rotating_frame(build_pinem(scenario, basis, options), qubit_omega);
    case ModelKind::JcLab: return rotating_frame(build_jc(scenario, basis, options), qubit_omega);
    case ModelKind::TcLab: return rotating_frame(build_tc(scenario, basis, options), qubit_omega);
    case ModelKind::JcInteraction:
      if (basis.num_electrons() != 1) throw DomainError("Jaynes-Cummings interaction takes one electron");
      return build_jc_interaction(coupling_constant(scenario).g, basis, options.drive_phase);
    case ModelKind::DispersiveXy: {
      const DerivedCoupling c = coupling_constant(scenario);
      if (!c.J) throw DomainError("dispersive exchange needs a nonzero detuning");
      std::pair<int, int> pair{0, 1};
      if (options.coupled_electrons.size() == 2) pair = {options.coupled_electrons[0], options.coupled_electrons[1]};
      else if (!options.coupled_electrons.empty()) throw DomainError("dispersive exchange couples exactly two electrons");
      // Signed exchange: J = g^2 / (v0 q - omega_L).
      return build_dispersive_xy(c.g * c.g / c.detuning, basis, pair);
    }
  }
  throw std::invalid_argument("unhandled model kind");
}

}  // namespace feqo
