#include "feqo/physpar.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "feqo/errors.hpp"

namespace feqo {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(value));
  }
}

}  // namespace

double wavelength_nm(double omega_rad_per_fs) {
  require_positive(omega_rad_per_fs, "omega_L");
  return 2.0 * std::numbers::pi * kConstants.c_nm_per_fs() / omega_rad_per_fs;
}

ElectronParams derive_electron(double beta, double E0_eV) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("electron beta must lie in (0, 1), got " + std::to_string(beta));
  }
  ElectronParams p;
  p.beta = beta;
  p.E0_eV = E0_eV;
  p.gamma = 1.0 / std::sqrt(1.0 - beta * beta);
  p.v0_m_per_s = beta * kConstants.c;
  p.p0_kg_m_per_s = p.gamma * kConstants.m_e * p.v0_m_per_s;
  p.k0_per_m = p.p0_kg_m_per_s / kConstants.hbar_Js;
  return p;
}

DriveParams make_drive(double photon_energy_eV, double grating_period_nm, std::complex<double> alpha,
                       double phi0, double incidence_theta, int harmonic_m) {
  require_positive(photon_energy_eV, "photon energy");
  require_positive(grating_period_nm, "grating period");
  DriveParams d;
  d.photon_energy_eV = photon_energy_eV;
  d.omega_L = energy_to_angular(photon_energy_eV);
  d.lambda_nm = wavelength_nm(d.omega_L);
  d.phi0 = phi0;
  d.alpha = alpha;
  d.grating_period_nm = grating_period_nm;
  d.q_per_nm = 2.0 * std::numbers::pi / grating_period_nm;
  d.incidence_theta = incidence_theta;
  d.harmonic_m = harmonic_m;
  return d;
}

double single_photon_amplitude(double omega_L, double volume_m3) {
  require_positive(omega_L, "omega_L");
  require_positive(volume_m3, "quantization volume");
  const double omega_si = omega_L * 1e15;
  return std::sqrt(kConstants.hbar_Js * omega_si / (2.0 * kConstants.eps0 * volume_m3));
}

double quantization_volume(double omega_L, double E_z_tilde_V_per_m) {
  require_positive(omega_L, "omega_L");
  require_positive(E_z_tilde_V_per_m, "single-photon field amplitude");
  const double omega_si = omega_L * 1e15;
  return kConstants.hbar_Js * omega_si / (2.0 * kConstants.eps0 * E_z_tilde_V_per_m * E_z_tilde_V_per_m);
}

ModeQuantization ModeQuantization::from_volume(double omega_L, double volume_m3) {
  ModeQuantization m;
  m.box_volume_m3 = volume_m3;
  m.E_z_tilde_V_per_m = single_photon_amplitude(omega_L, volume_m3);
  m.volume_authoritative = true;
  return m;
}

ModeQuantization ModeQuantization::from_amplitude(double omega_L, double E_z_tilde_V_per_m) {
  ModeQuantization m;
  m.E_z_tilde_V_per_m = E_z_tilde_V_per_m;
  m.box_volume_m3 = quantization_volume(omega_L, E_z_tilde_V_per_m);
  m.volume_authoritative = false;
  return m;
}

ModeQuantization ModeQuantization::from_box_edge(double omega_L, double edge_nm) {
  require_positive(edge_nm, "box edge");
  const double edge_m = edge_nm * 1e-9;
  return from_volume(omega_L, edge_m * edge_m * edge_m);
}

ModeQuantization ModeQuantization::retuned(double omega_L) const {
  return volume_authoritative ? from_volume(omega_L, box_volume_m3) : from_amplitude(omega_L, E_z_tilde_V_per_m);
}

Scenario Scenario::with_omega(double omega_L) const {
  Scenario s = *this;
  s.drive = make_drive(angular_to_energy(omega_L), drive.grating_period_nm, drive.alpha, drive.phi0,
                       drive.incidence_theta, drive.harmonic_m);
  s.mode = mode.retuned(omega_L);
  return s;
}

DerivedCoupling coupling_constant(const Scenario& s) {
  require_positive(s.drive.omega_L, "omega_L");
  if (!(s.mode.E_z_tilde_V_per_m >= 0.0)) {
    throw DomainError("single-photon field amplitude must be non-negative");
  }
  const auto& el = s.electron;
  const auto& k = kConstants;
  DerivedCoupling c;
  c.omega_L = s.drive.omega_L;
  const double omega_si = s.drive.omega_L * 1e15;
  c.g_signed = -(k.e * s.mode.E_z_tilde_V_per_m) * el.k0_per_m / (2.0 * el.gamma * k.m_e * omega_si) * 1e-15;
  c.g = std::abs(c.g_signed);
  c.detuning = s.qubit_frequency() - s.drive.omega_L;
  // Round-off left over from a phase-matched grating counts as resonance.
  if (std::abs(c.detuning) <= 1e-12 * s.drive.omega_L) c.detuning = 0.0;
  c.Delta = std::abs(c.detuning);
  if (c.Delta > 0.0) c.J = c.g * c.g / c.Delta;
  const double q_si = s.drive.q_per_nm * 1e9;
  c.omega_rec = k.hbar_Js * q_si * q_si / (2.0 * std::pow(el.gamma, 3) * k.m_e) * 1e-15;
  return c;
}

double sideband_energy(double n, const Scenario& s) {
  const double hbar = kConstants.hbar_eVfs;
  const double linear = hbar * s.qubit_frequency();
  const double curvature = hbar * coupling_constant(s).omega_rec;
  return s.electron.E0_eV + n * linear + n * n * curvature;
}

double transition_detuning(double n, const Scenario& s) {
  return sideband_energy(n + 1.0, s) - sideband_energy(n, s) - s.drive.photon_energy_eV;
}

double classical_grating_period(double lambda_nm, double beta) {
  require_positive(lambda_nm, "wavelength");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  return beta * lambda_nm;
}

double quantum_grating_period(const GratingQuery& q) {
  require_positive(q.lambda_nm, "wavelength");
  if (!(q.beta > 0.0 && q.beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  if (q.harmonic_m == 0) {
    throw DomainError("no coupling: uniform surface supplies no momentum (harmonic m = 0)");
  }
  // omega/v0 = 2 pi / (beta lambda); k_ph = 2 pi / lambda.
  const double two_pi = 2.0 * std::numbers::pi;
  const double electron_term = two_pi / (q.beta * q.lambda_nm);
  const double photon_term = q.include_photon_momentum ? two_pi / q.lambda_nm * std::cos(q.theta) : 0.0;
  const double denominator = electron_term - photon_term;
  if (!(denominator > 0.0)) {
    throw DomainError("phase matching impossible: omega/v0 - k_ph cos(theta) is not positive");
  }
  const double period = two_pi * q.harmonic_m / denominator;
  if (!(period > 0.0)) throw DomainError("harmonic order yields a non-positive grating period");
  return period;
}

}  // namespace feqo
