#pragma once

// Physical constants, scenario parameters and the derivation pipeline from raw
// inputs (electron velocity, photon energy, mode volume) to coupling constants
// and phase-matched grating periods.
//
// Internal unit system: energies in eV, times in fs, angular frequencies in
// rad/fs, lengths in nm. SI quantities appear only where a formula needs them
// (field amplitude in V/m, volume in m^3, wavenumbers in 1/m) and carry the
// unit in their name.

#include <complex>
#include <optional>

namespace feqo {

// CODATA 2018 values.
struct Constants {
  double e;           // C
  double m_e;         // kg
  double eps0;        // F/m
  double hbar_Js;     // J s
  double hbar_eVfs;   // eV fs
  double c;           // m/s

  double c_nm_per_fs() const { return c * 1e-6; }
};

inline constexpr Constants kConstants{
    1.602176634e-19,
    9.1093837015e-31,
    8.8541878128e-12,
    1.054571817e-34,
    1.054571817e-34 / 1.602176634e-19 * 1e15,
    299792458.0,
};

inline double energy_to_angular(double energy_eV) { return energy_eV / kConstants.hbar_eVfs; }
inline double angular_to_energy(double omega_rad_per_fs) { return omega_rad_per_fs * kConstants.hbar_eVfs; }
double wavelength_nm(double omega_rad_per_fs);

struct ElectronParams {
  double beta = 0;
  double E0_eV = 0;              // metadata only; beta is authoritative
  double gamma = 1;
  double v0_m_per_s = 0;
  double k0_per_m = 0;
  double p0_kg_m_per_s = 0;

  double v0_nm_per_fs() const { return v0_m_per_s * 1e-6; }
};

ElectronParams derive_electron(double beta, double E0_eV = 0.0);

struct DriveParams {
  double omega_L = 0;            // rad/fs
  double photon_energy_eV = 0;
  double lambda_nm = 0;
  double phi0 = 0;               // rad
  std::complex<double> alpha{0.0, 0.0};
  double grating_period_nm = 0;
  double q_per_nm = 0;
  double incidence_theta = 0;    // rad
  int harmonic_m = 1;
};

DriveParams make_drive(double photon_energy_eV, double grating_period_nm,
                       std::complex<double> alpha = {}, double phi0 = 0.0,
                       double incidence_theta = 0.0, int harmonic_m = 1);

// Exactly one of box volume or field amplitude is authoritative; the other is
// back-computed and kept as metadata.
struct ModeQuantization {
  double E_z_tilde_V_per_m = 0;
  double box_volume_m3 = 0;
  bool volume_authoritative = false;

  static ModeQuantization from_volume(double omega_L, double volume_m3);
  static ModeQuantization from_amplitude(double omega_L, double E_z_tilde_V_per_m);
  static ModeQuantization from_box_edge(double omega_L, double edge_nm);

  // Re-derives the non-authoritative member for a new drive frequency.
  ModeQuantization retuned(double omega_L) const;
};

double single_photon_amplitude(double omega_L, double volume_m3);
double quantization_volume(double omega_L, double E_z_tilde_V_per_m);

struct DerivedCoupling {
  double g = 0;                  // |g|, rad/fs
  double g_signed = 0;           // carries the physical minus sign
  double Delta = 0;              // |v0 q - omega_L|, rad/fs
  double detuning = 0;           // v0 q - omega_L, signed
  std::optional<double> J;       // g^2 / Delta, only when Delta > 0
  double omega_rec = 0;          // hbar q^2 / (2 gamma^3 m_e), rad/fs
  double omega_L = 0;

  double g_over_omega() const { return g / omega_L; }
};

struct Scenario {
  ElectronParams electron;
  DriveParams drive;
  ModeQuantization mode;

  // v0 q in rad/fs: the qubit transition frequency set by the grating.
  double qubit_frequency() const { return electron.v0_nm_per_fs() * drive.q_per_nm; }

  // Same electron, grating and mode, driven at a different laser frequency.
  Scenario with_omega(double omega_L) const;
};

DerivedCoupling coupling_constant(const Scenario& scenario);

// E_n including E0, in eV.
double sideband_energy(double n, const Scenario& scenario);
// E_{n+1} - E_n - hbar omega_L, in eV.
double transition_detuning(double n, const Scenario& scenario);

double classical_grating_period(double lambda_nm, double beta);

struct GratingQuery {
  double lambda_nm = 0;
  double theta = 0;
  double beta = 0;
  int harmonic_m = 1;
  // Dropping the photon momentum recovers the classical matching condition.
  bool include_photon_momentum = true;
};

double quantum_grating_period(const GratingQuery& query);

}  // namespace feqo
