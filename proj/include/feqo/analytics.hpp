#pragma once

// Closed-form collapse/revival predictions, regime classification and leakage.

#include <string>
#include <vector>

#include "feqo/hilbert.hpp"
#include "feqo/physpar.hpp"

namespace feqo {

enum class InitialQubit { Excited, Ground };

// Poisson-weighted Rabi sum, truncated once the remaining Poisson mass is below 1e-12.
//   Excited: sum_m P_m cos^2(g sqrt(m+1) t)
//   Ground:  sum_m P_m sin^2(g sqrt(m+1) t)
double pe_exact_sum(double alpha_abs, double g, double t_fs, InitialQubit initial);

// (1/2) [1 - exp(-g^2 t^2 / 2) cos(2 g t sqrt(nbar + 1))], starting from |g>.
double pe_envelope(double alpha_abs, double g, double t_fs);
// exp(-g^2 t^2 / 2)
double gaussian_envelope(double g, double t_fs);

struct CollapseRevivalPrediction {
  double mean_photons = 0;
  double t_coll_gaussian_fs = 0;  // sqrt(2) / g
  double t_c_adjacent_fs = 0;     // 2 pi |alpha| / g
  double t_rev_fs = 0;            // 2 pi sqrt(nbar + 1) / g
};

CollapseRevivalPrediction collapse_revival_times(double alpha_abs, double g);

enum class Regime { Bragg, RamanNath, Dispersive };
std::string to_string(Regime regime);

struct RegimeReport {
  Regime regime = Regime::Bragg;
  double ratio_coupling_to_recoil = 0;  // g sqrt(nbar + 1) / omega_rec
  double ratio_g_to_Delta = 0;          // |g| / Delta, infinite at resonance
  double kappa = 0.5;
  double dispersive_bound = 0.1;
  std::vector<std::string> warnings;
};

// Heuristic: the thresholds are echoed in the report and only ratios enter.
RegimeReport classify_regime(const DerivedCoupling& coupling, double alpha_abs, double kappa = 0.5,
                             double dispersive_bound = 0.1);

// 1 - population on {-1/2, +1/2}, averaged over electrons.
double leakage_fraction(const StateVector& state);
double leakage_fraction(const std::vector<std::vector<double>>& populations, const BasisSpec& basis);

// Indices of local maxima / minima of a sampled curve; a plateau counts once, at its left edge.
std::vector<std::size_t> local_maxima(const std::vector<double>& values);
std::vector<std::size_t> local_minima(const std::vector<double>& values);

}  // namespace feqo
