#include "feqo/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "feqo/errors.hpp"

namespace feqo {

double pe_exact_sum(double alpha_abs, double g, double t_fs, InitialQubit initial) {
  const double nbar = alpha_abs * alpha_abs;
  double total = 0.0;
  double weight_sum = 0.0;
  for (int m = 0;; ++m) {
    const double log_w = nbar > 0.0 ? -nbar + m * std::log(nbar) - std::lgamma(m + 1.0) : (m == 0 ? 0.0 : -INFINITY);
    const double w = std::exp(log_w);
    const double c = std::cos(g * std::sqrt(m + 1.0) * t_fs);
    total += w * (initial == InitialQubit::Excited ? c * c : 1.0 - c * c);
    weight_sum += w;
    if (m > nbar && 1.0 - weight_sum < 1e-12) break;
    if (m > 100000) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

double gaussian_envelope(double g, double t_fs) { return std::exp(-0.5 * g * g * t_fs * t_fs); }

double pe_envelope(double alpha_abs, double g, double t_fs) {
  const double nbar = alpha_abs * alpha_abs;
  const double p = 0.5 * (1.0 - gaussian_envelope(g, t_fs) * std::cos(2.0 * g * t_fs * std::sqrt(nbar + 1.0)));
  return std::clamp(p, 0.0, 1.0);
}

CollapseRevivalPrediction collapse_revival_times(double alpha_abs, double g) {
  if (!(g > 0.0)) throw DomainError("collapse and revival times need g > 0");
  if (!(alpha_abs >= 0.0)) throw DomainError("|alpha| must be >= 0");
  CollapseRevivalPrediction p;
  p.mean_photons = alpha_abs * alpha_abs;
  p.t_coll_gaussian_fs = std::numbers::sqrt2 / g;
  p.t_c_adjacent_fs = 2.0 * std::numbers::pi * alpha_abs / g;
  p.t_rev_fs = 2.0 * std::numbers::pi * std::sqrt(p.mean_photons + 1.0) / g;
  return p;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Bragg: return "BRAGG";
    case Regime::RamanNath: return "RAMAN_NATH";
    case Regime::Dispersive: return "DISPERSIVE";
  }
  return "UNKNOWN";
}

RegimeReport classify_regime(const DerivedCoupling& c, double alpha_abs, double kappa, double dispersive_bound) {
  RegimeReport r;
  r.kappa = kappa;
  r.dispersive_bound = dispersive_bound;
  const double collective = c.g * std::sqrt(alpha_abs * alpha_abs + 1.0);
  r.ratio_coupling_to_recoil = c.omega_rec > 0.0 ? collective / c.omega_rec : std::numeric_limits<double>::infinity();
  // Resonance is judged relative to the laser frequency so that a common rescaling of all rates is harmless.
  const bool resonant = c.Delta <= 1e-9 * c.omega_L;
  r.ratio_g_to_Delta = resonant ? std::numeric_limits<double>::infinity() : c.g / c.Delta;
  if (resonant) {
    r.regime = r.ratio_coupling_to_recoil < kappa ? Regime::Bragg : Regime::RamanNath;
  } else if (r.ratio_g_to_Delta < dispersive_bound) {
    r.regime = Regime::Dispersive;
  } else {
    r.regime = Regime::RamanNath;
    std::ostringstream msg;
    msg << "detuned but strongly coupled: |g/Delta| = " << r.ratio_g_to_Delta << " >= " << dispersive_bound;
    r.warnings.push_back(msg.str());
  }
  return r;
}

double leakage_fraction(const std::vector<std::vector<double>>& populations, const BasisSpec& basis) {
  const int e_slot = basis.slot_of(kExcited);
  const int g_slot = basis.slot_of(kGround);
  double inside = 0.0;
  for (const auto& p : populations) inside += p[e_slot] + p[g_slot];
  return std::clamp(1.0 - inside / static_cast<double>(populations.size()), 0.0, 1.0);
}

double leakage_fraction(const StateVector& state) {
  const auto& basis = state.basis();
  std::vector<std::vector<double>> pops;
  for (int e = 0; e < basis.num_electrons(); ++e) {
    std::vector<double> p;
    for (const auto& [n, v] : sideband_populations(state, e)) p.push_back(v);
    pops.push_back(std::move(p));
  }
  return leakage_fraction(pops, basis);
}

std::vector<std::size_t> local_maxima(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) out.push_back(i);
  return out;
}

std::vector<std::size_t> local_minima(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] < v[i - 1] && v[i] <= v[i + 1]) out.push_back(i);
  return out;
}

}  // namespace feqo
