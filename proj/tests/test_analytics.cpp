#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "feqo/analytics.hpp"

using namespace feqo;
using doctest::Approx;

namespace {
constexpr double kStrongG = 0.24176811129032255;
}

TEST_CASE("Poisson-weighted Rabi sum") {
  CHECK(pe_exact_sum(3.0, kStrongG, 10.0, InitialQubit::Excited) == Approx(0.46642962618622974).epsilon(1e-10));
  CHECK(pe_exact_sum(3.0, kStrongG, 50.0, InitialQubit::Excited) == Approx(0.4819872437016479).epsilon(1e-10));
  CHECK(pe_exact_sum(3.0, kStrongG, 100.0, InitialQubit::Excited) == Approx(0.4396717417950315).epsilon(1e-10));
  CHECK(pe_exact_sum(3.0, kStrongG, 0.0, InitialQubit::Excited) == Approx(1.0));
  CHECK(pe_exact_sum(3.0, kStrongG, 0.0, InitialQubit::Ground) == Approx(0.0));
  for (double t : {0.0, 3.0, 17.5, 80.0}) {
    CHECK(pe_exact_sum(0.0, 0.1, t, InitialQubit::Excited) == Approx(std::pow(std::cos(0.1 * t), 2)).epsilon(1e-12));
  }
}

TEST_CASE("property: Rabi sum is a probability") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> alpha(0.0, 10.0), g(1e-3, 1.0), t(0.0, 500.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = alpha(rng), gg = g(rng), tt = t(rng);
    const double e = pe_exact_sum(a, gg, tt, InitialQubit::Excited);
    const double gr = pe_exact_sum(a, gg, tt, InitialQubit::Ground);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
    CHECK(std::abs(e + gr - 1.0) < 1e-10);
  }
}

TEST_CASE("envelope and collapse times") {
  CHECK(pe_envelope(3.0, kStrongG, 0.0) == Approx(0.0));
  CHECK(gaussian_envelope(0.5, 0.0) == 1.0);
  CHECK(gaussian_envelope(0.5, 2.0) == Approx(std::exp(-0.5)));
  // Long after the collapse the envelope rests at one half.
  CHECK(pe_envelope(3.0, kStrongG, 60.0) == Approx(0.5).epsilon(1e-6));

  const auto p = collapse_revival_times(3.0, kStrongG);
  CHECK(p.mean_photons == Approx(9.0));
  CHECK(p.t_c_adjacent_fs == Approx(77.96543481660257).epsilon(1e-12));
  CHECK(p.t_coll_gaussian_fs == Approx(std::sqrt(2.0) / kStrongG));
  CHECK(p.t_rev_fs == Approx(2.0 * std::numbers::pi * std::sqrt(10.0) / kStrongG));
}

TEST_CASE("regime classification") {
  DerivedCoupling weak;
  weak.g = 0.0036215183682374694;
  weak.omega_rec = 0.14277329692289117;
  weak.omega_L = 9.419458182618966;
  const auto bragg = classify_regime(weak, 0.0);
  CHECK(bragg.regime == Regime::Bragg);
  CHECK(to_string(bragg.regime) == "BRAGG");
  CHECK(std::isinf(bragg.ratio_g_to_Delta));

  DerivedCoupling strong = weak;
  strong.g = kStrongG;
  const auto rn = classify_regime(strong, 3.0);
  CHECK(rn.regime == Regime::RamanNath);
  CHECK(rn.ratio_coupling_to_recoil == Approx(kStrongG * std::sqrt(10.0) / weak.omega_rec));

  DerivedCoupling disp = weak;
  disp.g = 0.00363960989115254;
  disp.detuning = -0.0662400607680933;
  disp.Delta = std::abs(disp.detuning);
  disp.J = disp.g * disp.g / disp.Delta;
  const auto d = classify_regime(disp, 0.0);
  CHECK(d.regime == Regime::Dispersive);
  CHECK(d.ratio_g_to_Delta == Approx(0.0549457510900364).epsilon(1e-10));

  DerivedCoupling near = disp;
  near.g = 0.5 * disp.Delta;
  const auto w = classify_regime(near, 0.0);
  CHECK(w.regime == Regime::RamanNath);
  CHECK(w.warnings.size() == 1);

  // The thresholds are echoed.
  CHECK(classify_regime(weak, 0.0, 0.3, 0.05).kappa == 0.3);
  CHECK(classify_regime(weak, 0.0, 0.3, 0.05).dispersive_bound == 0.05);
}

TEST_CASE("property: classification is invariant under a common rescaling of rates") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> logu(-4.0, 1.0), lam(-3.0, 3.0), alpha(0.0, 10.0), coin(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    DerivedCoupling c;
    c.omega_L = 9.4;
    c.g = std::pow(10.0, logu(rng));
    c.omega_rec = std::pow(10.0, logu(rng));
    if (coin(rng) < 0.5) {
      c.detuning = std::pow(10.0, logu(rng)) * (coin(rng) < 0.5 ? -1.0 : 1.0);
      c.Delta = std::abs(c.detuning);
    }
    const double k = std::pow(10.0, lam(rng));
    DerivedCoupling scaled = c;
    scaled.g *= k;
    scaled.omega_rec *= k;
    scaled.omega_L *= k;
    scaled.detuning *= k;
    scaled.Delta *= k;
    const double a = alpha(rng);
    const auto r1 = classify_regime(c, a), r2 = classify_regime(scaled, a);
    CHECK(r1.regime == r2.regime);
    CHECK(r1.ratio_coupling_to_recoil == Approx(r2.ratio_coupling_to_recoil).epsilon(1e-12));
  }
}

TEST_CASE("leakage") {
  const BasisSpec b(2, symmetric_window(4), 1);
  CHECK(leakage_fraction({{0.0, 0.5, 0.5, 0.0}, {0.0, 1.0, 0.0, 0.0}}, b) == 0.0);
  CHECK(leakage_fraction({{0.2, 0.3, 0.3, 0.2}, {0.0, 1.0, 0.0, 0.0}}, b) == Approx(0.2));
  std::vector<ElectronFactor> e{sideband_state(b.sidebands(), HalfIndex::from_value(1.5)),
                                sideband_state(b.sidebands(), kGround)};
  const auto psi = tensor_product(b, e, fock_state(0, 1));
  CHECK(leakage_fraction(psi) == Approx(0.5));
}

TEST_CASE("local extrema") {
  const std::vector<double> y{0.0, 1.0, 0.5, 0.5, 2.0, -1.0, 3.0};
  CHECK(local_maxima(y) == std::vector<std::size_t>{1, 4});
  CHECK(local_minima(y) == std::vector<std::size_t>{2, 5});
}
