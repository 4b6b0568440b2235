#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "ombell/model.hpp"
#include "reference_values.hpp"

using namespace ombell;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

RawDriveSpec drive_case_a() {
  RawDriveSpec d;
  d.g_a = 0.05;
  d.g_c = 0.04;
  d.alpha_in_A = 2.0;
  d.alpha_in_C = 3.0;
  d.omega_a = 500.0;
  d.omega_c = 700.0;
  d.omega_d_A = 501.0;
  d.omega_d_C = 699.0;
  d.kappa_a = 0.2;
  d.kappa_c = 0.3;
  d.kappa_e_a = 0.18;
  d.kappa_e_c = 0.27;
  d.gamma = 1e-3;
  return d;
}

RawDriveSpec drive_case_b() {
  RawDriveSpec d;
  d.g_a = 1e-6;
  d.g_c = 1e-6;
  d.alpha_in_A = 5.0;
  d.alpha_in_C = 7.0;
  d.omega_a = 1000.0;
  d.omega_c = 2000.0;
  d.omega_d_A = 1001.0;
  d.omega_d_C = 1999.0;
  d.kappa_a = 300.0;
  d.kappa_c = 200.0;
  d.kappa_e_a = 270.0;
  d.kappa_e_c = 180.0;
  d.gamma = 1e-5;
  return d;
}

}  // namespace

TEST_CASE("bose_occupancy matches frozen references") {
  CHECK(rel_err(bose_occupancy(0.007, 10e6), refvals::kBose_7mK_10MHz) < 1e-13);
  CHECK(rel_err(bose_occupancy(300.0, 5e9), refvals::kBose_300K_5GHz) < 1e-13);
  CHECK(rel_err(bose_occupancy(0.007, 10e9), refvals::kBose_7mK_10GHz) < 1e-13);
  CHECK(rel_err(bose_occupancy(300.0, 500e12), refvals::kBose_300K_500THz) <
        1e-13);
  CHECK(rel_err(bose_occupancy(0.1, 6.25e9), refvals::kBose_100mK_6p25GHz) <
        1e-13);
}

TEST_CASE("bose_occupancy is monotonic and vanishes at low temperature") {
  const std::vector<double> temps = {0.01, 0.1, 1.0, 10.0, 300.0};
  const std::vector<double> freqs = {1e6, 1e9, 1e12};
  for (double f : freqs) {
    for (std::size_t k = 1; k < temps.size(); ++k) {
      CHECK(bose_occupancy(temps[k], f) > bose_occupancy(temps[k - 1], f));
    }
  }
  for (double T : temps) {
    for (std::size_t k = 1; k < freqs.size(); ++k) {
      CHECK(bose_occupancy(T, freqs[k]) < bose_occupancy(T, freqs[k - 1]));
    }
  }
  // hf >> kT limit: occupation is exponentially small.
  CHECK(bose_occupancy(1e-4, 1e12) < 1e-200);
  CHECK_THROWS_AS(bose_occupancy(0.0, 1e9), ConfigError);
  CHECK_THROWS_AS(bose_occupancy(-1.0, 1e9), ConfigError);
  CHECK_THROWS_AS(bose_occupancy(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(bose_occupancy(1.0, -5.0), ConfigError);
}

TEST_CASE("symmetric construction populates all fields and derived ratios") {
  const SystemParams p = SystemParams::symmetric(0.1, 0.9, 1e-5, 0.2, 0.1);
  CHECK(p.omega_m == 1.0);
  CHECK(p.kappa_a == 0.1);
  CHECK(p.kappa_c == 0.1);
  CHECK(p.kappa_e_a == doctest::Approx(0.09).epsilon(1e-15));
  CHECK(p.kappa_e_c == doctest::Approx(0.09).epsilon(1e-15));
  CHECK(p.gamma == 1e-5);
  CHECK(p.G_minus == 0.2);
  CHECK(p.G_plus == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(p.delta_a == 1.0);
  CHECK(p.delta_c == -1.0);
  CHECK(p.r() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(p.r_e() == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(p.r_i() == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(p.kappa_i_a() == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(p.kappa_i_c() == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(p.C_minus() ==
        doctest::Approx(4.0 * 0.2 * 0.2 / (0.1 * 1e-5)).epsilon(1e-14));
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("parameter validation rejects out-of-range rates") {
  SystemParams p = SystemParams::symmetric(0.1, 0.9, 1e-5, 0.2, 0.1);
  CHECK_NOTHROW(p.validate());

  SystemParams bad = p;
  bad.kappa_a = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.kappa_c = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.kappa_e_a = 0.2;  // exceeds kappa_a
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.kappa_e_c = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.G_minus = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.G_plus = -0.01;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = p;
  bad.omega_m = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  // G_plus >= G_minus is deliberately allowed; sweeps flag it via stability.
  SystemParams over = SystemParams::symmetric(0.1, 0.9, 1e-5, 0.2, 1.5);
  CHECK_NOTHROW(over.validate());

  InputState in;
  CHECK_NOTHROW(in.validate());
  in.n_m = -1e-9;
  CHECK_THROWS_AS(in.validate(), ConfigError);
  in = InputState{};
  in.n_e_a = -0.1;
  CHECK_THROWS_AS(in.validate(), ConfigError);
  in = InputState{};
  in.n_i_c = -0.1;
  CHECK_THROWS_AS(in.validate(), ConfigError);
}

TEST_CASE("linearize_drives reproduces the resolved-drive fixed point") {
  const LinearizeResult res = linearize_drives(drive_case_a());
  CHECK(rel_err(res.alpha_A, refvals::kLinA_alphaA) < 1e-12);
  CHECK(rel_err(res.alpha_C, refvals::kLinA_alphaC) < 1e-12);
  CHECK(rel_err(res.b_s, refvals::kLinA_bs) < 1e-12);
  CHECK(rel_err(res.params.G_plus, refvals::kLinA_Gplus) < 1e-12);
  CHECK(rel_err(res.params.G_minus, refvals::kLinA_Gminus) < 1e-12);
  CHECK(res.iterations == refvals::kLinA_iters);

  // Detunings include the static mechanical displacement shift.
  const double shift = 2.0 * res.b_s.real();
  CHECK(res.params.delta_a ==
        doctest::Approx(501.0 - 500.0 - 0.05 * shift).epsilon(1e-12));
  CHECK(res.params.delta_c ==
        doctest::Approx(699.0 - 700.0 - 0.04 * shift).epsilon(1e-12));
  // Rates copy through unchanged.
  CHECK(res.params.kappa_a == 0.2);
  CHECK(res.params.kappa_c == 0.3);
  CHECK(res.params.kappa_e_a == 0.18);
  CHECK(res.params.gamma == 1e-3);
}

TEST_CASE("linearize_drives reproduces the linewidth-dominated fixed point") {
  const LinearizeResult res = linearize_drives(drive_case_b());
  CHECK(rel_err(res.alpha_A, refvals::kLinB_alphaA) < 1e-12);
  CHECK(rel_err(res.alpha_C, refvals::kLinB_alphaC) < 1e-12);
  CHECK(rel_err(res.b_s, refvals::kLinB_bs) < 1e-10);
  CHECK(rel_err(res.params.G_plus, refvals::kLinB_Gplus) < 1e-12);
  CHECK(rel_err(res.params.G_minus, refvals::kLinB_Gminus) < 1e-12);
  CHECK(res.iterations == refvals::kLinB_iters);

  // For kappa >> detuning the amplitude approaches 2 alpha_in / kappa.
  CHECK(std::abs(std::abs(res.alpha_A) - 2.0 * 5.0 / 300.0) /
            (2.0 * 5.0 / 300.0) <
        1e-4);
  CHECK(std::abs(std::abs(res.alpha_C) - 2.0 * 7.0 / 200.0) /
            (2.0 * 7.0 / 200.0) <
        1e-4);
}

TEST_CASE("linearized couplings scale homogeneously with both pump amplitudes") {
  const LinearizeResult base = linearize_drives(drive_case_b());
  RawDriveSpec scaled = drive_case_b();
  scaled.alpha_in_A *= 3.7;
  scaled.alpha_in_C *= 3.7;
  const LinearizeResult res = linearize_drives(scaled);
  CHECK(rel_err(res.params.G_plus, 3.7 * base.params.G_plus) < 1e-9);
  CHECK(rel_err(res.params.G_minus, 3.7 * base.params.G_minus) < 1e-9);
}

TEST_CASE("linearize_drives rejects dominance of the wrong sideband") {
  // Identical to the linewidth-dominated case with the cavity roles swapped:
  // the blue-sideband drive then wins and no squeezing frame exists.
  RawDriveSpec d = drive_case_b();
  d.kappa_a = 200.0;
  d.kappa_c = 300.0;
  d.kappa_e_a = 180.0;
  d.kappa_e_c = 270.0;
  CHECK_THROWS_AS(linearize_drives(d), CouplingOrderError);

  // Zero couplings give G_plus = G_minus = 0, also rejected.
  RawDriveSpec zero = drive_case_a();
  zero.g_a = 0.0;
  zero.g_c = 0.0;
  CHECK_THROWS_AS(linearize_drives(zero), CouplingOrderError);
}

TEST_CASE("single-drive operation yields G_plus = 0") {
  RawDriveSpec d = drive_case_a();
  d.alpha_in_A = 0.0;
  const LinearizeResult res = linearize_drives(d);
  CHECK(res.params.G_plus == 0.0);
  CHECK(res.params.G_minus > 0.0);
  CHECK(std::abs(res.alpha_A) == 0.0);
  CHECK_NOTHROW(res.params.validate());
}

TEST_CASE("check_stability matches the frozen spectra") {
  SystemParams stable = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 0.5);
  const StabilityReport rep = check_stability(stable);
  CHECK(rep.stable);
  CHECK(std::abs(rep.max_real_part - refvals::kStableMaxRe) < 1e-9);

  SystemParams unstable = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 1.25);
  const StabilityReport rep2 = check_stability(unstable);
  CHECK_FALSE(rep2.stable);
  CHECK(std::abs(rep2.max_real_part - refvals::kUnstableMaxRe) < 1e-9);
}

TEST_CASE("beamsplitter-only coupling is stable across the rate grid") {
  for (double kappa : {0.01, 0.1, 0.3}) {
    for (double gamma : {1e-6, 1e-3}) {
      for (double G_minus : {0.05, 0.2, 0.3}) {
        const SystemParams p =
            SystemParams::symmetric(kappa, 0.9, gamma, G_minus, 0.0);
        CHECK(check_stability(p).stable);
      }
    }
  }
}
