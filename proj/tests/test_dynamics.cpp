#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "ombell/dynamics.hpp"
#include "ombell/model.hpp"
#include "reference_values.hpp"

using namespace ombell;

namespace {

double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

SystemParams bell_params() {
  return SystemParams::symmetric(refvals::kBellKappa, refvals::kBellRe,
                                 refvals::kBellGamma, refvals::kBellGminus,
                                 refvals::kBellR);
}

SystemParams generic_params() {
  SystemParams p;
  p.kappa_a = 0.1;
  p.kappa_c = 0.07;
  p.kappa_e_a = 0.09;
  p.kappa_e_c = 0.05;
  p.gamma = 1e-4;
  p.G_plus = 0.03;
  p.G_minus = 0.2;
  return p;
}

// Deterministic stream of stable parameter sets.
std::vector<SystemParams> stable_draws(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SystemParams> out;
  while (out.size() < count) {
    SystemParams p;
    p.kappa_a = 0.01 + 0.29 * u(rng);
    p.kappa_c = 0.01 + 0.29 * u(rng);
    p.kappa_e_a = p.kappa_a * (0.1 + 0.9 * u(rng));
    p.kappa_e_c = p.kappa_c * (0.1 + 0.9 * u(rng));
    p.gamma = 1e-6 + 1e-3 * u(rng);
    p.G_minus = 0.05 + 0.25 * u(rng);
    p.G_plus = 0.9 * u(rng) * p.G_minus;
    if (check_stability(p).stable) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("drift matrix decouples and is diagonal without coupling") {
  SystemParams p;
  p.kappa_a = 0.1;
  p.kappa_c = 0.07;
  p.kappa_e_a = 0.09;
  p.kappa_e_c = 0.05;
  p.gamma = 1e-4;
  p.G_plus = 0.0;
  p.G_minus = 0.0;
  const Mat6 M = drift_matrix(p);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) CHECK(std::abs(M(i, j)) == 0.0);
  const cplx i1(0.0, 1.0);
  CHECK(rel_err(M(0, 0), i1 * p.delta_a - p.kappa_a / 2.0) < 1e-15);
  CHECK(rel_err(M(1, 1), -i1 * p.delta_a - p.kappa_a / 2.0) < 1e-15);
  CHECK(rel_err(M(2, 2), i1 * p.delta_c - p.kappa_c / 2.0) < 1e-15);
  CHECK(rel_err(M(3, 3), -i1 * p.delta_c - p.kappa_c / 2.0) < 1e-15);
  CHECK(rel_err(M(4, 4), -i1 * p.omega_m - p.gamma / 2.0) < 1e-15);
  CHECK(rel_err(M(5, 5), i1 * p.omega_m - p.gamma / 2.0) < 1e-15);
}

TEST_CASE("drift trace equals minus the total damping") {
  for (const SystemParams& p : stable_draws(10, 0x51ee9a01)) {
    const cplx tr = drift_matrix(p).trace();
    CHECK(std::abs(tr.real() + p.kappa_a + p.kappa_c + p.gamma) < 1e-14);
    CHECK(std::abs(tr.imag()) < 1e-14);
  }
}

TEST_CASE("conjugate drift rows mirror the mode rows") {
  const Mat6 M = drift_matrix(generic_params());
  for (int pair = 0; pair < 3; ++pair) {
    const int mode = 2 * pair;
    const int conj_row = mode + 1;
    for (int j = 0; j < 6; ++j) {
      const int jswap = j ^ 1;  // partner column within each pair
      CHECK(std::abs(M(conj_row, j) - std::conj(M(mode, jswap))) < 1e-15);
    }
  }
}

TEST_CASE("empty cavity reflects with the closed-form Lorentzian") {
  SystemParams p;
  p.kappa_a = 0.01;
  p.kappa_c = 0.01;
  p.kappa_e_a = 0.009;
  p.kappa_e_c = 0.009;
  p.gamma = 1e-5;
  p.G_plus = 0.0;
  p.G_minus = 0.0;

  // Drive-frame solve: the a row sees the detuned Lorentzian.
  const Mat4x10 S0 = solve_drive_frame(p, 0.0);
  const cplx i1(0.0, 1.0);
  const cplx pred = p.kappa_e_a / (p.kappa_a / 2.0 - i1 * (0.0 + p.delta_a)) - 1.0;
  CHECK(std::abs(std::abs(S0(0, 0)) - std::abs(pred)) < 1e-12);
  // All cross-mode couplings vanish without the mechanical link.
  CHECK(std::abs(S0(0, 2)) == 0.0);
  CHECK(std::abs(S0(0, 8)) < 1e-15);
  CHECK(std::abs(S0(2, 0)) == 0.0);

  // Resonance-centered composite: at analysis frequency 0 each output sits on
  // its own cavity resonance, so the reflection is the real point 2 r_e - 1.
  const ScatteringMatrix S = solve_full_scattering(p, 0.0);
  CHECK(std::abs(S.entries(0, 0) - cplx(2.0 * p.r_e() - 1.0, 0.0)) < 1e-12);
  CHECK(std::abs(S.entries(2, 2) - cplx(2.0 * p.r_e() - 1.0, 0.0)) < 1e-12);
  // Internal-port leakage at resonance: 2 sqrt(r_e r_i).
  const double leak = 2.0 * std::sqrt(p.r_e() * p.r_i());
  CHECK(std::abs(S.entries(0, 4) - cplx(leak, 0.0)) < 1e-12);
}

TEST_CASE("generic drive-frame scattering matches frozen entries") {
  const Mat4x10 S = solve_drive_frame(generic_params(), 0.37);
  CHECK(rel_err(S(0, 0), refvals::kGenS00) < 1e-10);
  CHECK(rel_err(S(0, 1), refvals::kGenS01) < 1e-10);
  CHECK(rel_err(S(1, 3), refvals::kGenS13) < 1e-10);
  CHECK(rel_err(S(2, 2), refvals::kGenS22) < 1e-10);
  CHECK(rel_err(S(2, 8), refvals::kGenS28) < 1e-10);
  CHECK(rel_err(S(3, 5), refvals::kGenS35) < 1e-10);
  CHECK(rel_err(S(1, 9), refvals::kGenS19) < 1e-10);
  CHECK(rel_err(S(0, 4), refvals::kGenS04) < 1e-10);
}

TEST_CASE("composite scattering rows match the frozen operating point") {
  const ScatteringMatrix S = solve_full_scattering(bell_params(), 0.0);
  for (int k = 0; k < 10; ++k) {
    CHECK(std::abs(S.entries(1, k) - refvals::kBellRowAdag[k]) < 1e-12);
    CHECK(std::abs(S.entries(2, k) - refvals::kBellRowC[k]) < 1e-12);
  }
  CHECK(S.omega == 0.0);
  // Composite rows are drawn from the two single-frequency blocks.
  for (int k = 0; k < 10; ++k) {
    CHECK(S.entries(0, k) == S.block_minus(0, k));
    CHECK(S.entries(3, k) == S.block_minus(3, k));
    CHECK(S.entries(1, k) == S.block_plus(1, k));
    CHECK(S.entries(2, k) == S.block_plus(2, k));
  }
}

TEST_CASE("sideband-resolved coefficients match frozen values at resonance") {
  const SystemParams p = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 0.1);
  const CoefficientSet c = rwa_coefficients(p, 0.0);
  CHECK(rel_err(c.A_d, refvals::kRwa0Ad) < 1e-13);
  CHECK(rel_err(c.A_x, refvals::kRwa0Ax) < 1e-13);
  CHECK(rel_err(c.A_dI, refvals::kRwa0AdI) < 1e-13);
  CHECK(rel_err(c.A_xI, refvals::kRwa0AxI) < 1e-13);
  CHECK(rel_err(c.A_m, refvals::kRwa0Am) < 1e-13);
  CHECK(rel_err(c.C_d, refvals::kRwa0Cd) < 1e-13);
  CHECK(rel_err(c.C_x, refvals::kRwa0Cx) < 1e-13);
  CHECK(rel_err(c.C_dI, refvals::kRwa0CdI) < 1e-13);
  CHECK(rel_err(c.C_xI, refvals::kRwa0CxI) < 1e-13);
  CHECK(rel_err(c.C_m, refvals::kRwa0Cm) < 1e-13);
}

TEST_CASE("sideband-resolved coefficients match frozen values off resonance") {
  const SystemParams p = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 0.1);
  const CoefficientSet c = rwa_coefficients(p, 0.003);
  CHECK(rel_err(c.A_d, refvals::kRwa3Ad) < 1e-13);
  CHECK(rel_err(c.A_x, refvals::kRwa3Ax) < 1e-13);
  CHECK(rel_err(c.A_m, refvals::kRwa3Am) < 1e-13);
  CHECK(rel_err(c.C_d, refvals::kRwa3Cd) < 1e-13);
  CHECK(rel_err(c.C_x, refvals::kRwa3Cx) < 1e-13);
  CHECK(rel_err(c.C_m, refvals::kRwa3Cm) < 1e-13);
}

TEST_CASE("large-cooperativity limit approaches the resonant closed form") {
  // C_minus = 4 G_minus^2 / (kappa gamma) = 1e6 at these rates.
  SystemParams p = SystemParams::symmetric(0.01, 0.9, 1.6e-5, 0.2, 0.15);
  const CoefficientSet full = rwa_coefficients(p, 0.0);
  const CoefficientSet lim = rwa_large_cooperativity(0.15, 0.9, p.C_minus());
  CHECK(p.C_minus() == doctest::Approx(1e6).epsilon(1e-12));
  CHECK(rel_err(lim.A_d, full.A_d) < 1e-3);
  CHECK(rel_err(lim.A_x, full.A_x) < 1e-3);
  CHECK(rel_err(lim.A_dI, full.A_dI) < 1e-3);
  CHECK(rel_err(lim.A_xI, full.A_xI) < 1e-3);
  CHECK(rel_err(lim.A_m, full.A_m) < 1e-3);
  CHECK(rel_err(lim.C_d, full.C_d) < 1e-3);
  CHECK(rel_err(lim.C_x, full.C_x) < 1e-3);
  CHECK(rel_err(lim.C_dI, full.C_dI) < 1e-3);
  CHECK(rel_err(lim.C_xI, full.C_xI) < 1e-3);
  CHECK(rel_err(lim.C_m, full.C_m) < 1e-3);
}

TEST_CASE("full rows collapse onto the closed form in the resolved regime") {
  auto extract = [](const SystemParams& p) {
    const ScatteringMatrix S = solve_full_scattering(p, 0.0);
    // a_o couples to {a_i, c_i+, a_I, c_I+, b_i+}; c_o to the mirror set.
    std::array<cplx, 10> full{};
    full[0] = S.entries(0, 0);  // A_d
    full[1] = S.entries(0, 3);  // A_x
    full[2] = S.entries(0, 4);  // A_dI
    full[3] = S.entries(0, 7);  // A_xI
    full[4] = S.entries(0, 9);  // A_m
    full[5] = S.entries(2, 2);  // C_d
    full[6] = S.entries(2, 1);  // C_x
    full[7] = S.entries(2, 6);  // C_dI
    full[8] = S.entries(2, 5);  // C_xI
    full[9] = S.entries(2, 8);  // C_m
    return full;
  };
  auto closed = [](const SystemParams& p) {
    const CoefficientSet c = rwa_coefficients(p, 0.0);
    return std::array<cplx, 10>{c.A_d, c.A_x, c.A_dI, c.A_xI, c.A_m,
                                c.C_d, c.C_x, c.C_dI, c.C_xI, c.C_m};
  };

  const SystemParams p1 = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 0.1);
  const auto f1 = extract(p1);
  const auto r1 = closed(p1);
  double a_row_max = 0.0, c_row_max = 0.0;
  for (int k = 0; k < 5; ++k) a_row_max = std::max(a_row_max, std::abs(f1[k] - r1[k]));
  for (int k = 5; k < 10; ++k) c_row_max = std::max(c_row_max, std::abs(f1[k] - r1[k]));
  CHECK(a_row_max < 1e-3);
  CHECK(c_row_max < 1e-2);
  // The counter-rotating leakage shows up as a small imaginary part on the
  // direct C reflection.
  const double im_cd = std::abs(f1[5].imag());
  CHECK(im_cd > 0.003);
  CHECK(im_cd < 0.006);

  // Better sideband resolution (smaller kappa) shrinks every residual.
  const SystemParams p2 = SystemParams::symmetric(0.002, 0.9, 1e-5, 0.2, 0.1);
  const auto f2 = extract(p2);
  const auto r2 = closed(p2);
  for (int k = 0; k < 10; ++k) {
    CHECK(std::abs(f2[k] - r2[k]) < std::abs(f1[k] - r1[k]));
  }
}

TEST_CASE("bogolyubov weights satisfy the hyperbolic normalization") {
  const BogolyubovFactors triv = bogolyubov(0.0, 0.2);
  CHECK(triv.cosh_xi == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(triv.sinh_xi == 0.0);
  CHECK(triv.G_script == doctest::Approx(0.2).epsilon(1e-15));

  std::mt19937_64 rng(0xb0601u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double G_minus = 0.01 + 0.49 * u(rng);
    const double G_plus = 0.95 * u(rng) * G_minus;
    const BogolyubovFactors b = bogolyubov(G_plus, G_minus);
    CHECK(std::abs(b.cosh_xi * b.cosh_xi - b.sinh_xi * b.sinh_xi - 1.0) < 1e-12);
    CHECK(b.cosh_xi * b.G_script == doctest::Approx(G_minus).epsilon(1e-12));
    CHECK(b.sinh_xi * b.G_script == doctest::Approx(G_plus).epsilon(1e-12));
  }
  CHECK_THROWS_AS(bogolyubov(0.2, 0.2), CouplingOrderError);
  CHECK_THROWS_AS(bogolyubov(0.3, 0.2), CouplingOrderError);
}

TEST_CASE("scattering preserves the bosonic commutators") {
  const std::vector<double> omegas = {-1.7, -0.4, 0.0, 0.6, 1.9};
  for (const SystemParams& p : stable_draws(50, 0xc0117a70)) {
    for (double w : omegas) {
      const ScatteringMatrix S = solve_full_scattering(p, w);
      CHECK(commutator_residual(S) < 1e-9);
    }
  }
}

TEST_CASE("dropping the internal noise ports breaks the commutators") {
  const ScatteringMatrix S = solve_full_scattering(bell_params(), 0.0);
  Mat4x10 broken = S.block_minus;
  for (int j = 4; j <= 7; ++j) broken.col(j).setZero();
  CHECK(commutator_residual(S.block_minus) < 1e-9);
  CHECK(commutator_residual(broken) > 0.1);
}

TEST_CASE("coefficient rows occupy only their sideband-allowed slots") {
  const SystemParams p = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 0.1);
  const CoefficientSet c = rwa_coefficients(p, 0.0);

  const Row10 ra = c.row_a();
  CHECK(ra(0) == c.A_d);
  CHECK(ra(3) == c.A_x);
  CHECK(ra(4) == c.A_dI);
  CHECK(ra(7) == c.A_xI);
  CHECK(ra(9) == c.A_m);
  for (int j : {1, 2, 5, 6, 8}) CHECK(std::abs(ra(j)) == 0.0);

  const Row10 rc = c.row_c();
  CHECK(rc(2) == c.C_d);
  CHECK(rc(1) == c.C_x);
  CHECK(rc(6) == c.C_dI);
  CHECK(rc(5) == c.C_xI);
  CHECK(rc(8) == c.C_m);
  for (int j : {0, 3, 4, 7, 9}) CHECK(std::abs(rc(j)) == 0.0);

  const Mat4x10 m = c.as_matrix();
  for (int j = 0; j < 10; ++j) {
    CHECK(m(0, j) == ra(j));
    CHECK(m(2, j) == rc(j));
    CHECK(m(1, j) == std::conj(m(0, kConjSwap[j])));
    CHECK(m(3, j) == std::conj(m(2, kConjSwap[j])));
  }

  const ScatteringMatrix wrapped = to_scattering(c, 0.25);
  CHECK(wrapped.omega == 0.25);
  CHECK((wrapped.entries - m).cwiseAbs().maxCoeff() == 0.0);
  CHECK((wrapped.block_minus - m).cwiseAbs().maxCoeff() == 0.0);
  CHECK((wrapped.block_plus - m).cwiseAbs().maxCoeff() == 0.0);
}
