#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "ombell/bell.hpp"
#include "ombell/dynamics.hpp"
#include "ombell/moments.hpp"
#include "reference_values.hpp"

using namespace ombell;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

SystemParams bell_params() {
  return SystemParams::symmetric(refvals::kBellKappa, refvals::kBellRe,
                                 refvals::kBellGamma, refvals::kBellGminus,
                                 refvals::kBellR);
}

InputState bell_inputs() {
  InputState in;
  in.alpha_i = refvals::kBellAlpha;
  in.chi_i = refvals::kBellAlpha;
  return in;
}

struct Draw {
  CoefficientSet coeffs;
  InputState inputs;
};

// Arbitrary complex coefficient sets and inputs: the engine/transcription
// identities are purely algebraic and must hold for any values.
Draw random_draw(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  auto z = [&] { return cplx(g(rng), g(rng)); };
  Draw d;
  d.coeffs.A_d = z();
  d.coeffs.A_x = z();
  d.coeffs.A_dI = z();
  d.coeffs.A_xI = z();
  d.coeffs.A_m = z();
  d.coeffs.C_d = z();
  d.coeffs.C_x = z();
  d.coeffs.C_dI = z();
  d.coeffs.C_xI = z();
  d.coeffs.C_m = z();
  d.inputs.alpha_i = z();
  d.inputs.chi_i = z();
  d.inputs.n_e_a = u(rng);
  d.inputs.n_e_c = u(rng);
  d.inputs.n_i_a = u(rng);
  d.inputs.n_i_c = u(rng);
  d.inputs.n_m = u(rng);
  return d;
}

// RowFactor views of the two output modes given the composite rows:
// P = <a_o+| and Q = <c_o| as linear forms over the ten input symbols.
RowFactor a_out(const ScatteringMatrix& S) { return {S.entries.row(1), true}; }
RowFactor a_out_dag(const ScatteringMatrix& S) {
  return {S.entries.row(1), false};
}
RowFactor c_out(const ScatteringMatrix& S) { return {S.entries.row(2), false}; }
RowFactor c_out_dag(const ScatteringMatrix& S) {
  return {S.entries.row(2), true};
}

}  // namespace

TEST_CASE("frozen operating point: all five correlators") {
  const ScatteringMatrix S = solve_full_scattering(bell_params(), 0.0);
  const OutputGaussianState state = propagate_moments(S, bell_inputs());
  const CorrelatorSet corr = correlator_set(state);
  CHECK(rel_err(corr.n_a, refvals::kBellNa) < 1e-12);
  CHECK(rel_err(corr.n_c, refvals::kBellNc) < 1e-12);
  CHECK(rel_err(corr.cross_phase, refvals::kBellCrossPhase) < 1e-12);
  CHECK(rel_err(corr.cross_squeeze, refvals::kBellCrossSqueeze) < 1e-12);
  CHECK(rel_err(corr.fourth, refvals::kBellFourth) < 1e-12);
}

TEST_CASE("vacuum inputs with beamsplitter-only coupling are dark") {
  // In the sideband-resolved closed form the red coupling alone cannot create
  // photons: every creation-column coefficient carries a factor of G_plus.
  const SystemParams p = SystemParams::symmetric(0.1, 0.9, 1e-5, 0.2, 0.0);
  const CoefficientSet c = rwa_coefficients(p, 0.0);
  const CorrelatorSet rwa =
      correlator_set(propagate_moments(to_scattering(c, 0.0), InputState{}));
  CHECK(rwa.n_a == 0.0);
  CHECK(rwa.n_c == 0.0);
  CHECK(std::abs(rwa.cross_phase) == 0.0);
  CHECK(std::abs(rwa.cross_squeeze) == 0.0);
  CHECK(rwa.fourth == 0.0);

  // The full model keeps the counter-rotating part of the red coupling, which
  // Stokes-scatters vacuum into mode c at second order in the sideband
  // resolution; mode a stays exactly decoupled at G_plus = 0.
  const CorrelatorSet full = correlator_set(
      propagate_moments(solve_full_scattering(p, 0.0), InputState{}));
  CHECK(full.n_a == 0.0);
  CHECK(full.n_c > 0.0);
  CHECK(full.n_c < 3e-3);
  const SystemParams resolved =
      SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 0.0);
  const CorrelatorSet narrow = correlator_set(
      propagate_moments(solve_full_scattering(resolved, 0.0), InputState{}));
  CHECK(narrow.n_c < full.n_c / 50.0);
}

TEST_CASE("vacuum second moments reduce to the creation-column sums") {
  const SystemParams p = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 0.1);
  const CoefficientSet c = rwa_coefficients(p, 0.0);
  const OutputGaussianState state =
      propagate_moments(to_scattering(c, 0.0), InputState{});
  // Only the conjugate (creation) input columns contribute at vacuum.
  const double n_a_hand =
      std::norm(c.A_x) + std::norm(c.A_xI) + std::norm(c.A_m);
  const double n_c_hand = std::norm(c.C_x) + std::norm(c.C_xI);
  const cplx m_hand = c.A_d * c.C_x + c.A_dI * c.C_xI;
  CHECK(rel_err(state.n_a_fluct(), n_a_hand) < 1e-14);
  CHECK(rel_err(state.n_c_fluct(), n_c_hand) < 1e-14);
  CHECK(rel_err(state.squeeze_fluct(), m_hand) < 1e-14);
}

TEST_CASE("thermal second moments match the hand-expanded pairings") {
  const SystemParams p = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 0.1);
  const CoefficientSet c = rwa_coefficients(p, 0.0);
  InputState in;
  in.n_e_a = 0.1;
  in.n_e_c = 0.2;
  in.n_i_a = 0.3;
  in.n_i_c = 0.4;
  in.n_m = 0.5;
  const OutputGaussianState state =
      propagate_moments(to_scattering(c, 0.0), in);
  const double n_a_hand = std::norm(c.A_d) * in.n_e_a +
                          std::norm(c.A_x) * (1.0 + in.n_e_c) +
                          std::norm(c.A_dI) * in.n_i_a +
                          std::norm(c.A_xI) * (1.0 + in.n_i_c) +
                          std::norm(c.A_m) * (1.0 + in.n_m);
  const cplx m_hand = c.A_d * c.C_x * (1.0 + in.n_e_a) +
                      c.A_x * c.C_d * in.n_e_c +
                      c.A_dI * c.C_xI * (1.0 + in.n_i_a) +
                      c.A_xI * c.C_dI * in.n_i_c + c.A_m * c.C_m * in.n_m;
  CHECK(rel_err(state.n_a_fluct(), n_a_hand) < 1e-14);
  CHECK(rel_err(state.squeeze_fluct(), m_hand) < 1e-14);
  // Same-frequency phase cross-moment has no thermal contribution.
  CHECK(std::abs(state.normal(0, 1)) == 0.0);
}

TEST_CASE("coherent amplitudes propagate linearly into the means") {
  const SystemParams p = SystemParams::symmetric(0.1, 0.9, 1e-5, 0.2, 0.0);
  const ScatteringMatrix S = solve_full_scattering(p, 0.0);
  InputState in;
  in.alpha_i = cplx(0.05, -0.01);
  in.chi_i = cplx(0.03, 0.02);
  const OutputGaussianState state = propagate_moments(S, in);
  const CorrelatorSet corr = correlator_set(state);
  // Without the blue-sideband coupling, mode a is a bare reflection.
  const cplx A_d = S.entries(0, 0);
  CHECK(rel_err(corr.n_a, std::norm(A_d) * std::norm(in.alpha_i)) < 1e-12);
  CHECK(rel_err(state.mean_a(), A_d * in.alpha_i) < 1e-12);

  // Doubling both drives quadruples the coherent intensities. Mode c keeps a
  // drive-independent spontaneous floor from the counter-rotating coupling,
  // so its driven part is what scales.
  const double floor_c = correlator_set(propagate_moments(S, InputState{})).n_c;
  InputState twice = in;
  twice.alpha_i *= 2.0;
  twice.chi_i *= 2.0;
  const CorrelatorSet corr2 = correlator_set(propagate_moments(S, twice));
  CHECK(rel_err(corr2.n_a, 4.0 * corr.n_a) < 1e-12);
  CHECK(rel_err(corr2.n_c - floor_c, 4.0 * (corr.n_c - floor_c)) < 1e-12);
}

TEST_CASE("phase cross-moment vanishes exactly without coherent drives") {
  const ScatteringMatrix S = solve_full_scattering(bell_params(), 0.0);
  InputState in;
  in.n_e_a = 0.3;
  in.n_m = 1.5;
  const CorrelatorSet corr = correlator_set(propagate_moments(S, in));
  CHECK(std::abs(corr.cross_phase) == 0.0);
}

TEST_CASE("second moments are affine in every occupancy") {
  const ScatteringMatrix S = solve_full_scattering(bell_params(), 0.0);
  auto n_a_at = [&](double n_m) {
    InputState in = bell_inputs();
    in.n_m = n_m;
    return correlator_set(propagate_moments(S, in)).n_a;
  };
  const double f0 = n_a_at(0.0), f1 = n_a_at(1.0), f2 = n_a_at(2.0);
  CHECK(std::abs(f2 - 2.0 * f1 + f0) < 1e-12 * std::max(1.0, std::abs(f2)));

  auto m_at = [&](double n_e) {
    InputState in = bell_inputs();
    in.n_e_a = n_e;
    in.n_e_c = n_e;
    return correlator_set(propagate_moments(S, in)).cross_squeeze;
  };
  const cplx g0 = m_at(0.0), g1 = m_at(0.5), g2 = m_at(1.0);
  CHECK(std::abs(g2 - 2.0 * g1 + g0) < 1e-12 * std::max(1.0, std::abs(g2)));
}

TEST_CASE("engine matches the transcribed second moments on arbitrary draws") {
  std::mt19937_64 rng(0x2d0a7e51u);
  for (int k = 0; k < 200; ++k) {
    const Draw d = random_draw(rng);
    const OutputGaussianState state =
        propagate_moments(to_scattering(d.coeffs, 0.0), d.inputs);
    const CorrelatorSet engine = correlator_set(state);
    const CorrelatorSet ref = reference_correlators(d.coeffs, d.inputs);
    CHECK(rel_err(engine.n_a, ref.n_a) < 1e-9);
    CHECK(rel_err(engine.n_c, ref.n_c) < 1e-9);
    CHECK(rel_err(engine.cross_phase, ref.cross_phase) < 1e-9);
    CHECK(rel_err(engine.cross_squeeze, ref.cross_squeeze) < 1e-9);
  }
}

TEST_CASE("transcribed fourth moment equals the engine up to the defect") {
  std::mt19937_64 rng(0x4f00d5u);
  double worst_literal = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Draw d = random_draw(rng);
    // The Gaussian-state shortcut assumes the output commutators that any
    // physical scattering matrix satisfies; arbitrary coefficient draws do
    // not, so the identity is stated against the ordered four-factor engine.
    const ScatteringMatrix S = to_scattering(d.coeffs, 0.0);
    const std::array<RowFactor, 4> heading = {a_out_dag(S), c_out_dag(S),
                                              c_out(S), a_out(S)};
    const double engine = ordered_moment(heading, d.inputs).real();
    const cplx transcribed = reference_fourth_transcribed(d.coeffs, d.inputs);
    const cplx defect = fourth_order_defect(d.coeffs, d.inputs);
    CHECK(rel_err(engine, (transcribed + defect).real()) < 1e-9);
    worst_literal =
        std::max(worst_literal, rel_err(engine, transcribed.real()));

    // The defect polynomial is deterministic: recomputing it reproduces the
    // mismatch bit for bit.
    CHECK(fourth_order_defect(d.coeffs, d.inputs) == defect);
  }
  // The omissions are material, not roundoff.
  CHECK(worst_literal > 0.1);
}

TEST_CASE("defect terms carry labels and a nonzero total at a generic point") {
  std::mt19937_64 rng(0xe77a7au);
  const Draw d = random_draw(rng);
  const auto terms = fourth_order_defect_terms(d.coeffs, d.inputs);
  CHECK(terms.size() == 10);
  for (const auto& t : terms) {
    CHECK_FALSE(t.label.empty());
    CHECK_FALSE(t.description.empty());
  }
  CHECK(std::abs(fourth_order_defect(d.coeffs, d.inputs)) > 1e-6);

  const std::string report =
      transcription_errata_report(d.coeffs, d.inputs);
  CHECK(report.find("defect terms") != std::string::npos);
  CHECK(report.find("wick-diagonal-external-a") != std::string::npos);
  // Deterministic content.
  CHECK(report == transcription_errata_report(d.coeffs, d.inputs));
}

TEST_CASE("reference correlators agree with the engine at the resolved point") {
  const SystemParams p = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, 0.1);
  const CoefficientSet c = rwa_coefficients(p, 0.0);
  InputState in = bell_inputs();
  in.n_e_a = 0.01;
  in.n_e_c = 0.01;
  in.n_m = 0.4;
  const CorrelatorSet engine =
      correlator_set(propagate_moments(to_scattering(c, 0.0), in));
  const CorrelatorSet ref = reference_correlators(c, in);
  CHECK(rel_err(engine.n_a, ref.n_a) < 1e-12);
  CHECK(rel_err(engine.n_c, ref.n_c) < 1e-12);
  CHECK(rel_err(engine.cross_phase, ref.cross_phase) < 1e-12);
  CHECK(rel_err(engine.cross_squeeze, ref.cross_squeeze) < 1e-12);
  const double patched =
      (reference_fourth_transcribed(c, in) + fourth_order_defect(c, in)).real();
  CHECK(rel_err(engine.fourth, patched) < 1e-12);
}

TEST_CASE("ordered_moment reproduces the dedicated propagation") {
  const ScatteringMatrix S = solve_full_scattering(bell_params(), 0.0);
  const InputState in = bell_inputs();
  const CorrelatorSet corr = correlator_set(propagate_moments(S, in));

  const RowFactor a = a_out(S), ad = a_out_dag(S);
  const RowFactor c = c_out(S), cd = c_out_dag(S);

  const std::array<RowFactor, 2> na_prod = {ad, a};
  CHECK(rel_err(ordered_moment(na_prod, in), cplx(corr.n_a, 0.0)) < 1e-12);
  const std::array<RowFactor, 2> cp_prod = {ad, c};
  CHECK(rel_err(ordered_moment(cp_prod, in), corr.cross_phase) < 1e-12);
  const std::array<RowFactor, 2> cs_prod = {a, c};
  CHECK(rel_err(ordered_moment(cs_prod, in), corr.cross_squeeze) < 1e-12);
  const std::array<RowFactor, 4> fourth_prod = {ad, cd, c, a};
  CHECK(rel_err(ordered_moment(fourth_prod, in), cplx(corr.fourth, 0.0)) <
        1e-12);
  const std::array<RowFactor, 1> mean_prod = {a};
  CHECK(rel_err(ordered_moment(mean_prod, in),
                propagate_moments(S, in).mean_a()) < 1e-14);
}

TEST_CASE("commuting-mode factor orderings coincide") {
  const ScatteringMatrix S = solve_full_scattering(bell_params(), 0.0);
  const InputState in = bell_inputs();
  const std::array<RowFactor, 4> ca = {a_out_dag(S), c_out_dag(S), c_out(S),
                                       a_out(S)};
  const std::array<RowFactor, 4> ac = {a_out_dag(S), c_out_dag(S), a_out(S),
                                       c_out(S)};
  // a_o and c_o commute, so <a+ c+ c a> = <a+ c+ a c> up to the (tiny)
  // commutator residual of the solved rows.
  CHECK(std::abs(ordered_moment(ca, in) - ordered_moment(ac, in)) < 1e-12);
}

TEST_CASE("ordered_moment rejects unsupported factor counts") {
  const ScatteringMatrix S = solve_full_scattering(bell_params(), 0.0);
  const std::array<RowFactor, 3> three = {a_out(S), c_out(S), a_out_dag(S)};
  CHECK_THROWS_AS(ordered_moment(three, bell_inputs()), ConfigError);
}

TEST_CASE("propagated states are physical") {
  std::mt19937_64 rng(0x9b1ce5u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int produced = 0;
  while (produced < 40) {
    SystemParams p;
    p.kappa_a = 0.01 + 0.29 * u(rng);
    p.kappa_c = 0.01 + 0.29 * u(rng);
    p.kappa_e_a = p.kappa_a * (0.1 + 0.9 * u(rng));
    p.kappa_e_c = p.kappa_c * (0.1 + 0.9 * u(rng));
    p.gamma = 1e-6 + 1e-3 * u(rng);
    p.G_minus = 0.05 + 0.25 * u(rng);
    p.G_plus = 0.9 * u(rng) * p.G_minus;
    if (!check_stability(p).stable) continue;
    ++produced;

    InputState in;
    in.alpha_i = cplx(0.1 * u(rng), 0.1 * u(rng));
    in.chi_i = cplx(0.1 * u(rng), 0.1 * u(rng));
    in.n_e_a = u(rng);
    in.n_e_c = u(rng);
    in.n_i_a = u(rng);
    in.n_i_c = u(rng);
    in.n_m = 3.0 * u(rng);

    const ScatteringMatrix S = solve_full_scattering(p, 0.0);
    const OutputGaussianState state = propagate_moments(S, in);
    const CorrelatorSet corr = correlator_set(state);
    CHECK(corr.n_a >= 0.0);
    CHECK(corr.n_c >= 0.0);
    CHECK(corr.fourth >= -1e-12);
    CHECK(state.min_completion_eigenvalue() >= -1e-12);
    // Two-mode Cauchy-Schwarz bounds on the fluctuations.
    const double na = state.n_a_fluct();
    const double nc = state.n_c_fluct();
    CHECK(std::norm(state.normal(0, 1)) <= na * nc + 1e-12);
    CHECK(std::norm(state.squeeze_fluct()) <= na * (nc + 1.0) + 1e-12);
  }
}
