#include "ombell/moments.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <sstream>

#include "ombell/errors.hpp"

namespace ombell {

namespace {

// 1 for annihilation columns, 0 for conjugate columns.
constexpr std::array<double, 10> kAnnih = {1, 0, 1, 0, 1, 0, 1, 0, 1, 0};

std::array<double, 10> occupancies(const InputState& in) {
  return {in.n_e_a, in.n_e_a, in.n_e_c, in.n_e_c, in.n_i_a,
          in.n_i_a, in.n_i_c, in.n_i_c, in.n_m,   in.n_m};
}

// Coherent means of the ten input symbols at the analysis frequency: only the
// a_i+ and c_i slots carry a mean (the opposite-sideband slots belong to a
// different frequency and never pair with these rows).
Eigen::Matrix<cplx, 10, 1> mean_vector(const InputState& in) {
  Eigen::Matrix<cplx, 10, 1> u = Eigen::Matrix<cplx, 10, 1>::Zero();
  u(1) = std::conj(in.alpha_i);
  u(2) = in.chi_i;
  return u;
}

cplx factor_mean(const RowFactor& f, const Eigen::Matrix<cplx, 10, 1>& u) {
  const cplx m = f.row * u;
  return f.dagger ? std::conj(m) : m;
}

// Ordered pair expectation <f g> of two (possibly daggered) linear forms.
cplx factor_pair(const RowFactor& f, const RowFactor& g,
                 const std::array<double, 10>& n) {
  if (f.dagger == g.dagger) return 0.0;
  cplx sum = 0.0;
  if (!f.dagger) {
    // <f g+>: anti-normal occupancies n+1 on annihilation columns.
    for (int k = 0; k < kNumInputs; ++k)
      sum += f.row(k) * std::conj(g.row(k)) * (n[k] + kAnnih[k]);
  } else {
    // <f+ g>: normal occupancies n+1 on conjugate columns.
    for (int k = 0; k < kNumInputs; ++k)
      sum += std::conj(f.row(k)) * g.row(k) * (n[k] + 1.0 - kAnnih[k]);
  }
  return sum;
}

}  // namespace

cplx ordered_moment(std::span<const RowFactor> factors, const InputState& inputs) {
  const auto u = mean_vector(inputs);
  const auto n = occupancies(inputs);
  switch (factors.size()) {
    case 1:
      return factor_mean(factors[0], u);
    case 2:
      return factor_mean(factors[0], u) * factor_mean(factors[1], u) +
             factor_pair(factors[0], factors[1], n);
    case 4: {
      std::array<cplx, 4> mu;
      for (int k = 0; k < 4; ++k) mu[k] = factor_mean(factors[k], u);
      cplx p[4][4];
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          p[i][j] = factor_pair(factors[i], factors[j], n);
      cplx total = mu[0] * mu[1] * mu[2] * mu[3];
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          cplx rest = 1.0;
          for (int k = 0; k < 4; ++k)
            if (k != i && k != j) rest *= mu[k];
          total += p[i][j] * rest;
        }
      }
      total += p[0][1] * p[2][3] + p[0][2] * p[1][3] + p[0][3] * p[1][2];
      return total;
    }
    default:
      throw ConfigError("ordered_moment supports 1, 2 or 4 factors");
  }
}

OutputGaussianState propagate_moments(const ScatteringMatrix& S,
                                      const InputState& inputs) {
  // P = a_o+ row, Q = c_o row; both live in the same single-frequency block.
  const Row10 P = S.entries.row(1);
  const Row10 Q = S.entries.row(2);
  const auto u = mean_vector(inputs);
  const auto n = occupancies(inputs);

  const cplx mu_P = P * u;
  const cplx mu_Q = Q * u;

  cplx n_a_fl = 0.0, n_c_fl = 0.0, m_ac = 0.0;
  for (int k = 0; k < kNumInputs; ++k) {
    const double anti = n[k] + kAnnih[k];
    const double normal = n[k] + 1.0 - kAnnih[k];
    n_a_fl += P(k) * std::conj(P(k)) * anti;    // <dP dP+> = <da+ da>
    n_c_fl += std::conj(Q(k)) * Q(k) * normal;  // <dQ+ dQ> = <dc+ dc>
    m_ac += std::conj(P(k)) * Q(k) * normal;    // <dP+ dQ> = <da dc>
  }

  OutputGaussianState state;
  state.mean(0) = std::conj(mu_P);  // <a_o>
  state.mean(1) = mu_Q;             // <c_o>
  state.normal(0, 0) = n_a_fl.real();
  state.normal(1, 1) = n_c_fl.real();
  // <da+ dc> pairs two undaggered same-frequency forms and vanishes.
  state.anomalous(0, 1) = m_ac;
  state.anomalous(1, 0) = m_ac;
  return state;
}

double wick_fourth_moment(const OutputGaussianState& state) {
  const cplx muA = state.mean(0);
  const cplx muC = state.mean(1);
  const cplx N00 = state.normal(0, 0);
  const cplx N11 = state.normal(1, 1);
  const cplx N01 = state.normal(0, 1);
  const cplx M01 = state.anomalous(0, 1);
  const cplx total =
      std::norm(muA) * std::norm(muC) + N00 * std::norm(muC) +
      N11 * std::norm(muA) +
      2.0 * (N01 * muA * std::conj(muC)).real() +
      2.0 * (std::conj(M01) * muA * muC).real() + std::norm(M01) +
      std::norm(N01) + N00 * N11;
  return total.real();
}

CorrelatorSet correlator_set(const OutputGaussianState& state) {
  CorrelatorSet out;
  out.n_a = std::norm(state.mean(0)) + state.normal(0, 0).real();
  out.n_c = std::norm(state.mean(1)) + state.normal(1, 1).real();
  out.cross_phase = std::conj(state.mean(0)) * state.mean(1) + state.normal(0, 1);
  out.cross_squeeze = state.mean(0) * state.mean(1) + state.anomalous(0, 1);
  out.fourth = wick_fourth_moment(state);
  return out;
}

double OutputGaussianState::min_completion_eigenvalue() const {
  Eigen::Matrix4cd G;
  G.topLeftCorner<2, 2>() = normal;
  G.topRightCorner<2, 2>() = anomalous.conjugate();
  G.bottomLeftCorner<2, 2>() = anomalous;
  G.bottomRightCorner<2, 2>() =
      normal.transpose() + Eigen::Matrix2cd::Identity();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(G);
  return solver.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Closed-form transcription
// ---------------------------------------------------------------------------

CorrelatorSet reference_correlators(const CoefficientSet& c,
                                    const InputState& in) {
  const cplx al = in.alpha_i, ch = in.chi_i;
  const double nea = in.n_e_a, nec = in.n_e_c, nia = in.n_i_a,
               nic = in.n_i_c, nm = in.n_m;
  const double a2 = std::norm(al);
  const double x2 = std::norm(ch);
  const cplx Ad = c.A_d, Ax = c.A_x, AdI = c.A_dI, AxI = c.A_xI, Am = c.A_m;
  const cplx Cd = c.C_d, Cx = c.C_x, CdI = c.C_dI, CxI = c.C_xI, Cm = c.C_m;
  auto cj = [](cplx z) { return std::conj(z); };

  const cplx naa = std::norm(Ad) * (a2 + nea) + std::norm(Ax) * (x2 + nec + 1) +
                   cj(Ad) * Ax * cj(al) * cj(ch) + cj(Ax) * Ad * al * ch +
                   std::norm(AdI) * nia + std::norm(AxI) * (nic + 1) +
                   std::norm(Am) * (nm + 1);
  const cplx ncc = std::norm(Cd) * (x2 + nec) + std::norm(Cx) * (a2 + nea + 1) +
                   cj(Cd) * Cx * cj(al) * cj(ch) + cj(Cx) * Cd * al * ch +
                   std::norm(CdI) * nic + std::norm(CxI) * (nia + 1) +
                   std::norm(Cm) * nm;
  const cplx nac = cj(Ad) * Cx * cj(al) * cj(al) +
                   (cj(Ad) * Cd + cj(Ax) * Cx) * cj(al) * ch +
                   cj(Ax) * Cd * ch * ch;
  const cplx mac = Ad * Cx * (a2 + nea + 1) + Ax * Cd * (x2 + nec) +
                   Ad * Cd * al * ch + Ax * Cx * cj(al) * cj(ch) +
                   AdI * CxI * (nia + 1) + AxI * CdI * nic + Am * Cm * nm;

  CorrelatorSet out;
  out.n_a = naa.real();
  out.n_c = ncc.real();
  out.cross_phase = nac;
  out.cross_squeeze = mac;
  out.fourth = reference_fourth_transcribed(c, in).real();
  return out;
}

cplx reference_fourth_transcribed(const CoefficientSet& c, const InputState& in) {
  const cplx al = in.alpha_i, ch = in.chi_i;
  const double nea = in.n_e_a, nec = in.n_e_c, nia = in.n_i_a,
               nic = in.n_i_c, nm = in.n_m;
  const double a2 = std::norm(al);
  const double x2 = std::norm(ch);
  const double a1 = std::abs(al);  // the printed expression uses |alpha|
  const double x1 = std::abs(ch);  // and |chi| without squares in two brackets
  const cplx Ad = c.A_d, Ax = c.A_x, AdI = c.A_dI, AxI = c.A_xI, Am = c.A_m;
  const cplx Cd = c.C_d, Cx = c.C_x, CdI = c.C_dI, CxI = c.C_xI, Cm = c.C_m;
  auto cj = [](cplx z) { return std::conj(z); };
  auto n2 = [](cplx z) { return std::norm(z); };

  cplx t = 0.0;
  // Same-pair blocks.
  t += n2(Ad * Cx) * (a2 * a2 + a2 + 4 * a2 * nea + nea * nea);
  t += n2(Ax * Cd) * (x2 * x2 + 3 * x2 + 4 * x2 * nec + nec * nec + 2 * nec + 1);
  // Drive-coefficient brackets; |alpha| and |chi| appear unsquared as printed.
  t += n2(Ad) * (a1 + nea) *
       (n2(Cd) * (x2 + nec) + n2(CdI) * nic + n2(CxI) * (nia + 1) + n2(Cm) * nm);
  t += n2(Ax) * (x1 + nec + 1) *
       (n2(Cx) * (a2 + nea + 1) + n2(CdI) * nic + n2(CxI) * (nia + 1) + n2(Cm) * nm);
  // Internal-port and mechanical brackets.
  t += n2(AdI) * nia *
       (n2(Cd) * (x2 + nec) + n2(Cx) * (a2 + nea + 1) + n2(CdI) * nic + n2(Cm) * nm);
  t += n2(AxI) * (nic + 1) *
       (n2(Cd) * (x2 + nec) + n2(Cx) * (a2 + nea + 1) + n2(CxI) * (nia + 1) + n2(Cm) * nm);
  t += n2(Am) * (nm + 1) *
       (n2(Cd) * (x2 + nec) + n2(Cx) * (a2 + nea + 1) + n2(CdI) * nic + n2(CxI) * (nia + 1));
  // Pure same-port squares; the c-internal square appears garbled as n^2 + 1.
  t += n2(AdI * CxI) * nia * nia + n2(AxI * CdI) * (nic * nic + 1) +
       n2(Am * Cm) * (nm * nm + 2 * nm + 1);
  // Conjugate-coefficient brackets.
  t += cj(Ad) * cj(Cd) * cj(al) * cj(ch) *
       (Ax * Cx * cj(al) * cj(ch) + AdI * CxI * nia + AxI * CdI * (nic + 1) +
        Am * Cm * (nm + 1));
  t += cj(Ad) * cj(Cx) * (a2 + nea) *
       (Ax * Cd * (x2 + nec + 1) + AdI * CxI * nia + AxI * CdI * (nic + 1) +
        Am * Cm * (nm + 1));
  t += cj(Ax) * cj(Cd) * (x2 + nec + 1) *
       (Ad * Cx * (a2 + nea) + AdI * CxI * nia + AxI * CdI * (nic + 1) +
        Am * Cm * (nm + 1));
  t += cj(Ax) * cj(Cx) * al * ch *
       (Ad * Cd * al * ch + AdI * CxI * nia + AxI * CdI * (nic + 1) +
        Am * Cm * (nm + 1));
  t += cj(AdI) * cj(CxI) * nia *
       (Ad * Cd * al * ch + Ad * Cx * (a2 + nea) + Ax * Cd * (x2 + nec + 1) +
        Ax * Cx * cj(al) * cj(ch) + AxI * CdI * (nic + 1) + Am * Cm * (nm + 1));
  t += cj(AxI) * cj(CdI) * (nic + 1) *
       (Ad * Cd * al * ch + Ad * Cx * (a2 + nea) + Ax * Cd * (x2 + nec + 1) +
        Ax * Cx * cj(al) * cj(ch) + AdI * CxI * nia + Am * Cm * (nm + 1));
  t += cj(Am) * cj(Cm) * (nm + 1) *
       (Ad * Cd * al * ch + Ad * Cx * (a2 + nea) + Ax * Cd * (x2 + nec + 1) +
        Ax * Cx * cj(al) * cj(ch) + AdI * CxI * nia + AxI * CdI * (nic + 1));
  // Third-order-in-mean rows.
  t += n2(Ad) * cj(Cd) * Cx * cj(ch) * (cj(al) * a2 + 2.0 * cj(al) * nea) +
       n2(Ad) * Cd * cj(Cx) * ch * (al * a2 + 2.0 * al * nea);
  t += n2(Ax) * cj(Cd) * Cx * cj(al) *
           (cj(ch) * x2 + 2.0 * cj(ch) * nec + 2.0 * cj(ch)) +
       n2(Ax) * Cd * cj(Cx) * al * (ch * x2 + 2.0 * ch * nec + 2.0 * ch);
  t += cj(Ad) * Ax * n2(Cd) * cj(al) *
           (cj(ch) * x2 + 2.0 * cj(ch) * nec + cj(ch)) +
       Ad * cj(Ax) * n2(Cd) * al * (ch * x2 + 2.0 * ch * nec + ch);
  t += cj(Ad) * Ax * n2(Cx) * cj(ch) *
           (cj(al) * a2 + 2.0 * cj(al) * nea + cj(al)) +
       Ad * cj(Ax) * n2(Cx) * ch * (al * a2 + 2.0 * al * nea + al);
  return t;
}

std::vector<DefectTerm> fourth_order_defect_terms(const CoefficientSet& c,
                                                  const InputState& in) {
  const cplx al = in.alpha_i, ch = in.chi_i;
  const double nea = in.n_e_a, nec = in.n_e_c, nia = in.n_i_a,
               nic = in.n_i_c, nm = in.n_m;
  const double a2 = std::norm(al), a1 = std::abs(al);
  const double x2 = std::norm(ch), x1 = std::abs(ch);
  const cplx Ad = c.A_d, Ax = c.A_x, AdI = c.A_dI, AxI = c.A_xI, Am = c.A_m;
  const cplx Cd = c.C_d, Cx = c.C_x, CdI = c.C_dI, CxI = c.C_xI, Cm = c.C_m;
  auto cj = [](cplx z) { return std::conj(z); };
  auto n2 = [](cplx z) { return std::norm(z); };

  std::vector<DefectTerm> terms;
  terms.push_back({"wick-diagonal-external-a",
                   "same-port double pairing |A_d C_x|^2 n(n+1) omitted",
                   n2(Ad * Cx) * nea * (nea + 1)});
  terms.push_back({"wick-diagonal-external-c",
                   "same-port double pairing |A_x C_d|^2 n(n+1) omitted",
                   n2(Ax * Cd) * nec * (nec + 1)});
  terms.push_back({"wick-diagonal-internal-a",
                   "same-port double pairing |A_dI C_xI|^2 n(n+1) omitted",
                   n2(AdI * CxI) * nia * (nia + 1)});
  terms.push_back({"wick-diagonal-internal-c",
                   "same-port double pairing |A_xI C_dI|^2 n(n+1) omitted",
                   n2(AxI * CdI) * nic * (nic + 1)});
  terms.push_back({"wick-diagonal-mechanical",
                   "same-port double pairing |A_m C_m|^2 n(n+1) omitted",
                   n2(Am * Cm) * nm * (nm + 1)});
  terms.push_back({"internal-c-square-garble",
                   "printed square reads n^2 + 1 where the pairing gives (n+1)^2",
                   n2(AxI * CdI) * 2.0 * nic});
  terms.push_back({"missing-square-drive-a",
                   "printed |alpha| where the pairing gives |alpha|^2",
                   n2(Ad) * (a2 - a1) *
                       (n2(Cd) * (x2 + nec) + n2(CdI) * nic +
                        n2(CxI) * (nia + 1) + n2(Cm) * nm)});
  terms.push_back({"missing-square-drive-c",
                   "printed |chi| where the pairing gives |chi|^2",
                   n2(Ax) * (x2 - x1) *
                       (n2(Cx) * (a2 + nea + 1) + n2(CdI) * nic +
                        n2(CxI) * (nia + 1) + n2(Cm) * nm)});
  const cplx crossC = cj(Cd) * Cx * cj(al) * cj(ch) + Cd * cj(Cx) * al * ch;
  const cplx crossA = cj(Ad) * Ax * cj(al) * cj(ch) + Ad * cj(Ax) * al * ch;
  terms.push_back({"noise-occupancy-cross-mean-a",
                   "a-side noise-port occupancy times c-side cross-mean terms omitted",
                   (n2(AdI) * nia + n2(AxI) * (nic + 1) + n2(Am) * (nm + 1)) * crossC});
  terms.push_back({"noise-occupancy-cross-mean-c",
                   "c-side noise-port occupancy times a-side cross-mean terms omitted",
                   (n2(CdI) * nic + n2(CxI) * (nia + 1) + n2(Cm) * nm) * crossA});
  return terms;
}

cplx fourth_order_defect(const CoefficientSet& c, const InputState& in) {
  cplx sum = 0.0;
  for (const auto& term : fourth_order_defect_terms(c, in)) sum += term.value;
  return sum;
}

std::string transcription_errata_report(const CoefficientSet& c,
                                        const InputState& in) {
  const auto state = propagate_moments(to_scattering(c, 0.0), in);
  const double engine = wick_fourth_moment(state);
  const cplx transcribed = reference_fourth_transcribed(c, in);
  const cplx defect = fourth_order_defect(c, in);
  const double residual = std::abs(engine - (transcribed + defect).real());

  std::ostringstream os;
  os.precision(17);
  os << "fourth-order correlator transcription check\n";
  os << "  engine <a+ c+ c a>        = " << engine << "\n";
  os << "  transcribed closed form   = " << transcribed.real() << "\n";
  os << "  defect polynomial (total) = " << defect.real() << "\n";
  os << "  residual |engine - (transcribed + defect)| = " << residual << "\n";
  os << "defect terms (omitted or garbled in the printed closed form):\n";
  for (const auto& term : fourth_order_defect_terms(c, in)) {
    os << "  - " << term.label << ": " << term.description
       << "; value = " << term.value.real();
    if (term.value.imag() != 0.0) os << " + " << term.value.imag() << "i";
    os << "\n";
  }
  return os.str();
}

}  // namespace ombell
