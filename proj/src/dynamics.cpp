#include "ombell/dynamics.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

namespace ombell {

namespace {
const cplx kI(0.0, 1.0);

// Conjugate rows of the doubled system: row r+1 satisfies
// M[r+1, swap(c)] = conj(M[r, c]) with the within-pair column swap.
constexpr std::array<int, 6> kSwap6 = {1, 0, 3, 2, 5, 4};
}  // namespace

Mat6 drift_matrix(const SystemParams& params) {
  Mat6 M = Mat6::Zero();
  M(0, 0) = kI * params.delta_a - params.kappa_a / 2.0;
  M(0, 4) = -kI * params.G_plus;
  M(0, 5) = -kI * params.G_plus;
  M(2, 2) = kI * params.delta_c - params.kappa_c / 2.0;
  M(2, 4) = -kI * params.G_minus;
  M(2, 5) = -kI * params.G_minus;
  M(4, 4) = -kI * params.omega_m - params.gamma / 2.0;
  M(4, 0) = -kI * params.G_plus;
  M(4, 1) = -kI * params.G_plus;
  M(4, 2) = -kI * params.G_minus;
  M(4, 3) = -kI * params.G_minus;
  for (int r : {0, 2, 4})
    for (int c = 0; c < 6; ++c) M(r + 1, kSwap6[c]) = std::conj(M(r, c));
  return M;
}

Mat4x10 solve_drive_frame(const SystemParams& params, double w) {
  const Mat6 M = drift_matrix(params);
  const double ki_a = params.kappa_i_a();
  const double ki_c = params.kappa_i_c();

  Eigen::Matrix<cplx, 6, 10> L = Eigen::Matrix<cplx, 6, 10>::Zero();
  L(0, 0) = std::sqrt(params.kappa_e_a);
  L(0, 4) = std::sqrt(ki_a);
  L(1, 1) = std::sqrt(params.kappa_e_a);
  L(1, 5) = std::sqrt(ki_a);
  L(2, 2) = std::sqrt(params.kappa_e_c);
  L(2, 6) = std::sqrt(ki_c);
  L(3, 3) = std::sqrt(params.kappa_e_c);
  L(3, 7) = std::sqrt(ki_c);
  L(4, 8) = std::sqrt(params.gamma);
  L(5, 9) = std::sqrt(params.gamma);

  Eigen::Matrix<cplx, 4, 6> K = Eigen::Matrix<cplx, 4, 6>::Zero();
  K(0, 0) = std::sqrt(params.kappa_e_a);
  K(1, 1) = std::sqrt(params.kappa_e_a);
  K(2, 2) = std::sqrt(params.kappa_e_c);
  K(3, 3) = std::sqrt(params.kappa_e_c);

  Mat4x10 P = Mat4x10::Zero();
  for (int k = 0; k < 4; ++k) P(k, k) = 1.0;

  const Mat6 A = -kI * w * Mat6::Identity() - M;
  Eigen::PartialPivLU<Mat6> lu(A);
  if (!(lu.rcond() > 1e-12)) {
    std::ostringstream os;
    os << "scattering solve is numerically singular at drive-frame frequency w = " << w;
    throw NumericalError(os.str());
  }
  const Eigen::Matrix<cplx, 6, 10> G = lu.solve(L);
  return K * G - P;
}

ScatteringMatrix solve_full_scattering(const SystemParams& params, double omega) {
  ScatteringMatrix S;
  S.omega = omega;
  S.block_minus = solve_drive_frame(params, omega - params.omega_m);
  S.block_plus = solve_drive_frame(params, omega + params.omega_m);
  S.entries.row(0) = S.block_minus.row(0);
  S.entries.row(3) = S.block_minus.row(3);
  S.entries.row(1) = S.block_plus.row(1);
  S.entries.row(2) = S.block_plus.row(2);
  return S;
}

Row10 CoefficientSet::row_a() const {
  Row10 row = Row10::Zero();
  row(0) = A_d;
  row(3) = A_x;
  row(4) = A_dI;
  row(7) = A_xI;
  row(9) = A_m;
  return row;
}

Row10 CoefficientSet::row_c() const {
  Row10 row = Row10::Zero();
  row(1) = C_x;
  row(2) = C_d;
  row(5) = C_xI;
  row(6) = C_dI;
  row(8) = C_m;
  return row;
}

namespace {
Row10 conj_swap(const Row10& row) {
  Row10 out;
  for (int k = 0; k < kNumInputs; ++k) out(kConjSwap[k]) = std::conj(row(k));
  return out;
}
}  // namespace

Mat4x10 CoefficientSet::as_matrix() const {
  Mat4x10 S;
  S.row(0) = row_a();
  S.row(1) = conj_swap(row_a());
  S.row(2) = row_c();
  S.row(3) = conj_swap(row_c());
  return S;
}

BogolyubovFactors bogolyubov(double G_plus, double G_minus) {
  if (G_plus >= G_minus)
    throw CouplingOrderError("G_plus >= G_minus violated: no Bogolyubov transform exists");
  BogolyubovFactors out;
  out.G_script = std::sqrt(G_minus * G_minus - G_plus * G_plus);
  out.cosh_xi = G_minus / out.G_script;
  out.sinh_xi = G_plus / out.G_script;
  return out;
}

CoefficientSet rwa_coefficients(const SystemParams& params, double omega) {
  const double kappa = params.kappa_a;
  const double ke = params.kappa_e_a;
  const double ki = kappa - ke;
  const double gamma = params.gamma;
  const BogolyubovFactors bog = bogolyubov(params.G_plus, params.G_minus);
  const double G2 = bog.G_script * bog.G_script;

  const cplx chi_m = 1.0 / (gamma / 2.0 - kI * omega);
  const cplx chi_a = 1.0 / (kappa / 2.0 - kI * omega);
  const cplx chi_ae = chi_a / (1.0 + G2 * chi_a * chi_m);
  const double ch = bog.cosh_xi;
  const double sh = bog.sinh_xi;

  const cplx Aaa = chi_a * ch * ch - chi_ae * sh * sh;
  const cplx Acc = chi_ae * ch * ch - chi_a * sh * sh;
  const cplx Aac = (chi_a - chi_ae) * ch * sh;
  const cplx Aca = (chi_ae - chi_a) * ch * sh;

  CoefficientSet co;
  co.A_d = ke * Aaa - 1.0;
  co.C_d = ke * Acc - 1.0;
  co.A_x = ke * Aac;
  co.C_x = ke * Aca;
  co.A_dI = std::sqrt(ki * ke) * Aaa;
  co.C_dI = std::sqrt(ki * ke) * Acc;
  co.A_xI = std::sqrt(ki * ke) * Aac;
  co.C_xI = std::sqrt(ki * ke) * Aca;
  co.A_m = -kI * std::sqrt(gamma * ke) * params.G_plus * chi_m * chi_ae;
  co.C_m = -kI * std::sqrt(gamma * ke) * params.G_minus * chi_m * chi_ae;
  return co;
}

CoefficientSet rwa_large_cooperativity(double r, double r_e, double C_minus) {
  const double r_i = 1.0 - r_e;
  const double d = 1.0 - r * r;
  CoefficientSet co;
  co.A_d = 2.0 * r_e / d - 1.0;
  co.C_d = -2.0 * r_e * r * r / d - 1.0;
  co.A_x = 2.0 * r * r_e / d;
  co.C_x = -co.A_x;
  co.C_m = -2.0 * kI * std::sqrt(r_e) / (std::sqrt(C_minus) * d);
  co.A_m = r * co.C_m;
  co.A_dI = 2.0 * std::sqrt(r_e * r_i) / d;
  co.C_dI = -r * r * co.A_dI;
  co.A_xI = 2.0 * r * std::sqrt(r_e * r_i) / d;
  co.C_xI = -co.A_xI;
  return co;
}

ScatteringMatrix to_scattering(const CoefficientSet& coeffs, double omega) {
  ScatteringMatrix S;
  S.omega = omega;
  S.entries = coeffs.as_matrix();
  S.block_minus = S.entries;
  S.block_plus = S.entries;
  return S;
}

double commutator_residual(const Mat4x10& block) {
  double max_abs = 0.0;
  for (int i = 0; i < kNumOutputs; ++i) {
    for (int j = 0; j < kNumOutputs; ++j) {
      cplx sum = 0.0;
      for (int k = 0; k < kNumInputs; ++k)
        sum += static_cast<double>(kColumnSign[k]) * block(i, k) * std::conj(block(j, k));
      if (i == j) sum -= (i % 2 == 0) ? 1.0 : -1.0;
      max_abs = std::max(max_abs, std::abs(sum));
    }
  }
  return max_abs;
}

double commutator_residual(const ScatteringMatrix& S) {
  return std::max(commutator_residual(S.block_minus),
                  commutator_residual(S.block_plus));
}

}  // namespace ombell
