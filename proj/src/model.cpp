#include "ombell/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "ombell/dynamics.hpp"

namespace ombell {

namespace {
constexpr double kPlanck = 6.62607015e-34;     // J s
constexpr double kBoltzmann = 1.380649e-23;    // J / K

[[noreturn]] void bad_field(const char* field, double value) {
  std::ostringstream os;
  os << "invalid parameter " << field << " = " << value;
  throw ConfigError(os.str());
}
}  // namespace

SystemParams SystemParams::symmetric(double kappa, double r_e, double gamma,
                                     double G_minus, double r) {
  SystemParams p;
  p.kappa_a = kappa;
  p.kappa_c = kappa;
  p.kappa_e_a = r_e * kappa;
  p.kappa_e_c = r_e * kappa;
  p.gamma = gamma;
  p.G_minus = G_minus;
  p.G_plus = r * G_minus;
  return p;
}

void SystemParams::validate() const {
  if (!(omega_m > 0.0)) bad_field("omega_m", omega_m);
  if (!(kappa_a > 0.0)) bad_field("kappa_a", kappa_a);
  if (!(kappa_c > 0.0)) bad_field("kappa_c", kappa_c);
  if (!(kappa_e_a > 0.0) || kappa_e_a > kappa_a) bad_field("kappa_e_a", kappa_e_a);
  if (!(kappa_e_c > 0.0) || kappa_e_c > kappa_c) bad_field("kappa_e_c", kappa_e_c);
  if (!(gamma > 0.0)) bad_field("gamma", gamma);
  if (G_plus < 0.0) bad_field("G_plus", G_plus);
  if (!(G_minus > 0.0)) bad_field("G_minus", G_minus);
}

void InputState::validate() const {
  if (n_e_a < 0.0) bad_field("n_e_a", n_e_a);
  if (n_e_c < 0.0) bad_field("n_e_c", n_e_c);
  if (n_i_a < 0.0) bad_field("n_i_a", n_i_a);
  if (n_i_c < 0.0) bad_field("n_i_c", n_i_c);
  if (n_m < 0.0) bad_field("n_m", n_m);
}

LinearizeResult linearize_drives(const RawDriveSpec& spec) {
  const cplx i1(0.0, 1.0);
  cplx b_s = 0.0;
  cplx a_A = 0.0;
  cplx a_C = 0.0;
  bool converged = false;
  int iterations = 0;
  for (int it = 0; it < 1000; ++it) {
    const double shift = 2.0 * b_s.real();
    const cplx den_a =
        spec.kappa_a / 2.0 + i1 * (spec.omega_a - spec.omega_d_A + spec.g_a * shift);
    const cplx den_c =
        spec.kappa_c / 2.0 + i1 * (spec.omega_c - spec.omega_d_C + spec.g_c * shift);
    if (den_a == cplx(0.0) || den_c == cplx(0.0))
      throw NumericalError("steady-state denominator vanished during linearization");
    const cplx a_A_new = spec.alpha_in_A / den_a;
    const cplx a_C_new = spec.alpha_in_C / den_c;
    const cplx b_s_new =
        -i1 * (spec.g_a * std::norm(a_A_new) + spec.g_c * std::norm(a_C_new)) /
        (i1 * spec.omega_m + spec.gamma / 2.0);
    const double delta =
        std::abs(a_A_new - a_A) + std::abs(a_C_new - a_C) + std::abs(b_s_new - b_s);
    if (delta < 1e-12 * (1.0 + std::abs(a_A_new) + std::abs(a_C_new))) {
      a_A = a_A_new;
      a_C = a_C_new;
      b_s = b_s_new;
      iterations = it;
      converged = true;
      break;
    }
    a_A = 0.5 * a_A + 0.5 * a_A_new;
    a_C = 0.5 * a_C + 0.5 * a_C_new;
    b_s = 0.5 * b_s + 0.5 * b_s_new;
  }
  if (!converged)
    throw ConvergenceError("steady-state fixed point did not converge in 1000 iterations");

  const double G_plus = std::abs(spec.g_a * a_A);
  const double G_minus = std::abs(spec.g_c * a_C);
  if (G_plus >= G_minus)
    throw CouplingOrderError("G_plus >= G_minus violated by the linearized drives");

  LinearizeResult out;
  out.alpha_A = a_A;
  out.alpha_C = a_C;
  out.b_s = b_s;
  out.iterations = iterations;
  SystemParams p;
  p.omega_m = spec.omega_m;
  p.kappa_a = spec.kappa_a;
  p.kappa_c = spec.kappa_c;
  p.kappa_e_a = spec.kappa_e_a;
  p.kappa_e_c = spec.kappa_e_c;
  p.gamma = spec.gamma;
  p.G_plus = G_plus;
  p.G_minus = G_minus;
  const double shift = 2.0 * b_s.real();
  p.delta_a = spec.omega_d_A - spec.omega_a - spec.g_a * shift;
  p.delta_c = spec.omega_d_C - spec.omega_c - spec.g_c * shift;
  out.params = p;
  return out;
}

StabilityReport check_stability(const SystemParams& params) {
  const Mat6 M = drift_matrix(params);
  Eigen::ComplexEigenSolver<Mat6> solver(M, /*computeEigenvectors=*/false);
  double max_re = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 6; ++k)
    max_re = std::max(max_re, solver.eigenvalues()(k).real());
  StabilityReport report;
  report.max_real_part = max_re;
  report.stable = max_re < 0.0;
  return report;
}

double bose_occupancy(double temperature_K, double frequency_Hz) {
  if (!(temperature_K > 0.0)) bad_field("temperature_K", temperature_K);
  if (!(frequency_Hz > 0.0)) bad_field("frequency_Hz", frequency_Hz);
  const double x = kPlanck * frequency_Hz / (kBoltzmann * temperature_K);
  return 1.0 / std::expm1(x);
}

}  // namespace ombell
