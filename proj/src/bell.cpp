#include "ombell/bell.hpp"

#include <cmath>
#include <numbers>

#include "ombell/dynamics.hpp"
#include "ombell/errors.hpp"

namespace ombell {

namespace {

const cplx kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

using Vec4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4cd;

// Elementary modes of the detection stage: (a_o, c_o, reference 1,
// reference 2).  Each detector port is a fixed linear combination.
struct DetectionModes {
  Vec4 mu;       // mode means
  Mat4 N;        // <dx_i+ dx_j>
  Mat4 M;        // <dx_i dx_j>
  Vec4 d1, e1, d2, e2;
};

DetectionModes build_modes(const OutputGaussianState& state,
                           const DetectionConfig& cfg) {
  DetectionModes m;
  m.mu = Vec4::Zero();
  m.mu(0) = state.mean(0);
  m.mu(1) = state.mean(1);
  m.mu(2) = cfg.beta_1 * std::exp(kI * cfg.theta);
  m.mu(3) = cfg.beta_2 * std::exp(kI * cfg.phi);
  m.N = Mat4::Zero();
  m.M = Mat4::Zero();
  m.N.topLeftCorner<2, 2>() = state.normal;
  m.M.topLeftCorner<2, 2>() = state.anomalous;

  const double s1 = std::sqrt(cfg.eta_1), t1 = std::sqrt(1.0 - cfg.eta_1);
  const double s2 = std::sqrt(cfg.eta_2), t2 = std::sqrt(1.0 - cfg.eta_2);
  m.d1 << s1, 0, kI * t1, 0;
  m.e1 << kI * t1, 0, s1, 0;
  m.d2 << 0, s2, 0, kI * t2;
  m.e2 << 0, kI * t2, 0, s2;
  return m;
}

cplx mean_of(const DetectionModes& m, const Vec4& u) { return u.transpose() * m.mu; }

// Ordered pair moments of the fluctuation parts.
cplx pair_ff(const DetectionModes& m, const Vec4& u, const Vec4& v) {
  return u.transpose() * m.M * v;  // <df dg>
}
cplx pair_fcf(const DetectionModes& m, const Vec4& u, const Vec4& v) {
  return u.adjoint() * m.N * v;  // <df+ dg>
}
cplx pair_fcfc(const DetectionModes& m, const Vec4& u, const Vec4& v) {
  return u.adjoint() * m.M.conjugate() * v.conjugate();  // <df+ dg+>
}

// <f1+ f2+ f3 f4> by the displaced-Gaussian Wick expansion.
double fourth_moment(const DetectionModes& m, const Vec4& u1, const Vec4& u2,
                     const Vec4& u3, const Vec4& u4) {
  const cplx m1 = std::conj(mean_of(m, u1));
  const cplx m2 = std::conj(mean_of(m, u2));
  const cplx m3 = mean_of(m, u3);
  const cplx m4 = mean_of(m, u4);
  const cplx p12 = pair_fcfc(m, u1, u2);
  const cplx p13 = pair_fcf(m, u1, u3);
  const cplx p14 = pair_fcf(m, u1, u4);
  const cplx p23 = pair_fcf(m, u2, u3);
  const cplx p24 = pair_fcf(m, u2, u4);
  const cplx p34 = pair_ff(m, u3, u4);
  cplx tot = m1 * m2 * m3 * m4;
  tot += p12 * m3 * m4 + p13 * m2 * m4 + p14 * m2 * m3;
  tot += p23 * m1 * m4 + p24 * m1 * m3 + p34 * m1 * m2;
  tot += p12 * p34 + p13 * p24 + p14 * p23;
  return tot.real();
}

double intensity(const DetectionModes& m, const Vec4& u) {
  const cplx mu = mean_of(m, u);
  return (std::conj(mu) * mu + pair_fcf(m, u, u)).real();
}

}  // namespace

std::array<double, 4> detector_intensities(const OutputGaussianState& state,
                                           const DetectionConfig& cfg) {
  const DetectionModes m = build_modes(state, cfg);
  return {intensity(m, m.d1), intensity(m, m.e1), intensity(m, m.d2),
          intensity(m, m.e2)};
}

IntensityCorrelations intensity_correlations(const OutputGaussianState& state,
                                             const DetectionConfig& cfg) {
  const DetectionModes m = build_modes(state, cfg);
  IntensityCorrelations R;
  R.R_pp = fourth_moment(m, m.d1, m.d2, m.d2, m.d1);
  R.R_pm = fourth_moment(m, m.d1, m.e2, m.e2, m.d1);
  R.R_mp = fourth_moment(m, m.e1, m.d2, m.d2, m.e1);
  R.R_mm = fourth_moment(m, m.e1, m.e2, m.e2, m.e1);
  return R;
}

double correlation_coefficient(double R_pp, double R_pm, double R_mp,
                               double R_mm) {
  const double denom = R_pp + R_pm + R_mp + R_mm;
  if (denom == 0.0)
    throw NoSignalError("correlation coefficient undefined: total coincidence rate is zero");
  return (R_pp + R_mm - R_pm - R_mp) / denom;
}

double correlation_coefficient(const IntensityCorrelations& R) {
  return correlation_coefficient(R.R_pp, R.R_pm, R.R_mp, R.R_mm);
}

double correlation_coefficient(const OutputGaussianState& state,
                               const DetectionConfig& cfg) {
  return correlation_coefficient(intensity_correlations(state, cfg));
}

double correlation_coefficient_closed(double C, double D, double gamma_C,
                                      double gamma_D, double theta, double phi) {
  const double tb_minus_pb = theta - phi + gamma_C;
  const double tb_plus_pb = theta + phi - gamma_D + kPi;
  return C * std::cos(tb_minus_pb) + D * std::cos(tb_plus_pb);
}

ChshOptimum chsh_s_max(double C, double D) {
  if (C == 0.0 && D == 0.0)
    throw NoSignalError("CHSH angles undefined: C = D = 0");
  ChshOptimum out;
  out.S_max = 2.0 * std::sqrt(2.0) * std::sqrt(C * C + D * D);
  out.zeta_0 = std::atan2(-(C + D), -(C - D));
  out.zeta_star = out.zeta_0 + kPi / 2.0;
  out.barred_angles = {0.0, -out.zeta_star, -kPi / 2.0, out.zeta_star};
  return out;
}

BellMetrics bell_cd(const CorrelatorSet& corr) {
  const double fourth = std::max(corr.fourth, 0.0);
  const double Z = 2.0 * std::sqrt(fourth) + corr.n_a + corr.n_c;
  if (!(Z > 0.0))
    throw NoSignalError("normalization Z = 0: no photons reach the detectors");
  BellMetrics out;
  out.Z = Z;
  out.C = 2.0 * std::abs(corr.cross_phase) / Z;
  out.D = 2.0 * std::abs(corr.cross_squeeze) / Z;
  out.F = out.C * out.C + out.D * out.D;
  out.beta_opt = std::pow(fourth, 0.25);
  out.gamma_C = std::arg(corr.cross_phase);
  out.gamma_D = std::arg(corr.cross_squeeze);
  out.violation = out.F > 0.5;
  return out;
}

BellMetrics bell_metrics(const CorrelatorSet& corr) {
  BellMetrics out = bell_cd(corr);
  const ChshOptimum opt = chsh_s_max(out.C, out.D);
  out.S_max = opt.S_max;
  out.zeta_0 = opt.zeta_0;
  out.zeta_star = opt.zeta_star;
  out.barred_angles = opt.barred_angles;
  // Undo the phase absorption: tb = t - (gC - gD + pi)/2, pb = p + (gC + gD - pi)/2.
  const double t_off = 0.5 * (out.gamma_C - out.gamma_D + kPi);
  const double p_off = 0.5 * (out.gamma_C + out.gamma_D - kPi);
  out.raw_angles = {out.barred_angles[0] - t_off, out.barred_angles[1] + p_off,
                    out.barred_angles[2] - t_off, out.barred_angles[3] + p_off};
  return out;
}

double verify_chsh_from_angles(const OutputGaussianState& state,
                               const BellMetrics& metrics, double eta_1,
                               double eta_2) {
  DetectionConfig cfg;
  cfg.eta_1 = eta_1;
  cfg.eta_2 = eta_2;
  cfg.beta_1 = metrics.beta_opt;
  cfg.beta_2 = metrics.beta_opt;
  const double t = metrics.raw_angles[0];
  const double p = metrics.raw_angles[1];
  const double tp = metrics.raw_angles[2];
  const double pp = metrics.raw_angles[3];
  auto E = [&](double theta, double phi) {
    DetectionConfig c = cfg;
    c.theta = theta;
    c.phi = phi;
    return correlation_coefficient(state, c);
  };
  const double S = E(t, p) + E(t, pp) - E(tp, p) + E(tp, pp);
  return std::abs(S);
}

BellPointResult bell_from_params(const SystemParams& params,
                                 const InputState& inputs) {
  params.validate();
  inputs.validate();
  BellPointResult out;
  const ScatteringMatrix S = solve_full_scattering(params, 0.0);
  out.state = propagate_moments(S, inputs);
  out.correlators = correlator_set(out.state);
  out.metrics = bell_metrics(out.correlators);
  return out;
}

}  // namespace ombell
