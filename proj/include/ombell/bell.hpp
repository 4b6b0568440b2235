#pragma once

#include <array>

#include "ombell/model.hpp"
#include "ombell/moments.hpp"

namespace ombell {

// Homodyne-style detection layout: each output mode is mixed with a strong
// classical reference on an eta beamsplitter and the two difference ports are
// photon-counted.
struct DetectionConfig {
  double eta_1 = 0.5;   // beamsplitter transmissivity, mode a chain
  double eta_2 = 0.5;   // beamsplitter transmissivity, mode c chain
  double beta_1 = 0.0;  // reference amplitude, mode a chain (real, >= 0)
  double beta_2 = 0.0;  // reference amplitude, mode c chain
  double theta = 0.0;   // reference phase, mode a chain
  double phi = 0.0;     // reference phase, mode c chain
};

// Mean photon numbers at the four detector ports {d1, e1, d2, e2}.
std::array<double, 4> detector_intensities(const OutputGaussianState& state,
                                           const DetectionConfig& cfg);

// Fourth-order coincidences between the two detection chains:
//   R_pp = <d1+ d2+ d2 d1>, R_pm = <d1+ e2+ e2 d1>,
//   R_mp = <e1+ d2+ d2 e1>, R_mm = <e1+ e2+ e2 e1>.
struct IntensityCorrelations {
  double R_pp = 0.0;
  double R_pm = 0.0;
  double R_mp = 0.0;
  double R_mm = 0.0;

  double numerator() const { return R_pp - R_pm - R_mp + R_mm; }
  double denominator() const { return R_pp + R_pm + R_mp + R_mm; }
};

IntensityCorrelations intensity_correlations(const OutputGaussianState& state,
                                             const DetectionConfig& cfg);

// (R_pp + R_mm - R_pm - R_mp) / (R_pp + R_mm + R_pm + R_mp).
// Throws NoSignalError on a zero denominator.
double correlation_coefficient(double R_pp, double R_pm, double R_mp,
                               double R_mm);
double correlation_coefficient(const IntensityCorrelations& R);

// Normalized correlation coefficient E(theta, phi) for one angle pair,
// evaluated through the full detection chain.
double correlation_coefficient(const OutputGaussianState& state,
                               const DetectionConfig& cfg);

// Correlation coefficient in the closed form, exact for balanced
// beamsplitters at the optimal reference amplitude:
//   E = [C cos(tb - pb) + D cos(tb + pb)] with barred angles
//   tb = theta + (gamma_C - gamma_D + pi)/2, pb = phi - (gamma_C + gamma_D - pi)/2.
double correlation_coefficient_closed(double C, double D, double gamma_C,
                                      double gamma_D, double theta, double phi);

// Angle optimization of the CHSH sum S(zeta) = 2(C+D)cos(zeta)
// + 2(D-C)sin(zeta) over the barred angle parameterization.
struct ChshOptimum {
  double S_max = 0.0;   // 2*sqrt(2)*sqrt(C^2 + D^2)
  double zeta_0 = 0.0;  // tan(zeta_0) = (C+D)/(C-D); maximum at zeta_0 + pi/2
  double zeta_star = 0.0;
  // Barred angle set achieving S = S_max: tb = 0, pb = -zeta*, tb' = -pi/2,
  // pb' = +zeta*.
  std::array<double, 4> barred_angles{};  // {tb, pb, tb_prime, pb_prime}
};

// Throws NoSignalError when C == D == 0 (no preferred angles exist).
ChshOptimum chsh_s_max(double C, double D);

// Interference visibilities and the violation figure of merit.
struct BellMetrics {
  double C = 0.0;       // phase-quadrature visibility
  double D = 0.0;       // squeeze-quadrature visibility
  double Z = 0.0;       // normalization 2*sqrt(fourth) + n_a + n_c
  double F = 0.0;       // C^2 + D^2; > 1/2 violates the CHSH bound
  double beta_opt = 0.0;  // optimal reference amplitude, fourth^(1/4)
  double gamma_C = 0.0;   // arg <a_o+ c_o>
  double gamma_D = 0.0;   // arg <a_o c_o>
  bool violation = false; // F > 1/2

  // CHSH assembly S = E(t,p) + E(t,p') - E(t',p) + E(t',p'):
  double S_max = 0.0;
  double zeta_0 = 0.0;
  double zeta_star = 0.0;
  std::array<double, 4> barred_angles{};  // {tb, pb, tb_prime, pb_prime}
  std::array<double, 4> raw_angles{};     // {t, p, t_prime, p_prime}
};

// C, D, Z, beta_opt, F, gamma_C, gamma_D from a correlator set.
// Throws NoSignalError when Z == 0 (no photons reach the detectors).
BellMetrics bell_cd(const CorrelatorSet& corr);

// Adds the CHSH assembly (chsh_s_max plus raw LO phases an experimenter
// would set) to bell_cd.
BellMetrics bell_metrics(const CorrelatorSet& corr);

// Re-derives S at the metrics' raw angle set by running the full detection
// chain (intensity correlations at beta_opt, balanced beamsplitters) four
// times and assembling E(t,p) + E(t,p') - E(t',p) + E(t',p'). Returns |S|.
double verify_chsh_from_angles(const OutputGaussianState& state,
                               const BellMetrics& metrics, double eta_1 = 0.5,
                               double eta_2 = 0.5);

// Convenience pipeline: solve the scattering problem at analysis frequency 0,
// propagate moments, and evaluate the Bell metrics.
struct BellPointResult {
  OutputGaussianState state;
  CorrelatorSet correlators;
  BellMetrics metrics;
};

BellPointResult bell_from_params(const SystemParams& params,
                                 const InputState& inputs);

}  // namespace ombell
