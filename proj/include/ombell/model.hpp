#pragma once

#include <complex>

#include "ombell/errors.hpp"

namespace ombell {

using cplx = std::complex<double>;

// Physical rates and couplings of the three-mode device.  All rates are in
// units of the mechanical frequency omega_m (hbar = 1); omega_m itself is
// kept as a field so scattering rows can be centered on the cavity
// resonances.
struct SystemParams {
  double omega_m = 1.0;
  double kappa_a = 0.0;    // total linewidth, cavity A
  double kappa_c = 0.0;    // total linewidth, cavity C
  double kappa_e_a = 0.0;  // external coupling, cavity A
  double kappa_e_c = 0.0;  // external coupling, cavity C
  double gamma = 0.0;      // mechanical linewidth
  double G_plus = 0.0;     // blue-sideband linearized coupling (cavity A)
  double G_minus = 0.0;    // red-sideband linearized coupling (cavity C)
  double delta_a = 1.0;    // detuning omega_drive - omega_cavity, cavity A
  double delta_c = -1.0;   // detuning omega_drive - omega_cavity, cavity C

  double kappa_i_a() const { return kappa_a - kappa_e_a; }
  double kappa_i_c() const { return kappa_c - kappa_e_c; }
  double r() const { return G_plus / G_minus; }
  double r_e() const { return kappa_e_a / kappa_a; }
  double r_i() const { return 1.0 - r_e(); }
  double C_minus() const { return 4.0 * G_minus * G_minus / (kappa_a * gamma); }

  // Symmetric-cavity construction used throughout the sweeps: equal total
  // linewidths, shared external-coupling fraction, G_plus = r * G_minus.
  static SystemParams symmetric(double kappa, double r_e, double gamma,
                                double G_minus, double r);

  // Throws ConfigError on out-of-range rates.  Does not reject
  // G_plus >= G_minus: the full solve remains well defined there and sweeps
  // flag such cells through the stability report instead.
  void validate() const;
};

// Coherent probe amplitudes and the five independent thermal occupations.
struct InputState {
  cplx alpha_i{0.0, 0.0};  // external coherent probe, cavity A port
  cplx chi_i{0.0, 0.0};    // external coherent probe, cavity C port
  double n_e_a = 0.0;      // external-port thermal occupation, A
  double n_e_c = 0.0;      // external-port thermal occupation, C
  double n_i_a = 0.0;      // internal-loss-port occupation, A
  double n_i_c = 0.0;      // internal-loss-port occupation, C
  double n_m = 0.0;        // mechanical bath occupation

  void validate() const;  // throws ConfigError on negative occupations
};

// Strong-drive description before linearization.
struct RawDriveSpec {
  double g_a = 0.0;  // single-photon coupling, cavity A
  double g_c = 0.0;  // single-photon coupling, cavity C
  cplx alpha_in_A{0.0, 0.0};
  cplx alpha_in_C{0.0, 0.0};
  double omega_a = 0.0;  // cavity resonance frequencies
  double omega_c = 0.0;
  double omega_d_A = 0.0;  // drive frequencies
  double omega_d_C = 0.0;
  double kappa_a = 0.0;
  double kappa_c = 0.0;
  double kappa_e_a = 0.0;
  double kappa_e_c = 0.0;
  double gamma = 0.0;
  double omega_m = 1.0;
};

struct LinearizeResult {
  SystemParams params;
  cplx alpha_A;  // steady-state intracavity amplitude, cavity A
  cplx alpha_C;
  cplx b_s;  // steady-state mechanical displacement
  int iterations = 0;
};

// Solves the coupled steady state by damped fixed-point iteration
// (tolerance 1e-12, at most 1000 iterations) and returns SystemParams with
// real nonnegative G_plus = |g_a alpha_A|, G_minus = |g_c alpha_C| (drive
// phases absorbed into mode redefinitions).  Detunings include the static
// mechanical displacement shift.  Throws ConvergenceError if the fixed point
// does not settle and CouplingOrderError if G_plus >= G_minus.
LinearizeResult linearize_drives(const RawDriveSpec& spec);

struct StabilityReport {
  double max_real_part = 0.0;  // largest real part among drift eigenvalues
  bool stable = false;         // max_real_part < 0
};

StabilityReport check_stability(const SystemParams& params);

// Thermal occupation 1/(exp(h f / kB T) - 1) for temperature in kelvin and
// frequency in hertz.  Throws ConfigError on nonpositive inputs.
double bose_occupancy(double temperature_K, double frequency_Hz);

}  // namespace ombell
