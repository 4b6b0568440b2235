#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "ombell/model.hpp"

namespace ombell {

using Mat6 = Eigen::Matrix<cplx, 6, 6>;
using Mat4x10 = Eigen::Matrix<cplx, 4, 10>;
using Row10 = Eigen::Matrix<cplx, 1, 10>;

// Column layout of the ten input operators:
//   0 a_i   1 a_i+   2 c_i   3 c_i+   4 a_I   5 a_I+   6 c_I   7 c_I+
//   8 b_i   9 b_i+
// Row layout of the four outputs: 0 a_o, 1 a_o+, 2 c_o, 3 c_o+.
inline constexpr int kNumInputs = 10;
inline constexpr int kNumOutputs = 4;

// +1 for annihilation columns, -1 for conjugate columns.
inline constexpr std::array<int, 10> kColumnSign = {+1, -1, +1, -1, +1,
                                                    -1, +1, -1, +1, -1};
// Partner column within each operator/conjugate pair.
inline constexpr std::array<int, 10> kConjSwap = {1, 0, 3, 2, 5, 4, 7, 6, 9, 8};

// Frequency-resolved linear map from the ten inputs to the four outputs.
//
// omega is measured from the cavity resonances (omega = 0 probes each output
// at its own resonance).  Because the two resonances sit at opposite ends of
// the drive rotating frame, `entries` is assembled from two single-frequency
// solves: rows a_o and c_o+ from the drive-frame solve at omega - omega_m
// (`block_minus`), rows a_o+ and c_o from the solve at omega + omega_m
// (`block_plus`).  The commutator checks act on the single-frequency blocks,
// where the symplectic identity holds row-by-row.
struct ScatteringMatrix {
  double omega = 0.0;
  Mat4x10 entries;      // composite, resonance-centered rows
  Mat4x10 block_minus;  // drive-frame solve at omega - omega_m
  Mat4x10 block_plus;   // drive-frame solve at omega + omega_m
};

// Named coefficients of the sideband-resolved (rotating-wave) closed form.
// a_o couples only to {a_i, c_i+, a_I, c_I+, b_i+} and c_o only to
// {c_i, a_i+, c_I, a_I+, b_i}.
struct CoefficientSet {
  cplx A_d, A_x, A_dI, A_xI, A_m;
  cplx C_d, C_x, C_dI, C_xI, C_m;

  Row10 row_a() const;  // a_o row over the ten input columns
  Row10 row_c() const;  // c_o row
  Mat4x10 as_matrix() const;
};

// Drift matrix M of d/dt v = M v + inputs for v = (a, a+, c, c+, b, b+);
// conjugate rows are exact conjugates of the mode rows.
Mat6 drift_matrix(const SystemParams& params);

// Single-frequency scattering in the drive rotating frame:
// S(w) = K (-i w I - M)^{-1} L - P with sqrt(kappa_e)/sqrt(kappa_i)/
// sqrt(gamma) injections and direct reflection subtracted on the external
// ports (a_o = sqrt(kappa_e) a - a_i).  Throws NumericalError when the
// system matrix is numerically singular (condition estimate above 1e12).
Mat4x10 solve_drive_frame(const SystemParams& params, double w);

// Composite resonance-centered scattering (see ScatteringMatrix).
ScatteringMatrix solve_full_scattering(const SystemParams& params, double omega);

struct BogolyubovFactors {
  double cosh_xi;
  double sinh_xi;
  double G_script;  // sqrt(G_minus^2 - G_plus^2)
};

// Two-mode-squeezing weights cosh xi = G_minus / G_script,
// sinh xi = G_plus / G_script.  Throws CouplingOrderError if
// G_plus >= G_minus.
BogolyubovFactors bogolyubov(double G_plus, double G_minus);

// Sideband-resolved closed form at analysis frequency omega (same axis
// convention as ScatteringMatrix: 0 = cavity resonance).
CoefficientSet rwa_coefficients(const SystemParams& params, double omega);

// Large-cooperativity limit of rwa_coefficients at omega = 0.
CoefficientSet rwa_large_cooperativity(double r, double r_e, double C_minus);

// Wraps a coefficient set as a scattering matrix so the moment pipeline can
// run on either representation.  Within this closed form the two
// single-frequency blocks coincide with the composite entries.
ScatteringMatrix to_scattering(const CoefficientSet& coeffs, double omega);

// Largest violation of the bosonic commutation relations among the output
// rows, evaluated on both single-frequency blocks:
// max_ij | sum_k sign_k S_ik conj(S_jk) - g_ij | with g = diag(+1,-1,+1,-1).
double commutator_residual(const ScatteringMatrix& S);
double commutator_residual(const Mat4x10& block);

}  // namespace ombell
