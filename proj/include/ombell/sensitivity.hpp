#pragma once

#include <optional>

#include "ombell/model.hpp"

namespace ombell {

// First-order response of F to the three bath occupancies in the
// large-cooperativity sideband-resolved limit, about the zero-temperature
// working point.
struct SensitivityCoefficients {
  double F0 = 0.0;  // zero-noise figure of merit (2r-1)^2 + 4r^2
  double Fm = 0.0;  // dF/dn_m  (through the cooperativity, scales as 1/C_minus)
  double Fe = 0.0;  // dF/dn_e  (external ports, both modes together)
  double Fi = 0.0;  // dF/dn_i  (internal-loss ports, both modes together)
  double r = 0.0;
  double r_e = 0.0;
  double r_i = 0.0;
  double C_minus = 0.0;
};

SensitivityCoefficients sensitivity_coefficients(double r, double r_e,
                                                 double C_minus);

// Composition rule exactly as printed: F = F0 - Fm*n_m - Fe*n_e - Fi*n_i.
// The printed slopes are themselves negative, so composed literally noise
// *increases* F; the discrepancy is exposed, not silently fixed.
double compose_literal(const SensitivityCoefficients& s, double n_m,
                       double n_e, double n_i);

// Physical composition F = F0 - |Fm|*n_m - |Fe|*n_e - |Fi|*n_i, validated
// against finite_difference_sensitivity.
double compose_physical(const SensitivityCoefficients& s, double n_m,
                        double n_e, double n_i);

enum class Bath { mechanical, external, internal };

// Central finite difference dF/dn for one bath family through the full
// pipeline (scattering at analysis frequency 0 -> moments -> F).  "external"
// and "internal" step both cavity ports of the family together.  The baseline
// uses the given inputs; occupancies may go negative by half a step (the
// moment algebra is affine in n, so this is well-defined).
double finite_difference_sensitivity(const SystemParams& params,
                                     const InputState& inputs, Bath bath,
                                     double step = 1e-4);

// Drive strength alpha at which F crosses 1/2 for a given coupling-ratio
// deviation r_bar = 1/4 - r, in the strong-drive expansion.  Returns nullopt
// where the expansion gives no real solution.
std::optional<double> alpha_boundary(double r_bar, double r_e);

struct OptimalR {
  double r_opt = 0.0;  // arg max of the tolerable mechanical occupancy
  double n_T = 0.0;    // occupancy margin (F0 - 1/2) / |dF/dn_T| at r_opt
};

// Tolerable thermal occupancy n_T(r) = [1/2 - F0(r)] / F_T(r) with
// F_T = Fi/r_i (independent of r_e); maximized over r in (0, 1/4).
double tolerable_occupancy(double r);
OptimalR optimal_r(double r_e);

}  // namespace ombell
