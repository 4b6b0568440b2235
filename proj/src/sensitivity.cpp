#include "ombell/sensitivity.hpp"

#include <cmath>
#include <vector>

#include "ombell/bell.hpp"
#include "ombell/dynamics.hpp"
#include "ombell/errors.hpp"
#include "ombell/moments.hpp"

namespace ombell {

namespace {
double F0_of(double r) { return (2.0 * r - 1.0) * (2.0 * r - 1.0) + 4.0 * r * r; }

// Common slope factor [(2r-1)^2 + r^2(16r-1)]/r (positive on (0, 1/4)).
double FT_abs(double r) {
  return ((2.0 * r - 1.0) * (2.0 * r - 1.0) + r * r * (16.0 * r - 1.0)) / r;
}
}  // namespace

SensitivityCoefficients sensitivity_coefficients(double r, double r_e,
                                                 double C_minus) {
  if (!(r > 0.0 && r < 1.0))
    throw ConfigError("sensitivity coefficients require 0 < r < 1");
  if (!(r_e > 0.0 && r_e <= 1.0))
    throw ConfigError("sensitivity coefficients require 0 < r_e <= 1");
  if (!(C_minus > 0.0))
    throw ConfigError("sensitivity coefficients require C_minus > 0");
  const double r_i = 1.0 - r_e;
  SensitivityCoefficients s;
  s.r = r;
  s.r_e = r_e;
  s.r_i = r_i;
  s.C_minus = C_minus;
  s.F0 = F0_of(r);
  s.Fm = -2.0 *
         ((2.0 * r - 1.0) * (2.0 * r - 1.0) + 2.0 * r * r * (10.0 * r - 1.0)) /
         C_minus;
  s.Fe = -FT_abs(r) * (r_e * r_e + r_i * r_i) / r_e;
  s.Fi = -FT_abs(r) * r_i;
  return s;
}

double compose_literal(const SensitivityCoefficients& s, double n_m,
                       double n_e, double n_i) {
  return s.F0 - s.Fm * n_m - s.Fe * n_e - s.Fi * n_i;
}

double compose_physical(const SensitivityCoefficients& s, double n_m,
                        double n_e, double n_i) {
  return s.F0 - std::abs(s.Fm) * n_m - std::abs(s.Fe) * n_e -
         std::abs(s.Fi) * n_i;
}

double finite_difference_sensitivity(const SystemParams& params,
                                     const InputState& inputs, Bath bath,
                                     double step) {
  params.validate();
  if (!check_stability(params).stable)
    throw NumericalError("finite-difference sensitivity requires stable parameters");
  const ScatteringMatrix S = solve_full_scattering(params, 0.0);
  // InputState::validate is deliberately not applied to the stepped points:
  // the moment algebra is affine in the occupancies, so half-step negative
  // values are well-defined.
  auto F_of = [&](const InputState& in) {
    return bell_cd(correlator_set(propagate_moments(S, in))).F;
  };
  InputState up = inputs;
  InputState down = inputs;
  switch (bath) {
    case Bath::mechanical:
      up.n_m += step;
      down.n_m -= step;
      break;
    case Bath::external:
      up.n_e_a += step;
      up.n_e_c += step;
      down.n_e_a -= step;
      down.n_e_c -= step;
      break;
    case Bath::internal:
      up.n_i_a += step;
      up.n_i_c += step;
      down.n_i_a -= step;
      down.n_i_c -= step;
      break;
  }
  return (F_of(up) - F_of(down)) / (2.0 * step);
}

std::optional<double> alpha_boundary(double r_bar, double r_e) {
  if (!(r_bar > 0.0)) throw ConfigError("alpha_boundary requires r_bar > 0");
  if (!(r_e > 0.0 && r_e <= 1.0))
    throw ConfigError("alpha_boundary requires 0 < r_e <= 1");
  const double K0 = 28.0 * r_e * r_e;
  const double K1 = 2.0 * (1.0 - 2.0 * r_e + 4.0 * r_e * r_e);
  const double K2 = 2.0 * (1.0 - r_e) * (1.0 - r_e);
  const double num =
      r_e * r_bar *
      (1.0 - 4.0 * r_bar - 6.0 * r_bar * r_bar - 12.0 * r_bar * r_bar * r_bar);
  const double den = K0 * r_bar * r_bar + K1 * r_bar + K2;
  const double radicand = num / den;
  if (radicand < 0.0) return std::nullopt;
  return std::sqrt(radicand);
}

double tolerable_occupancy(double r) {
  // n_T = [1/2 - F0]/F_T with F_T = Fi/r_i = -FT_abs (both negative on (0,1/4)).
  return (0.5 - F0_of(r)) / (-FT_abs(r));
}

OptimalR optimal_r(double r_e) {
  if (!(r_e > 0.0 && r_e < 1.0))
    throw ConfigError("optimal_r requires 0 < r_e < 1");
  const double lo = 1e-4;
  const double hi = 0.25 - 1e-4;
  // Grid prescan guards against multimodality, then golden-section refines.
  const int n_scan = 2001;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<double> xs(n_scan);
  for (int k = 0; k < n_scan; ++k) {
    xs[k] = lo + (hi - lo) * static_cast<double>(k) / (n_scan - 1);
    const double v = tolerable_occupancy(xs[k]);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = xs[std::max(0, best - 2)];
  double b = xs[std::min(n_scan - 1, best + 2)];
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  while (b - a > 1e-12) {
    if (tolerable_occupancy(c) > tolerable_occupancy(d)) {
      b = d;
      d = c;
      c = b - gr * (b - a);
    } else {
      a = c;
      c = d;
      d = a + gr * (b - a);
    }
  }
  OptimalR out;
  out.r_opt = 0.5 * (a + b);
  out.n_T = tolerable_occupancy(out.r_opt);
  return out;
}

}  // namespace ombell
