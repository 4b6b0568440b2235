#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "ombell/dynamics.hpp"
#include "ombell/model.hpp"

namespace ombell {

// The five stationary output correlators evaluated at the analysis frequency.
struct CorrelatorSet {
  double n_a = 0.0;             // <a_o+ a_o>
  double n_c = 0.0;             // <c_o+ c_o>
  cplx cross_phase{0.0, 0.0};   // <a_o+ c_o>
  cplx cross_squeeze{0.0, 0.0}; // <a_o c_o>
  double fourth = 0.0;          // <a_o+ c_o+ c_o a_o>
};

// Two-mode Gaussian description of (a_o, c_o): means plus the zero-mean
// fluctuation second moments.
//   normal(i,j)    = <dx_i+ dx_j>   (Hermitian)
//   anomalous(i,j) = <dx_i dx_j>    (symmetric)
struct OutputGaussianState {
  Eigen::Vector2cd mean = Eigen::Vector2cd::Zero();
  Eigen::Matrix2cd normal = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd anomalous = Eigen::Matrix2cd::Zero();

  cplx mean_a() const { return mean(0); }
  cplx mean_c() const { return mean(1); }
  double n_a_fluct() const { return normal(0, 0).real(); }
  double n_c_fluct() const { return normal(1, 1).real(); }
  cplx squeeze_fluct() const { return anomalous(0, 1); }

  // Smallest eigenvalue of the vacuum-completed second-moment matrix of
  // (dx, dx+); nonnegative (to tolerance) for a physical state.
  double min_completion_eigenvalue() const;
};

// Operator factor for the ordered-moment engine: the linear form row.u over
// the ten input symbols, optionally daggered.  The dagger stays a flag and is
// dispatched through the pairing rules; it is never realized as a
// conjugate-swapped row (the two operations differ for full-model rows).
struct RowFactor {
  Row10 row;
  bool dagger = false;
};

// Ordered expectation of a product of 1, 2 or 4 factors over independent
// thermal ports with coherent means on the external columns
// (a_i+ <- conj(alpha_i), c_i <- chi_i; every other symbol has zero mean at
// the analysis frequency).  Pair rules: products of two undaggered or two
// daggered forms vanish; <f g+> sums n+1 on annihilation columns and n on
// conjugate columns; <f+ g> the reverse.  Four factors use the displaced
// Gaussian expansion (means + single pairs + double pairings).
cplx ordered_moment(std::span<const RowFactor> factors, const InputState& inputs);

// Means and fluctuation second moments of the two output modes from the
// resonance-centered scattering rows.
OutputGaussianState propagate_moments(const ScatteringMatrix& S,
                                      const InputState& inputs);

// <a_o+ c_o+ c_o a_o> of a displaced Gaussian state by Wick factorization.
double wick_fourth_moment(const OutputGaussianState& state);

// Full correlator set of a state (second moments plus the Wick fourth).
CorrelatorSet correlator_set(const OutputGaussianState& state);

// ---------------------------------------------------------------------------
// Closed-form reference expressions
//
// reference_correlators transcribes, term by term, the published closed-form
// correlator table for the sideband-resolved coefficients.  The moment engine
// above is authoritative; the transcription is a cross-check.  Its
// fourth-order expression contains reproducible defects (omitted Wick
// diagonals, two missing squares, one garbled square, and missing
// noise-occupancy cross-mean terms).  fourth_order_defect returns the exact
// polynomial that the transcription omits, so that
//   engine fourth == transcribed fourth + defect
// holds to roundoff for admissible (commutator-preserving) coefficients.
// Mismatches are reported, never silently corrected.
// ---------------------------------------------------------------------------

CorrelatorSet reference_correlators(const CoefficientSet& coeffs,
                                    const InputState& inputs);

// The transcribed fourth-order expression before taking the real part.
cplx reference_fourth_transcribed(const CoefficientSet& coeffs,
                                  const InputState& inputs);

struct DefectTerm {
  std::string label;        // short identifier, e.g. "wick-diagonal-external-a"
  std::string description;  // what the transcribed expression omits/garbles
  cplx value;               // numeric contribution at this evaluation point
};

std::vector<DefectTerm> fourth_order_defect_terms(const CoefficientSet& coeffs,
                                                  const InputState& inputs);

// Sum of all defect terms.
cplx fourth_order_defect(const CoefficientSet& coeffs, const InputState& inputs);

// Human-readable erratum report for the transcription defects, evaluated at
// the given point.  Deterministic content (no timestamps).
std::string transcription_errata_report(const CoefficientSet& coeffs,
                                        const InputState& inputs);

}  // namespace ombell
