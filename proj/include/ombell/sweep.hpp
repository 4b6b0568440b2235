#pragma once

#include <string>
#include <vector>

#include "ombell/model.hpp"
#include "ombell/sensitivity.hpp"

namespace ombell {

// One sweep axis.  Supported parameter names (applied in a fixed canonical
// order regardless of axis order):
//   kappa    - common cavity linewidth; rescales both kappa_a/c preserving
//              each mode's external ratio
//   gamma    - mechanical linewidth
//   G_minus  - beamsplitter coupling; preserves the ratio r
//   r_e      - external coupling fraction, both modes
//   r        - coupling ratio G_plus/G_minus at fixed G_minus
//   n_e, n_i, n_m - bath occupancies (both modes per family)
//   alpha_i  - drive amplitude, sets alpha_i = chi_i (real, tied)
//   chi_i    - second drive amplitude (unties the pair)
struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  bool log_scale = false;

  std::vector<double> grid() const;
};

struct SweepSpec {
  std::vector<AxisSpec> axes;             // 1 or 2 axes
  SystemParams base_params;
  InputState base_inputs;
  std::vector<std::string> outputs;       // subset of known output names;
                                          // empty selects all
  int workers = 1;
};

// Output column names, always emitted in alphabetical order:
//   C, D, F, S_max, beta_opt, fourth, n_a, n_c, stable
inline const std::vector<std::string>& sweep_output_names();

struct SweepRecord {
  std::vector<double> axis_values;  // one per axis
  std::vector<double> outputs;      // matches SweepResult::output_names
  bool stable = true;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<std::vector<double>> axis_grids;
  std::vector<std::string> output_names;
  std::vector<SweepRecord> records;  // row-major over the axis grids

  // Value lookup for 2-D sweeps: record index of (i0 along axis 0, i1 along
  // axis 1).
  std::size_t index(std::size_t i0, std::size_t i1) const;
};

// Evaluate the Bell point on the grid.  Cells where the drift matrix is
// unstable produce NaN outputs and stable=false.  run_sweep parallelizes over
// records with OpenMP using spec.workers threads; results are byte-identical
// to run_sweep_serial (each record writes a preallocated slot).
SweepResult run_sweep(const SweepSpec& spec);
SweepResult run_sweep_serial(const SweepSpec& spec);

// ---------------------------------------------------------------------------
// Level-set extraction (marching squares)
// ---------------------------------------------------------------------------

struct ContourResult {
  // Each polyline is a chain of (x, y) points in axis units.
  std::vector<std::vector<std::pair<double, double>>> polylines;
  // Area of the super-level region {F > level} by per-cell polygon pieces.
  double area = 0.0;
};

// xs: axis-0 grid (size nx), ys: axis-1 grid (size ny), values: row-major
// [i0 * ny + i1].  NaN cells are treated as below-level.
ContourResult extract_contour(const std::vector<double>& xs,
                              const std::vector<double>& ys,
                              const std::vector<double>& values,
                              double level = 0.5);

// ---------------------------------------------------------------------------
// Named curve families
// ---------------------------------------------------------------------------

// Violation boundary of the full model vs the sideband-resolved closed form
// on a common (alpha, r) grid, one pair of contours per linewidth.
struct RwaComparison {
  double kappa = 0.0;
  ContourResult full;
  ContourResult rwa;
  // Largest distance, in cell units, from any full-model boundary vertex to
  // the nearest closed-form boundary vertex.
  double max_displacement_cells = 0.0;
};

std::vector<RwaComparison> compare_rwa(const std::vector<double>& kappas,
                                       double r_e, double gamma, double G_minus,
                                       const std::vector<double>& alphas,
                                       const std::vector<double>& rs,
                                       int workers = 1);

// F vs a single bath occupancy (the other baths held at the base inputs):
// exact pipeline plus the first-order overlays in both printed compositions
// (literal, which adds noise, and physical, which subtracts |slopes|).
struct NoiseCurve {
  std::string bath;                 // "n_m", "n_e" or "n_i"
  std::vector<double> occupancy;
  std::vector<double> F_exact;
  std::vector<double> F_physical;
  std::vector<double> F_literal;
};

std::vector<NoiseCurve> noise_curves(const SystemParams& params,
                                     const InputState& inputs,
                                     const std::vector<Bath>& baths,
                                     const std::vector<double>& occupancies);

}  // namespace ombell

namespace ombell {
inline const std::vector<std::string>& sweep_output_names() {
  static const std::vector<std::string> names = {
      "C", "D", "F", "S_max", "beta_opt", "fourth", "n_a", "n_c", "stable"};
  return names;
}
}  // namespace ombell
