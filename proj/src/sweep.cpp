#include "ombell/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ombell/bell.hpp"
#include "ombell/dynamics.hpp"
#include "ombell/errors.hpp"
#include "ombell/moments.hpp"

namespace ombell {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Canonical application order: structural rates first, then coupling ratios,
// then bath occupancies, then drives.  Axis declaration order never matters.
const std::vector<std::string>& axis_whitelist() {
  static const std::vector<std::string> names = {
      "kappa", "gamma", "G_minus", "r_e", "r",
      "n_e",   "n_i",   "n_m",     "alpha_i", "chi_i"};
  return names;
}

void apply_axis(const std::string& name, double v, SystemParams& p,
                InputState& in) {
  if (name == "kappa") {
    const double ratio_a = p.kappa_e_a / p.kappa_a;
    const double ratio_c = p.kappa_e_c / p.kappa_c;
    p.kappa_a = v;
    p.kappa_c = v;
    p.kappa_e_a = ratio_a * v;
    p.kappa_e_c = ratio_c * v;
  } else if (name == "gamma") {
    p.gamma = v;
  } else if (name == "G_minus") {
    const double r = p.G_plus / p.G_minus;
    p.G_minus = v;
    p.G_plus = r * v;
  } else if (name == "r_e") {
    p.kappa_e_a = v * p.kappa_a;
    p.kappa_e_c = v * p.kappa_c;
  } else if (name == "r") {
    p.G_plus = v * p.G_minus;
  } else if (name == "n_e") {
    in.n_e_a = v;
    in.n_e_c = v;
  } else if (name == "n_i") {
    in.n_i_a = v;
    in.n_i_c = v;
  } else if (name == "n_m") {
    in.n_m = v;
  } else if (name == "alpha_i") {
    in.alpha_i = v;
    in.chi_i = v;  // tied real drives; a chi_i axis unties them
  } else if (name == "chi_i") {
    in.chi_i = v;
  } else {
    throw ConfigError("unknown sweep axis '" + name + "'");
  }
}

struct SweepContext {
  std::vector<std::vector<double>> grids;
  std::vector<std::string> axis_names;
  std::vector<std::string> output_names;
  SystemParams base_params;
  InputState base_inputs;
};

SweepContext make_context(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2)
    throw ConfigError("sweep requires 1 or 2 axes");
  SweepContext ctx;
  const auto& wl = axis_whitelist();
  for (const auto& axis : spec.axes) {
    if (std::find(wl.begin(), wl.end(), axis.name) == wl.end())
      throw ConfigError("sweep axis '" + axis.name + "' is not in the whitelist");
    ctx.grids.push_back(axis.grid());
    ctx.axis_names.push_back(axis.name);
  }
  if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name)
    throw ConfigError("sweep axes must differ");

  const auto& known = sweep_output_names();
  if (spec.outputs.empty()) {
    ctx.output_names = known;
  } else {
    std::set<std::string> selected;
    for (const auto& name : spec.outputs) {
      if (std::find(known.begin(), known.end(), name) == known.end())
        throw ConfigError("unknown sweep output '" + name + "'");
      selected.insert(name);
    }
    ctx.output_names.assign(selected.begin(), selected.end());
  }
  ctx.base_params = spec.base_params;
  ctx.base_inputs = spec.base_inputs;
  return ctx;
}

SweepRecord evaluate_cell(const SweepContext& ctx,
                          const std::vector<double>& axis_values) {
  SystemParams p = ctx.base_params;
  InputState in = ctx.base_inputs;
  // Apply in canonical order regardless of axis declaration order.
  for (const auto& name : axis_whitelist()) {
    for (std::size_t a = 0; a < ctx.axis_names.size(); ++a)
      if (ctx.axis_names[a] == name) apply_axis(name, axis_values[a], p, in);
  }

  SweepRecord rec;
  rec.axis_values = axis_values;

  double C = kNaN, D = kNaN, F = kNaN, S_max = kNaN, beta_opt = kNaN,
         fourth = kNaN, n_a = kNaN, n_c = kNaN;
  rec.stable = check_stability(p).stable;
  if (rec.stable) {
    try {
      const ScatteringMatrix S = solve_full_scattering(p, 0.0);
      const OutputGaussianState state = propagate_moments(S, in);
      const CorrelatorSet corr = correlator_set(state);
      n_a = corr.n_a;
      n_c = corr.n_c;
      fourth = corr.fourth;
      const BellMetrics m = bell_cd(corr);
      C = m.C;
      D = m.D;
      F = m.F;
      beta_opt = m.beta_opt;
      S_max = 2.0 * std::sqrt(2.0) * std::sqrt(F);
    } catch (const NoSignalError&) {
      // Zero-signal cell (no drive, vacuum baths): F is undefined there.
    }
  }

  rec.outputs.reserve(ctx.output_names.size());
  for (const auto& name : ctx.output_names) {
    double v = kNaN;
    if (name == "C") v = C;
    else if (name == "D") v = D;
    else if (name == "F") v = F;
    else if (name == "S_max") v = S_max;
    else if (name == "beta_opt") v = beta_opt;
    else if (name == "fourth") v = fourth;
    else if (name == "n_a") v = n_a;
    else if (name == "n_c") v = n_c;
    else if (name == "stable") v = rec.stable ? 1.0 : 0.0;
    rec.outputs.push_back(v);
  }
  return rec;
}

SweepResult run_sweep_impl(const SweepSpec& spec, bool parallel) {
  const SweepContext ctx = make_context(spec);
  SweepResult result;
  result.axis_names = ctx.axis_names;
  result.axis_grids = ctx.grids;
  result.output_names = ctx.output_names;

  const std::size_t n0 = ctx.grids[0].size();
  const std::size_t n1 = ctx.grids.size() == 2 ? ctx.grids[1].size() : 1;
  const std::size_t total = n0 * n1;
  result.records.resize(total);

  auto body = [&](std::size_t idx) {
    const std::size_t i0 = idx / n1;
    const std::size_t i1 = idx % n1;
    std::vector<double> values{ctx.grids[0][i0]};
    if (ctx.grids.size() == 2) values.push_back(ctx.grids[1][i1]);
    result.records[idx] = evaluate_cell(ctx, values);
  };

  if (parallel) {
    const int workers = std::max(1, spec.workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers)
    for (long long idx = 0; idx < static_cast<long long>(total); ++idx)
      body(static_cast<std::size_t>(idx));
#else
    (void)workers;
    for (std::size_t idx = 0; idx < total; ++idx) body(idx);
#endif
  } else {
    for (std::size_t idx = 0; idx < total; ++idx) body(idx);
  }
  return result;
}

}  // namespace

std::vector<double> AxisSpec::grid() const {
  if (count < 2) throw ConfigError("axis '" + name + "' needs count >= 2");
  if (!(min < max)) throw ConfigError("axis '" + name + "' needs min < max");
  if (log_scale && !(min > 0.0))
    throw ConfigError("axis '" + name + "' log scale needs min > 0");
  std::vector<double> xs(count);
  if (log_scale) {
    const double lmin = std::log(min), lmax = std::log(max);
    for (int k = 0; k < count; ++k)
      xs[k] = std::exp(lmin + (lmax - lmin) * static_cast<double>(k) / (count - 1));
  } else {
    for (int k = 0; k < count; ++k)
      xs[k] = min + (max - min) * static_cast<double>(k) / (count - 1);
  }
  return xs;
}

std::size_t SweepResult::index(std::size_t i0, std::size_t i1) const {
  const std::size_t n1 = axis_grids.size() == 2 ? axis_grids[1].size() : 1;
  return i0 * n1 + i1;
}

SweepResult run_sweep(const SweepSpec& spec) { return run_sweep_impl(spec, true); }

SweepResult run_sweep_serial(const SweepSpec& spec) {
  return run_sweep_impl(spec, false);
}

// ---------------------------------------------------------------------------
// Marching squares
// ---------------------------------------------------------------------------

namespace {

// Canonical edge key: grid point (i, j) plus orientation (false = toward
// +x, true = toward +y).  Both cells sharing an edge use the same key, so
// interpolated crossing points are bitwise identical.
struct EdgeKey {
  int i, j;
  bool vertical;
  bool operator<(const EdgeKey& o) const {
    if (i != o.i) return i < o.i;
    if (j != o.j) return j < o.j;
    return vertical < o.vertical;
  }
  bool operator==(const EdgeKey& o) const {
    return i == o.i && j == o.j && vertical == o.vertical;
  }
};

struct ContourBuilder {
  const std::vector<double>& xs;
  const std::vector<double>& ys;
  const std::vector<double>& values;
  double level;
  std::map<EdgeKey, std::pair<double, double>> points;
  std::vector<std::pair<EdgeKey, EdgeKey>> segments;

  double value(int i, int j) const {
    const double v = values[static_cast<std::size_t>(i) * ys.size() + j];
    // NaN cells (unstable or undefined F) count as below-level.
    return std::isnan(v) ? level - 1.0 : v;
  }

  double edge_t(double v0, double v1) const {
    const double t = (level - v0) / (v1 - v0);
    return std::clamp(t, 0.0, 1.0);
  }

  EdgeKey crossing(int i, int j, bool vertical) {
    const EdgeKey key{i, j, vertical};
    if (!points.count(key)) {
      if (vertical) {
        const double t = edge_t(value(i, j), value(i, j + 1));
        points[key] = {xs[i], ys[j] + t * (ys[j + 1] - ys[j])};
      } else {
        const double t = edge_t(value(i, j), value(i + 1, j));
        points[key] = {xs[i] + t * (xs[i + 1] - xs[i]), ys[j]};
      }
    }
    return key;
  }

  void add_segment(int ci, int cj, int edge_a, int edge_b) {
    auto key_of = [&](int e) {
      switch (e) {
        case 0: return crossing(ci, cj, false);        // bottom
        case 1: return crossing(ci + 1, cj, true);     // right
        case 2: return crossing(ci, cj + 1, false);    // top
        default: return crossing(ci, cj, true);        // left
      }
    };
    segments.emplace_back(key_of(edge_a), key_of(edge_b));
  }

  // Fraction of the cell above the level, by the same linear geometry the
  // segments use.
  double cell_fraction(int bits, double a, double b, double c,
                       double d) const {
    auto tb = [&] { return edge_t(a, b); };
    auto tr = [&] { return edge_t(b, c); };
    auto tt = [&] { return edge_t(d, c); };
    auto tl = [&] { return edge_t(a, d); };
    switch (bits) {
      case 0b0000: return 0.0;
      case 0b1111: return 1.0;
      case 0b0001: return 0.5 * tb() * tl();
      case 0b0010: return 0.5 * (1.0 - tb()) * tr();
      case 0b0100: return 0.5 * (1.0 - tr()) * (1.0 - tt());
      case 0b1000: return 0.5 * tt() * (1.0 - tl());
      case 0b1110: return 1.0 - 0.5 * tb() * tl();
      case 0b1101: return 1.0 - 0.5 * (1.0 - tb()) * tr();
      case 0b1011: return 1.0 - 0.5 * (1.0 - tr()) * (1.0 - tt());
      case 0b0111: return 1.0 - 0.5 * tt() * (1.0 - tl());
      case 0b0011: return 0.5 * (tl() + tr());
      case 0b1100: return 1.0 - 0.5 * (tl() + tr());
      case 0b0110: return 0.5 * ((1.0 - tb()) + (1.0 - tt()));
      case 0b1001: return 0.5 * (tb() + tt());
      case 0b0101: {
        const double center = 0.25 * (a + b + c + d);
        if (center > level)
          return 1.0 - 0.5 * (1.0 - tb()) * tr() - 0.5 * tt() * (1.0 - tl());
        return 0.5 * tb() * tl() + 0.5 * (1.0 - tr()) * (1.0 - tt());
      }
      case 0b1010: {
        const double center = 0.25 * (a + b + c + d);
        if (center > level)
          return 1.0 - 0.5 * tb() * tl() - 0.5 * (1.0 - tr()) * (1.0 - tt());
        return 0.5 * (1.0 - tb()) * tr() + 0.5 * tt() * (1.0 - tl());
      }
      default: return 0.0;
    }
  }
};

}  // namespace

ContourResult extract_contour(const std::vector<double>& xs,
                              const std::vector<double>& ys,
                              const std::vector<double>& values, double level) {
  if (xs.size() < 2 || ys.size() < 2)
    throw ConfigError("contour extraction needs at least a 2x2 grid");
  if (values.size() != xs.size() * ys.size())
    throw ConfigError("contour grid size does not match axes");

  ContourBuilder cb{xs, ys, values, level, {}, {}};
  double area = 0.0;
  for (int ci = 0; ci + 1 < static_cast<int>(xs.size()); ++ci) {
    for (int cj = 0; cj + 1 < static_cast<int>(ys.size()); ++cj) {
      const double a = cb.value(ci, cj);          // (x_i,   y_j)
      const double b = cb.value(ci + 1, cj);      // (x_i+1, y_j)
      const double c = cb.value(ci + 1, cj + 1);  // (x_i+1, y_j+1)
      const double d = cb.value(ci, cj + 1);      // (x_i,   y_j+1)
      const int bits = (a > level ? 1 : 0) | (b > level ? 2 : 0) |
                       (c > level ? 4 : 0) | (d > level ? 8 : 0);
      const double cell_area = (xs[ci + 1] - xs[ci]) * (ys[cj + 1] - ys[cj]);
      area += cell_area * cb.cell_fraction(bits, a, b, c, d);
      switch (bits) {
        case 0b0000: case 0b1111: break;
        case 0b0001: case 0b1110: cb.add_segment(ci, cj, 3, 0); break;
        case 0b0010: case 0b1101: cb.add_segment(ci, cj, 0, 1); break;
        case 0b0100: case 0b1011: cb.add_segment(ci, cj, 1, 2); break;
        case 0b1000: case 0b0111: cb.add_segment(ci, cj, 2, 3); break;
        case 0b0011: case 0b1100: cb.add_segment(ci, cj, 3, 1); break;
        case 0b0110: case 0b1001: cb.add_segment(ci, cj, 0, 2); break;
        case 0b0101: {
          const double center = 0.25 * (a + b + c + d);
          if (center > level) {
            cb.add_segment(ci, cj, 0, 1);
            cb.add_segment(ci, cj, 2, 3);
          } else {
            cb.add_segment(ci, cj, 3, 0);
            cb.add_segment(ci, cj, 1, 2);
          }
          break;
        }
        case 0b1010: {
          const double center = 0.25 * (a + b + c + d);
          if (center > level) {
            cb.add_segment(ci, cj, 3, 0);
            cb.add_segment(ci, cj, 1, 2);
          } else {
            cb.add_segment(ci, cj, 0, 1);
            cb.add_segment(ci, cj, 2, 3);
          }
          break;
        }
        default: break;
      }
    }
  }

  // Chain segments into polylines by exact edge-key adjacency.
  std::multimap<EdgeKey, std::size_t> by_end;
  for (std::size_t s = 0; s < cb.segments.size(); ++s) {
    by_end.emplace(cb.segments[s].first, s);
    by_end.emplace(cb.segments[s].second, s);
  }
  std::vector<bool> used(cb.segments.size(), false);

  auto next_segment = [&](const EdgeKey& key, std::size_t& seg) {
    auto [lo, hi] = by_end.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      if (!used[it->second]) {
        seg = it->second;
        return true;
      }
    }
    return false;
  };

  ContourResult result;
  result.area = area;
  for (std::size_t s0 = 0; s0 < cb.segments.size(); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    std::vector<EdgeKey> chain{cb.segments[s0].first, cb.segments[s0].second};
    // Extend forward from the back, then backward from the front.
    for (int pass = 0; pass < 2; ++pass) {
      bool extended = true;
      while (extended) {
        extended = false;
        const EdgeKey tip = pass == 0 ? chain.back() : chain.front();
        std::size_t seg;
        if (next_segment(tip, seg)) {
          used[seg] = true;
          const EdgeKey other =
              cb.segments[seg].first == tip ? cb.segments[seg].second
                                            : cb.segments[seg].first;
          if (pass == 0)
            chain.push_back(other);
          else
            chain.insert(chain.begin(), other);
          extended = true;
        }
      }
    }
    std::vector<std::pair<double, double>> poly;
    poly.reserve(chain.size());
    for (const EdgeKey& key : chain) poly.push_back(cb.points.at(key));
    result.polylines.push_back(std::move(poly));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Named curve families
// ---------------------------------------------------------------------------

namespace {

// F grid over (alpha, r) from the sideband-resolved closed form.
std::vector<double> rwa_F_grid(double kappa, double r_e, double gamma,
                               double G_minus, const std::vector<double>& alphas,
                               const std::vector<double>& rs) {
  std::vector<double> F(alphas.size() * rs.size(), kNaN);
  for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
    for (std::size_t ir = 0; ir < rs.size(); ++ir) {
      SystemParams p = SystemParams::symmetric(kappa, r_e, gamma, G_minus, rs[ir]);
      if (p.G_plus >= p.G_minus) continue;
      InputState in;
      in.alpha_i = alphas[ia];
      in.chi_i = alphas[ia];
      try {
        const auto state =
            propagate_moments(to_scattering(rwa_coefficients(p, 0.0), 0.0), in);
        F[ia * rs.size() + ir] = bell_cd(correlator_set(state)).F;
      } catch (const NoSignalError&) {
      }
    }
  }
  return F;
}

double boundary_displacement_cells(const ContourResult& full,
                                   const ContourResult& rwa, double dx,
                                   double dy) {
  std::vector<std::pair<double, double>> rwa_pts;
  for (const auto& poly : rwa.polylines)
    rwa_pts.insert(rwa_pts.end(), poly.begin(), poly.end());
  bool full_empty = true;
  for (const auto& poly : full.polylines) full_empty &= poly.empty();
  if (full_empty && rwa_pts.empty()) return 0.0;
  if (full_empty || rwa_pts.empty())
    return std::numeric_limits<double>::infinity();

  double max_d = 0.0;
  for (const auto& poly : full.polylines) {
    for (const auto& p : poly) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : rwa_pts) {
        const double ux = (p.first - q.first) / dx;
        const double uy = (p.second - q.second) / dy;
        best = std::min(best, ux * ux + uy * uy);
      }
      max_d = std::max(max_d, std::sqrt(best));
    }
  }
  return max_d;
}

}  // namespace

std::vector<RwaComparison> compare_rwa(const std::vector<double>& kappas,
                                       double r_e, double gamma, double G_minus,
                                       const std::vector<double>& alphas,
                                       const std::vector<double>& rs,
                                       int workers) {
  if (kappas.empty()) throw ConfigError("compare_rwa needs at least one kappa");
  if (alphas.size() < 2 || rs.size() < 2)
    throw ConfigError("compare_rwa needs at least a 2x2 grid");

  // One closed-form boundary, evaluated at the most sideband-resolved
  // (smallest) linewidth in the list.
  const double kappa_ref = *std::min_element(kappas.begin(), kappas.end());
  const auto rwa_grid = rwa_F_grid(kappa_ref, r_e, gamma, G_minus, alphas, rs);
  const ContourResult rwa_contour = extract_contour(alphas, rs, rwa_grid, 0.5);

  const double dx = (alphas.back() - alphas.front()) / (alphas.size() - 1);
  const double dy = (rs.back() - rs.front()) / (rs.size() - 1);

  std::vector<RwaComparison> out;
  for (double kappa : kappas) {
    SweepSpec spec;
    spec.base_params = SystemParams::symmetric(kappa, r_e, gamma, G_minus, 0.0);
    spec.base_inputs = InputState{};
    spec.axes = {AxisSpec{"alpha_i", alphas.front(), alphas.back(),
                          static_cast<int>(alphas.size()), false},
                 AxisSpec{"r", rs.front(), rs.back(),
                          static_cast<int>(rs.size()), false}};
    spec.outputs = {"F"};
    spec.workers = workers;
    const SweepResult grid = run_sweep(spec);
    std::vector<double> F(grid.records.size());
    for (std::size_t k = 0; k < grid.records.size(); ++k)
      F[k] = grid.records[k].outputs[0];

    RwaComparison cmp;
    cmp.kappa = kappa;
    cmp.full = extract_contour(grid.axis_grids[0], grid.axis_grids[1], F, 0.5);
    cmp.rwa = rwa_contour;
    cmp.max_displacement_cells =
        boundary_displacement_cells(cmp.full, rwa_contour, dx, dy);
    out.push_back(std::move(cmp));
  }
  return out;
}

std::vector<NoiseCurve> noise_curves(const SystemParams& params,
                                     const InputState& inputs,
                                     const std::vector<Bath>& baths,
                                     const std::vector<double>& occupancies) {
  params.validate();
  if (!check_stability(params).stable)
    throw NumericalError("noise curves require stable parameters");
  const ScatteringMatrix S = solve_full_scattering(params, 0.0);
  const SensitivityCoefficients coeff =
      sensitivity_coefficients(params.r(), params.r_e(), params.C_minus());

  std::vector<NoiseCurve> out;
  for (Bath bath : baths) {
    NoiseCurve curve;
    curve.bath = bath == Bath::mechanical ? "n_m"
                 : bath == Bath::external ? "n_e"
                                          : "n_i";
    for (double n : occupancies) {
      InputState in = inputs;
      switch (bath) {
        case Bath::mechanical: in.n_m = n; break;
        case Bath::external: in.n_e_a = in.n_e_c = n; break;
        case Bath::internal: in.n_i_a = in.n_i_c = n; break;
      }
      double F_exact = kNaN;
      try {
        F_exact = bell_cd(correlator_set(propagate_moments(S, in))).F;
      } catch (const NoSignalError&) {
      }
      curve.occupancy.push_back(n);
      curve.F_exact.push_back(F_exact);
      curve.F_physical.push_back(
          compose_physical(coeff, in.n_m, in.n_e_a, in.n_i_a));
      curve.F_literal.push_back(
          compose_literal(coeff, in.n_m, in.n_e_a, in.n_i_a));
    }
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace ombell
