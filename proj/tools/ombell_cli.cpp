// Command-line front end: scattering dumps, single-point CHSH metrics,
// parameter sweeps, violation-boundary contours, noise curves and the
// bundled figure presets.
#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ombell/bell.hpp"
#include "ombell/dynamics.hpp"
#include "ombell/errors.hpp"
#include "ombell/io.hpp"
#include "ombell/model.hpp"
#include "ombell/moments.hpp"
#include "ombell/presets.hpp"
#include "ombell/sensitivity.hpp"
#include "ombell/sweep.hpp"
#include "ombell/version.hpp"

namespace {

using namespace ombell;

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> sets;
  bool print_config = false;
};

void attach_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_file, "key=value config file");
  sub->add_option("--set", args.sets, "override a config key (key=value)");
  sub->add_flag("--print-config", args.print_config,
                "print the merged configuration and exit");
}

CliConfig load_config(const CommonArgs& args) {
  CliConfig cfg;
  if (!args.config_file.empty()) cfg = CliConfig::from_file(args.config_file);
  cfg.merge(CliConfig::from_pairs(args.sets));
  validate_config_keys(cfg);
  return cfg;
}

// Returns true when the subcommand should stop after printing the config.
bool handle_print_config(const CommonArgs& args, const CliConfig& cfg) {
  if (!args.print_config) return false;
  std::cout << cfg.render();
  return true;
}

AxisSpec parse_axis(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    tokens.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (tokens.size() < 4 || tokens.size() > 5)
    throw ConfigError("axis '" + text +
                      "' must be name:min:max:count[:log]");
  AxisSpec axis;
  axis.name = tokens[0];
  try {
    axis.min = std::stod(tokens[1]);
    axis.max = std::stod(tokens[2]);
    axis.count = std::stoi(tokens[3]);
  } catch (const std::exception&) {
    throw ConfigError("axis '" + text + "' has non-numeric bounds or count");
  }
  if (tokens.size() == 5) {
    if (tokens[4] != "log")
      throw ConfigError("axis '" + text + "' has unknown modifier '" +
                        tokens[4] + "'");
    axis.log_scale = true;
  }
  return axis;
}

void write_or_print(const CliConfig& cfg, const std::string& content) {
  const std::string out = cfg.get_string("out", "");
  if (out.empty())
    std::cout << content;
  else
    write_text_file(out, content);
}

std::string complex_line(const std::string& label, std::complex<double> z) {
  return label + " = " + format_double(z.real()) + " " +
         format_double(z.imag()) + "\n";
}

int cmd_scatter(const CliConfig& cfg) {
  const SystemParams p = params_from_config(cfg);
  const double omega = cfg.get_double("omega", 0.0);
  const ScatteringMatrix S = solve_full_scattering(p, omega);
  std::string out = "omega = " + format_double(omega) + "\n";
  for (int i = 0; i < kNumOutputs; ++i)
    for (int j = 0; j < kNumInputs; ++j)
      out += complex_line(
          "S[" + std::to_string(i) + "][" + std::to_string(j) + "]",
          S.entries(i, j));
  out += "commutator_residual = " + format_double(commutator_residual(S)) +
         "\n";
  const CoefficientSet c = rwa_coefficients(p, omega);
  out += complex_line("rwa A_d", c.A_d) + complex_line("rwa A_x", c.A_x) +
         complex_line("rwa A_dI", c.A_dI) + complex_line("rwa A_xI", c.A_xI) +
         complex_line("rwa A_m", c.A_m) + complex_line("rwa C_d", c.C_d) +
         complex_line("rwa C_x", c.C_x) + complex_line("rwa C_dI", c.C_dI) +
         complex_line("rwa C_xI", c.C_xI) + complex_line("rwa C_m", c.C_m);
  std::cout << out;
  return 0;
}

int cmd_bell(const CliConfig& cfg) {
  const SystemParams p = params_from_config(cfg);
  const InputState in = inputs_from_config(cfg);
  const DetectionConfig det = detection_from_config(cfg);
  const BellPointResult res = bell_from_params(p, in);
  const double S_chain =
      verify_chsh_from_angles(res.state, res.metrics, det.eta_1, det.eta_2);
  std::string out;
  out += "C = " + format_double(res.metrics.C) + "\n";
  out += "D = " + format_double(res.metrics.D) + "\n";
  out += "F = " + format_double(res.metrics.F) + "\n";
  out += "Z = " + format_double(res.metrics.Z) + "\n";
  out += "S_max = " + format_double(res.metrics.S_max) + "\n";
  out += "S_detected = " + format_double(S_chain) + "\n";
  out += "beta_opt = " + format_double(res.metrics.beta_opt) + "\n";
  out += "zeta_star = " + format_double(res.metrics.zeta_star) + "\n";
  out += "n_a = " + format_double(res.correlators.n_a) + "\n";
  out += "n_c = " + format_double(res.correlators.n_c) + "\n";
  out += "fourth = " + format_double(res.correlators.fourth) + "\n";
  out += std::string("violation = ") +
         (res.metrics.violation ? "true" : "false") + "\n";
  std::cout << out;
  return 0;
}

SweepSpec sweep_spec_from_config(const CliConfig& cfg) {
  SweepSpec spec;
  spec.base_params = params_from_config(cfg);
  spec.base_inputs = inputs_from_config(cfg);
  if (!cfg.has("axis")) throw ConfigError("sweep needs an 'axis' key");
  spec.axes.push_back(parse_axis(cfg.get_string("axis", "")));
  if (cfg.has("axis2")) spec.axes.push_back(parse_axis(cfg.get_string("axis2", "")));
  spec.workers = cfg.get_int("workers", 1);
  return spec;
}

int cmd_sweep(const CliConfig& cfg) {
  const SweepSpec spec = sweep_spec_from_config(cfg);
  const SweepResult result = run_sweep(spec);
  const std::string format = cfg.get_string("format", "csv");
  std::string content;
  if (format == "csv")
    content = to_csv(result);
  else if (format == "json")
    content = to_json(result, spec);
  else
    throw ConfigError("unknown output format '" + format +
                      "' (expected csv or json)");
  write_or_print(cfg, content);
  return 0;
}

int cmd_contour(const CliConfig& cfg) {
  const SweepSpec spec = sweep_spec_from_config(cfg);
  if (spec.axes.size() != 2)
    throw ConfigError("contour needs 'axis' and 'axis2'");
  const double level = cfg.get_double("level", 0.5);
  const SweepResult result = run_sweep(spec);
  std::size_t f_col = 0;
  while (f_col < result.output_names.size() &&
         result.output_names[f_col] != "F")
    ++f_col;
  std::vector<double> F(result.records.size());
  for (std::size_t k = 0; k < F.size(); ++k)
    F[k] = result.records[k].outputs[f_col];
  const ContourResult contour =
      extract_contour(result.axis_grids[0], result.axis_grids[1], F, level);
  const std::string format = cfg.get_string("format", "svg");
  std::string content;
  if (format == "svg") {
    content = contour_svg(contour, spec.axes[0].min, spec.axes[0].max,
                          spec.axes[1].min, spec.axes[1].max);
  } else if (format == "csv") {
    content = "polyline,x,y\n";
    for (std::size_t pl = 0; pl < contour.polylines.size(); ++pl)
      for (const auto& [x, y] : contour.polylines[pl])
        content += std::to_string(pl) + ',' + format_double(x) + ',' +
                   format_double(y) + '\n';
  } else {
    throw ConfigError("unknown output format '" + format +
                      "' (expected svg or csv)");
  }
  write_or_print(cfg, content);
  std::cerr << "area = " << format_double(contour.area) << "\n";
  return 0;
}

int cmd_noise(const CliConfig& cfg) {
  SystemParams p = params_from_config(cfg);
  const InputState in = inputs_from_config(cfg);
  // Unless the caller pins the coupling ratio, run the curves at the ratio
  // that maximizes the tolerable occupancy.
  if (!cfg.has("r") && !cfg.has("G_plus"))
    p.G_plus = optimal_r(p.r_e()).r_opt * p.G_minus;
  AxisSpec axis{"n", 0.0, 0.05, 101, false};
  if (cfg.has("axis")) axis = parse_axis(cfg.get_string("axis", ""));
  std::vector<Bath> baths;
  if (axis.name == "n")
    baths = {Bath::mechanical, Bath::external, Bath::internal};
  else if (axis.name == "n_m")
    baths = {Bath::mechanical};
  else if (axis.name == "n_e")
    baths = {Bath::external};
  else if (axis.name == "n_i")
    baths = {Bath::internal};
  else
    throw ConfigError("noise axis must be one of n, n_m, n_e, n_i");
  const auto curves = noise_curves(p, in, baths, axis.grid());
  std::string csv = "bath,occupancy,F_exact,F_physical,F_literal\n";
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.occupancy.size(); ++k)
      csv += c.bath + ',' + format_double(c.occupancy[k]) + ',' +
             format_double(c.F_exact[k]) + ',' +
             format_double(c.F_physical[k]) + ',' +
             format_double(c.F_literal[k]) + '\n';
  write_or_print(cfg, csv);
  return 0;
}

int cmd_compare_rwa(const CliConfig& cfg, const std::vector<double>& kappas) {
  AxisSpec a1{"alpha_i", 0.0, 0.4, 101, false};
  AxisSpec a2{"r", 0.0, 0.3, 101, false};
  if (cfg.has("axis")) a1 = parse_axis(cfg.get_string("axis", ""));
  if (cfg.has("axis2")) a2 = parse_axis(cfg.get_string("axis2", ""));
  const auto comparisons = compare_rwa(
      kappas, cfg.get_double("r_e", 0.9), cfg.get_double("gamma", 1e-5),
      cfg.get_double("G_minus", 0.2), a1.grid(), a2.grid(),
      cfg.get_int("workers", 1));
  std::string csv = "kappa,area_full,area_rwa,max_displacement_cells\n";
  for (const auto& cmp : comparisons)
    csv += format_double(cmp.kappa) + ',' + format_double(cmp.full.area) +
           ',' + format_double(cmp.rwa.area) + ',' +
           format_double(cmp.max_displacement_cells) + '\n';
  write_or_print(cfg, csv);
  return 0;
}

int cmd_optimal_r(const CliConfig& cfg) {
  const double r_e = cfg.get_double("r_e", 0.9);
  const OptimalR opt = optimal_r(r_e);
  std::cout << "r_opt = " << format_double(opt.r_opt) << "\n"
            << "n_T = " << format_double(opt.n_T) << "\n";
  return 0;
}

int cmd_presets(const std::string& name, const CliConfig& cfg) {
  if (name.empty()) {
    for (const auto& info : preset_list())
      std::cout << info.name << "  " << info.description << "\n";
    return 0;
  }
  const auto written = run_preset(name, cfg.get_string("out", "."),
                                  cfg.get_int("workers", 1));
  for (const auto& path : written) std::cout << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "two-cavity optomechanical input-output scattering and CHSH "
      "correlation mapping"};
  app.set_version_flag("--version", std::string(artifact_version));
  app.require_subcommand(1);

  CommonArgs scatter_args, bell_args, sweep_args, contour_args, noise_args,
      rwa_args, optr_args, presets_args;
  std::string kappas_text = "0.01,0.02,0.1";
  std::string preset_name;

  auto* scatter = app.add_subcommand(
      "scatter", "scattering matrix and sideband-resolved coefficients");
  attach_common(scatter, scatter_args);
  auto* bell = app.add_subcommand("bell", "single-point CHSH metrics");
  attach_common(bell, bell_args);
  auto* sweep = app.add_subcommand("sweep", "grid sweep of CHSH outputs");
  attach_common(sweep, sweep_args);
  auto* contour =
      app.add_subcommand("contour", "violation boundary of a 2D sweep");
  attach_common(contour, contour_args);
  auto* noise = app.add_subcommand("noise", "F vs bath occupancy curves");
  attach_common(noise, noise_args);
  auto* rwa = app.add_subcommand("compare-rwa",
                                 "full vs sideband-resolved boundaries");
  attach_common(rwa, rwa_args);
  rwa->add_option("--kappas", kappas_text, "comma-separated linewidths");
  auto* optr =
      app.add_subcommand("optimal-r", "coupling ratio maximizing tolerance");
  attach_common(optr, optr_args);
  auto* presets = app.add_subcommand("presets", "list or run figure presets");
  attach_common(presets, presets_args);
  presets->add_option("name", preset_name, "preset to run (empty: list)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (scatter->parsed()) {
      const CliConfig cfg = load_config(scatter_args);
      if (handle_print_config(scatter_args, cfg)) return 0;
      return cmd_scatter(cfg);
    }
    if (bell->parsed()) {
      const CliConfig cfg = load_config(bell_args);
      if (handle_print_config(bell_args, cfg)) return 0;
      return cmd_bell(cfg);
    }
    if (sweep->parsed()) {
      const CliConfig cfg = load_config(sweep_args);
      if (handle_print_config(sweep_args, cfg)) return 0;
      return cmd_sweep(cfg);
    }
    if (contour->parsed()) {
      const CliConfig cfg = load_config(contour_args);
      if (handle_print_config(contour_args, cfg)) return 0;
      return cmd_contour(cfg);
    }
    if (noise->parsed()) {
      const CliConfig cfg = load_config(noise_args);
      if (handle_print_config(noise_args, cfg)) return 0;
      return cmd_noise(cfg);
    }
    if (rwa->parsed()) {
      const CliConfig cfg = load_config(rwa_args);
      if (handle_print_config(rwa_args, cfg)) return 0;
      std::vector<double> kappas;
      std::size_t start = 0;
      while (start <= kappas_text.size()) {
        const auto pos = kappas_text.find(',', start);
        const std::string tok = kappas_text.substr(start, pos - start);
        if (!tok.empty()) kappas.push_back(std::stod(tok));
        if (pos == std::string::npos) break;
        start = pos + 1;
      }
      return cmd_compare_rwa(cfg, kappas);
    }
    if (optr->parsed()) {
      const CliConfig cfg = load_config(optr_args);
      if (handle_print_config(optr_args, cfg)) return 0;
      return cmd_optimal_r(cfg);
    }
    if (presets->parsed()) {
      const CliConfig cfg = load_config(presets_args);
      if (handle_print_config(presets_args, cfg)) return 0;
      return cmd_presets(preset_name, cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
