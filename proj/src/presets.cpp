#include "ombell/presets.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ombell/errors.hpp"
#include "ombell/io.hpp"
#include "ombell/sensitivity.hpp"
#include "ombell/sweep.hpp"

namespace ombell {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

CliConfig CliConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  CliConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed config line '" + t +
                        "' (expected key=value)");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError("malformed config line '" + t + "' (empty key)");
    cfg.values[key] = value;
  }
  return cfg;
}

CliConfig CliConfig::from_pairs(const std::vector<std::string>& pairs) {
  CliConfig cfg;
  for (const auto& item : pairs) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("malformed override '" + item +
                        "' (expected key=value)");
    cfg.values[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return cfg;
}

void CliConfig::merge(const CliConfig& overrides) {
  for (const auto& [k, v] : overrides.values) values[k] = v;
}

bool CliConfig::has(const std::string& key) const {
  return values.count(key) != 0;
}

double CliConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  const std::string& s = it->second;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError("invalid numeric value for key '" + key + "': '" + s +
                      "'");
  return v;
}

int CliConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  const std::string& s = it->second;
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError("invalid integer value for key '" + key + "': '" + s +
                      "'");
  return v;
}

std::string CliConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::string CliConfig::render() const {
  std::string out;
  for (const auto& [k, v] : values) out += k + "=" + v + "\n";
  return out;
}

SystemParams params_from_config(const CliConfig& cfg) {
  // Baseline operating point; every field can be overridden.
  SystemParams p = SystemParams::symmetric(
      cfg.get_double("kappa", 0.1), cfg.get_double("r_e", 0.9),
      cfg.get_double("gamma", 1e-5), cfg.get_double("G_minus", 0.2),
      cfg.get_double("r", 0.1));
  p.kappa_a = cfg.get_double("kappa_a", p.kappa_a);
  p.kappa_c = cfg.get_double("kappa_c", p.kappa_c);
  p.kappa_e_a = cfg.get_double("kappa_e_a", p.kappa_e_a);
  p.kappa_e_c = cfg.get_double("kappa_e_c", p.kappa_e_c);
  p.G_plus = cfg.get_double("G_plus", p.G_plus);
  p.delta_a = cfg.get_double("delta_a", p.delta_a);
  p.delta_c = cfg.get_double("delta_c", p.delta_c);
  p.omega_m = cfg.get_double("omega_m", p.omega_m);
  p.validate();
  return p;
}

InputState inputs_from_config(const CliConfig& cfg) {
  InputState in;
  const double alpha = cfg.get_double("alpha_i", 0.05);
  in.alpha_i = alpha;
  in.chi_i = cfg.get_double("chi_i", alpha);  // tied unless set explicitly
  const double n_e = cfg.get_double("n_e", 0.0);
  const double n_i = cfg.get_double("n_i", 0.0);
  in.n_e_a = cfg.get_double("n_e_a", n_e);
  in.n_e_c = cfg.get_double("n_e_c", n_e);
  in.n_i_a = cfg.get_double("n_i_a", n_i);
  in.n_i_c = cfg.get_double("n_i_c", n_i);
  in.n_m = cfg.get_double("n_m", 0.0);
  in.validate();
  return in;
}

DetectionConfig detection_from_config(const CliConfig& cfg) {
  DetectionConfig d;
  d.eta_1 = cfg.get_double("eta_1", d.eta_1);
  d.eta_2 = cfg.get_double("eta_2", d.eta_2);
  d.beta_1 = cfg.get_double("beta_1", d.beta_1);
  d.beta_2 = cfg.get_double("beta_2", d.beta_2);
  d.theta = cfg.get_double("theta", d.theta);
  d.phi = cfg.get_double("phi", d.phi);
  return d;
}

void validate_config_keys(const CliConfig& cfg) {
  static const std::set<std::string> known = {
      "kappa",   "r_e",     "gamma",   "G_minus", "r",
      "kappa_a", "kappa_c", "kappa_e_a", "kappa_e_c",
      "G_plus",  "delta_a", "delta_c", "omega_m",
      "alpha_i", "chi_i",   "n_e",     "n_i",     "n_m",
      "n_e_a",   "n_e_c",   "n_i_a",   "n_i_c",
      "eta_1",   "eta_2",   "beta_1",  "beta_2",  "theta", "phi",
      "omega",   "level",   "workers", "out",     "format",
      "axis",    "axis2"};
  for (const auto& [k, v] : cfg.values)
    if (!known.count(k)) throw ConfigError("unknown configuration key '" + k + "'");
}

// ---------------------------------------------------------------------------
// Figure presets
// ---------------------------------------------------------------------------

namespace {

// Shared two-cavity violation-map family: F over (alpha_i, r) at the
// analysis frequency, drives tied real.
SweepResult violation_map(double kappa, double r_e, double gamma,
                          double G_minus, const InputState& baths, int n_alpha,
                          int n_r, int workers) {
  SweepSpec spec;
  spec.base_params = SystemParams::symmetric(kappa, r_e, gamma, G_minus, 0.0);
  spec.base_inputs = baths;
  spec.axes = {AxisSpec{"alpha_i", 0.0, 0.4, n_alpha, false},
               AxisSpec{"r", 0.0, 0.3, n_r, false}};
  spec.workers = workers;
  return run_sweep(spec);
}

std::vector<double> column(const SweepResult& result, const std::string& name) {
  std::size_t col = result.output_names.size();
  for (std::size_t k = 0; k < result.output_names.size(); ++k)
    if (result.output_names[k] == name) col = k;
  if (col == result.output_names.size())
    throw ConfigError("sweep result has no output '" + name + "'");
  std::vector<double> v(result.records.size());
  for (std::size_t k = 0; k < result.records.size(); ++k)
    v[k] = result.records[k].outputs[col];
  return v;
}

ContourResult violation_boundary(const SweepResult& map) {
  return extract_contour(map.axis_grids[0], map.axis_grids[1],
                         column(map, "F"), 0.5);
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int k = 0; k < n; ++k)
    xs[k] = lo + (hi - lo) * static_cast<double>(k) / (n - 1);
  return xs;
}

std::string noise_csv(const std::vector<NoiseCurve>& curves) {
  std::string csv = "bath,occupancy,F_exact,F_physical,F_literal\n";
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < c.occupancy.size(); ++k) {
      csv += c.bath + ',' + format_double(c.occupancy[k]) + ',' +
             format_double(c.F_exact[k]) + ',' +
             format_double(c.F_physical[k]) + ',' +
             format_double(c.F_literal[k]) + '\n';
    }
  }
  return csv;
}

std::vector<std::string> preset_fig2a(const std::string& dir, int workers) {
  const SweepResult map =
      violation_map(0.1, 0.9, 1e-5, 0.2, InputState{}, 201, 201, workers);
  SweepSpec spec;  // config block for the JSON/CSV emitters
  spec.base_params = SystemParams::symmetric(0.1, 0.9, 1e-5, 0.2, 0.0);
  write_text_file(join(dir, "fig2a.csv"), to_csv(map));
  const ContourResult boundary = violation_boundary(map);
  write_text_file(join(dir, "fig2a_boundary.svg"),
                  contour_svg(boundary, 0.0, 0.4, 0.0, 0.3));
  return {"fig2a.csv", "fig2a_boundary.svg"};
}

std::vector<std::string> preset_fig2b(const std::string& dir, int workers) {
  const double res[3] = {0.7, 0.9, 0.99};
  const char* names[3] = {"fig2b_re070.svg", "fig2b_re090.svg",
                          "fig2b_re099.svg"};
  std::vector<std::string> written;
  for (int k = 0; k < 3; ++k) {
    const SweepResult map =
        violation_map(0.1, res[k], 1e-5, 0.2, InputState{}, 101, 101, workers);
    write_text_file(join(dir, names[k]),
                    contour_svg(violation_boundary(map), 0.0, 0.4, 0.0, 0.3));
    written.push_back(names[k]);
  }
  return written;
}

std::vector<std::string> preset_fig3(const std::string& dir, double r_e,
                                     const std::string& file) {
  const double r_opt = optimal_r(r_e).r_opt;
  const SystemParams p = SystemParams::symmetric(0.01, r_e, 1e-5, 0.2, r_opt);
  InputState in;
  in.alpha_i = 1e-4;
  in.chi_i = 1e-4;
  const auto curves =
      noise_curves(p, in, {Bath::mechanical, Bath::external, Bath::internal},
                   linspace(0.0, 0.05, 101));
  write_text_file(join(dir, file), noise_csv(curves));
  return {file};
}

std::vector<std::string> preset_fig4(const std::string& dir, int workers) {
  const double ns[4] = {0.0, 0.005, 0.010, 0.020};
  const char* names[4] = {"fig4_n000.svg", "fig4_n005.svg", "fig4_n010.svg",
                          "fig4_n020.svg"};
  std::vector<std::string> written;
  for (int k = 0; k < 4; ++k) {
    InputState baths;
    baths.n_e_a = baths.n_e_c = ns[k];
    baths.n_i_a = baths.n_i_c = ns[k];
    const SweepResult map =
        violation_map(0.1, 0.9, 1e-5, 0.2, baths, 201, 201, workers);
    write_text_file(join(dir, names[k]),
                    contour_svg(violation_boundary(map), 0.0, 0.4, 0.0, 0.3));
    written.push_back(names[k]);
  }
  return written;
}

std::vector<std::string> preset_fig5(const std::string& dir, int workers) {
  const auto comparisons =
      compare_rwa({0.01, 0.02, 0.1}, 0.9, 1e-5, 0.2, linspace(0.0, 0.4, 101),
                  linspace(0.0, 0.3, 101), workers);
  const char* names[3] = {"fig5_full_k001.svg", "fig5_full_k002.svg",
                          "fig5_full_k010.svg"};
  std::vector<std::string> written;
  std::string summary = "kappa,area_full,area_rwa,max_displacement_cells\n";
  for (std::size_t k = 0; k < comparisons.size(); ++k) {
    const auto& cmp = comparisons[k];
    write_text_file(join(dir, names[k]),
                    contour_svg(cmp.full, 0.0, 0.4, 0.0, 0.3));
    written.push_back(names[k]);
    summary += format_double(cmp.kappa) + ',' + format_double(cmp.full.area) +
               ',' + format_double(cmp.rwa.area) + ',' +
               format_double(cmp.max_displacement_cells) + '\n';
  }
  write_text_file(join(dir, "fig5_rwa.svg"),
                  contour_svg(comparisons[0].rwa, 0.0, 0.4, 0.0, 0.3));
  written.push_back("fig5_rwa.svg");
  write_text_file(join(dir, "fig5_summary.csv"), summary);
  written.push_back("fig5_summary.csv");
  return written;
}

// Single-point operating examples: r at its noise-tolerance optimum, both
// external-coupling fractions, baths at the quoted occupancies.
std::vector<std::string> preset_point(const std::string& dir,
                                      const std::string& file, double n_cav,
                                      double n_m) {
  const double r_opt = optimal_r(0.9).r_opt;
  SweepSpec spec;
  spec.base_params = SystemParams::symmetric(0.01, 0.9, 1e-5, 0.2, r_opt);
  InputState in;
  in.alpha_i = 1e-4;
  in.chi_i = 1e-4;
  in.n_e_a = in.n_e_c = n_cav;
  in.n_i_a = in.n_i_c = n_cav;
  in.n_m = n_m;
  spec.base_inputs = in;
  spec.axes = {AxisSpec{"r_e", 0.9, 0.99, 2, false}};
  spec.workers = 1;
  write_text_file(join(dir, file), to_csv(run_sweep_serial(spec)));
  return {file};
}

}  // namespace

const std::vector<PresetInfo>& preset_list() {
  static const std::vector<PresetInfo> presets = {
      {"fig2a", "violation map F(alpha_i, r), 201x201, kappa=0.1, r_e=0.9"},
      {"fig2b", "violation boundaries for r_e in {0.7, 0.9, 0.99}, kappa=0.1"},
      {"fig3a", "noise tolerance curves F(n) per bath, kappa=0.01, r_e=0.9"},
      {"fig3b", "noise tolerance curves F(n) per bath, kappa=0.01, r_e=0.99"},
      {"fig4", "boundary shrinkage with cavity bath occupancy, kappa=0.1"},
      {"fig5", "full vs sideband-resolved boundaries, kappa in {0.01,0.02,0.1}"},
      {"mw", "microwave operating point: n_e=n_i=0.015, n_m at 7 mK / 10 MHz"},
      {"opt", "optical operating point: n_e=n_i=0.02, n_m at 300 K / 5 GHz"},
  };
  return presets;
}

std::vector<std::string> run_preset(const std::string& name,
                                    const std::string& out_dir, int workers) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "'");

  if (name == "fig2a") return preset_fig2a(out_dir, workers);
  if (name == "fig2b") return preset_fig2b(out_dir, workers);
  if (name == "fig3a") return preset_fig3(out_dir, 0.9, "fig3a.csv");
  if (name == "fig3b") return preset_fig3(out_dir, 0.99, "fig3b.csv");
  if (name == "fig4") return preset_fig4(out_dir, workers);
  if (name == "fig5") return preset_fig5(out_dir, workers);
  if (name == "mw")
    return preset_point(out_dir, "mw.csv", 0.015, bose_occupancy(0.007, 10e6));
  if (name == "opt")
    return preset_point(out_dir, "opt.csv", 0.02, bose_occupancy(300.0, 5e9));
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace ombell
