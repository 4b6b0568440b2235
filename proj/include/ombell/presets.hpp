#pragma once

#include <map>
#include <string>
#include <vector>

#include "ombell/bell.hpp"
#include "ombell/model.hpp"

namespace ombell {

// Flat key=value configuration shared by the CLI subcommands.  Values stay
// strings until queried; unknown keys are rejected at build time by the
// param/input builders so that typos fail loudly.
struct CliConfig {
  std::map<std::string, std::string> values;

  static CliConfig from_file(const std::string& path);  // IoError / ConfigError
  static CliConfig from_pairs(const std::vector<std::string>& pairs);  // "k=v"

  void merge(const CliConfig& overrides);
  bool has(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;

  // Canonical rendering for --print-config: sorted keys, key=value lines.
  std::string render() const;
};

// Recognized keys:
//   kappa, r_e, gamma, G_minus, r            (symmetric construction)
//   kappa_a, kappa_c, kappa_e_a, kappa_e_c,
//   G_plus, delta_a, delta_c, omega_m        (explicit overrides)
//   alpha_i, chi_i, n_e, n_i, n_m,
//   n_e_a, n_e_c, n_i_a, n_i_c               (input state)
//   eta_1, eta_2, beta_1, beta_2, theta, phi (detection)
//   omega                                    (analysis frequency)
//   level, workers, out, format              (execution)
//   axis, axis2                              (sweep axes, name:min:max:count[:log])
SystemParams params_from_config(const CliConfig& cfg);
InputState inputs_from_config(const CliConfig& cfg);
DetectionConfig detection_from_config(const CliConfig& cfg);

// Reject any key outside the recognized set (including sweep/exec keys).
void validate_config_keys(const CliConfig& cfg);

struct PresetInfo {
  std::string name;
  std::string description;
};

const std::vector<PresetInfo>& preset_list();

// Runs one named preset, writing its artifacts (CSV/JSON/SVG as appropriate)
// under out_dir.  Returns the relative paths written, in emission order.
// Deterministic for fixed inputs and any worker count.
std::vector<std::string> run_preset(const std::string& name,
                                    const std::string& out_dir, int workers);

}  // namespace ombell
