#include "ombell/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ombell/errors.hpp"
#include "ombell/version.hpp"

namespace ombell {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const SweepResult& result) {
  std::string out;
  bool first = true;
  for (const auto& name : result.axis_names) {
    if (!first) out += ',';
    out += name;
    first = false;
  }
  for (const auto& name : result.output_names) {
    if (!first) out += ',';
    out += name;
    first = false;
  }
  out += '\n';

  for (const auto& rec : result.records) {
    first = true;
    for (double v : rec.axis_values) {
      if (!first) out += ',';
      out += format_double(v);
      first = false;
    }
    for (std::size_t k = 0; k < result.output_names.size(); ++k) {
      if (!first) out += ',';
      if (result.output_names[k] == "stable")
        out += rec.stable ? "true" : "false";
      else
        out += format_double(rec.outputs[k]);
      first = false;
    }
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;  // NaN and infinities have no JSON literal
}

nlohmann::ordered_json json_complex(std::complex<double> z) {
  return nlohmann::ordered_json::array({z.real(), z.imag()});
}

}  // namespace

std::string to_json(const SweepResult& result, const SweepSpec& spec) {
  nlohmann::ordered_json doc;

  nlohmann::ordered_json axes = nlohmann::ordered_json::array();
  for (const auto& axis : spec.axes) {
    axes.push_back({{"name", axis.name},
                    {"min", axis.min},
                    {"max", axis.max},
                    {"count", axis.count},
                    {"log_scale", axis.log_scale}});
  }
  const SystemParams& p = spec.base_params;
  const InputState& in = spec.base_inputs;
  doc["config"] = {
      {"axes", axes},
      {"params",
       {{"omega_m", p.omega_m},
        {"kappa_a", p.kappa_a},
        {"kappa_c", p.kappa_c},
        {"kappa_e_a", p.kappa_e_a},
        {"kappa_e_c", p.kappa_e_c},
        {"gamma", p.gamma},
        {"G_plus", p.G_plus},
        {"G_minus", p.G_minus},
        {"delta_a", p.delta_a},
        {"delta_c", p.delta_c}}},
      {"inputs",
       {{"alpha_i", json_complex(in.alpha_i)},
        {"chi_i", json_complex(in.chi_i)},
        {"n_e_a", in.n_e_a},
        {"n_e_c", in.n_e_c},
        {"n_i_a", in.n_i_a},
        {"n_i_c", in.n_i_c},
        {"n_m", in.n_m}}},
      {"outputs", result.output_names},
      {"workers", spec.workers}};

  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& rec : result.records) {
    nlohmann::ordered_json row;
    for (std::size_t a = 0; a < result.axis_names.size(); ++a)
      row[result.axis_names[a]] = rec.axis_values[a];
    for (std::size_t k = 0; k < result.output_names.size(); ++k) {
      if (result.output_names[k] == "stable")
        row["stable"] = rec.stable;
      else
        row[result.output_names[k]] = json_number(rec.outputs[k]);
    }
    records.push_back(std::move(row));
  }
  doc["records"] = std::move(records);
  doc["meta"] = {{"artifact_version", artifact_version}};
  return doc.dump(2) + "\n";
}

std::string contour_svg(const ContourResult& contour, double x_min,
                        double x_max, double y_min, double y_max) {
  const double w = x_max - x_min;
  const double h = y_max - y_min;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
  svg += format_double(x_min) + " " + format_double(y_min) + " " +
         format_double(w) + " " + format_double(h) + "\">\n";
  // Flip the y axis so larger data values render upward.
  svg += "  <g fill=\"none\" stroke=\"black\" stroke-width=\"" +
         format_double(0.004 * w) + "\" transform=\"translate(0 " +
         format_double(y_min + y_max) + ") scale(1 -1)\">\n";
  for (const auto& poly : contour.polylines) {
    if (poly.empty()) continue;
    svg += "    <path d=\"";
    for (std::size_t k = 0; k < poly.size(); ++k) {
      svg += k == 0 ? "M " : " L ";
      svg += format_double(poly[k].first) + " " + format_double(poly[k].second);
    }
    svg += "\"/>\n";
  }
  svg += "  </g>\n</svg>\n";
  return svg;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void emit(const SweepResult& result, const SweepSpec& spec,
          const std::string& format, const std::string& path) {
  std::string content;
  if (format == "csv")
    content = to_csv(result);
  else if (format == "json")
    content = to_json(result, spec);
  else
    throw ConfigError("unknown output format '" + format +
                      "' (expected csv or json)");
  write_text_file(path, content);
}

}  // namespace ombell
