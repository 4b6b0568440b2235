#pragma once

#include <string>

#include "ombell/sweep.hpp"

namespace ombell {

// Shortest round-trip decimal rendering of a double; "nan" for NaN,
// "inf"/"-inf" for infinities.
std::string format_double(double v);

// CSV: header row (axis names, then output names), comma separated, "\n"
// endings, "nan" for NaN, "true"/"false" for the stable column.
std::string to_csv(const SweepResult& result);

// JSON document with three top-level keys in order: "config" (axes and
// the evaluated parameter/input fields), "records" (one object per grid
// point; NaN serialized as null), "meta" ({"artifact_version": ...}).
// Deterministic: no timestamps, no environment capture.
std::string to_json(const SweepResult& result, const SweepSpec& spec);

// Minimal standalone SVG: one <path> per polyline, viewBox in data units.
std::string contour_svg(const ContourResult& contour, double x_min,
                        double x_max, double y_min, double y_max);

// Write a file, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

// Render records in the named format ("csv" or "json") and write them to
// path.  Throws ConfigError on an unknown format, IoError on write failure.
void emit(const SweepResult& result, const SweepSpec& spec,
          const std::string& format, const std::string& path);

}  // namespace ombell
