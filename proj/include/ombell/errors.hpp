#pragma once

#include <stdexcept>
#include <string>

namespace ombell {

// Exit-code contract used by the CLI: config errors -> 2, numerical failures -> 3,
// I/O failures -> 4.

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// G_plus >= G_minus: the two-mode-squeezing frame and stability both require
// the red-sideband coupling to dominate.
struct CouplingOrderError : NumericalError {
  explicit CouplingOrderError(const std::string& what) : NumericalError(what) {}
};

struct ConvergenceError : NumericalError {
  explicit ConvergenceError(const std::string& what) : NumericalError(what) {}
};

// Requested a Bell normalization with no signal at all (Z -> 0).
struct NoSignalError : NumericalError {
  explicit NoSignalError(const std::string& what) : NumericalError(what) {}
};

}  // namespace ombell
