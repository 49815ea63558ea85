#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "msdd/drive.hpp"
#include "msdd/dynamics.hpp"

namespace msdd::io {

/// Settings used only by the verification and spectrum commands.
struct EstimatesConfig {
  std::vector<double> radii{0.1, 1.0, 10.0};   // absorbing experiment, initial ||X(0)||
  std::vector<double> deltas{0.5, 0.25, 0.125};
  int ensemble = 6;                            // random A fields for the spectrum tasks
  double A_H1 = 2.0;                           // H1 norm of each ensemble member
  int A_max_mode = 3;
  std::vector<int> spectrum_grids{};           // extra grid sizes (per axis) for equivalence; empty = domain only
};

/// Parsed and validated run configuration.
///
/// INI-style text with sections [domain] [params] [potential] [pump]
/// [initial] [output] [estimates]; `key = value`, `#` or `;` comments,
/// comma-separated lists. Every section and key is optional; defaults are
/// the member initialisers below.
struct RunConfig {
  std::array<double, 3> L{1.0, 1.0, 1.0};
  std::array<int, 3> N{8, 8, 8};
  Params params;
  PotentialPreset potential;
  PumpSpec pump;
  InitialSpec initial;
  std::string output_dir = "out";
  int record_every = 10;
  int snapshot_every = 0;
  EstimatesConfig estimates;
};

/// Parses and validates. Throws ConfigError with "line N: ..." for syntax
/// problems and with the violated condition and key for invalid values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Everything needed to run: the domain, the model and the initial state.
struct Setup {
  DomainPtr domain;
  Model model;
  State initial;
};

Setup build(const RunConfig& cfg);

/// Output directory after the MSDD_OUTPUT_DIR override.
std::string output_directory(const RunConfig& cfg);

}  // namespace msdd::io
