#pragma once

#include "pwave/specfile.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pwave {

struct Stages {
  bool flatness = true;
  bool action = true;
  bool quotient = true;
  bool gauge = true;
  /// When false, quotient and gauge are skipped (not failed) for specs without a gamma section.
  bool explicit_selection = false;
  static Stages all() { return {}; }
};

struct CsvTable {
  std::string file_name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string render() const;
};

struct RunResult {
  Json report;   // deterministic part
  Json timings;  // wall-clock seconds per stage
  std::vector<CsvTable> tables;
  bool pass = false;
};

/// Minimum orbit displacement the quotient stage requires.
inline constexpr double kOrbitSeparationThreshold = 1e-3;

/// Runs the selected stages on a validated spec. `source` labels the input
/// and `input_hash` fingerprints it.
RunResult run_checks(const SpecFile& spec, const Stages& stages, const std::string& source,
                     const std::string& input_hash);

/// Full pipeline for a bundled example; a literal run that hits the lattice
/// obstruction also carries the adjusted rerun under "adjusted_rerun".
RunResult run_example(const std::string& name, const ExampleParams& params,
                      const CheckSettings& checks);

std::string sha256_hex(const std::string& data);

/// Report JSON with sorted keys, two-space indent, trailing newline; timings
/// are stored under a separate top-level "timings" key.
std::string render_report(const RunResult& r);

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace pwave
