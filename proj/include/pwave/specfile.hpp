#pragma once

#include "pwave/quotient.hpp"
#include "pwave/report_json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pwave {

struct Tolerances {
  double flatness = 1e-7;
  double parallel = 1e-7;
  double similarity = 1e-8;
  double gauge = 1e-8;
  double lattice = 1e-6;
  double transversality = 1e-8;
};

struct CheckSettings {
  Tolerances tolerances;
  TransversalityGrid grid;
  int samples = 32;
  std::uint64_t seed = 0;
  int word_length = 4;
  double fd_step = 1e-2;
  double sample_half_width = 2.0;
};

/// Parsed and validated model-spec document.
struct SpecFile {
  ModelSpec model;
  std::optional<ConfGroupElement> gamma_hat;
  std::vector<HeisElement> gamma0;
  bool has_gamma = false;
  CheckSettings checks;

  std::optional<GammaSpec> gamma() const;
};

struct Diagnostic {
  std::string pointer;  // JSON pointer of the offending value
  int line = 0;         // 1-based, 0 when unknown
  std::string message;
  std::string format() const;
};

class SpecError : public Error {
 public:
  explicit SpecError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Line (1-based) at which every value of a syntactically valid JSON text starts.
std::map<std::string, int> json_pointer_lines(const std::string& text);

/// Throws SpecError with every diagnostic found.
SpecFile parse_spec(const std::string& text);
/// Throws IoError when the file cannot be read, SpecError when it is invalid.
SpecFile load_spec(const std::string& path);

/// Canonical document (all defaults explicit); parse_spec(dump) reproduces it.
Json spec_to_json(const SpecFile& spec);
SpecFile spec_from_gamma(const GammaSpec& gamma, const CheckSettings& checks = {});

}  // namespace pwave
