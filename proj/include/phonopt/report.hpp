#pragma once
// Front-end plumbing: the line-based config file format, deterministic CSV
// emission, and the command-line driver.

#include "phonopt/analysis.hpp"
#include "phonopt/config.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phonopt::cli {

struct RunConfig {
  TrapBeamConfig trap;
  int n_max = 4;
  int n_safe = 2;
  long steps = 1L << 12;  // integrator first-pass step count
  analysis::RegimeInputs regime;
};

// Parse or validation failure; the message carries origin and line number.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-based `key = value` format, '#' starts a comment, blank lines ignored.
// Unknown keys and duplicate keys are errors (fail closed); missing required
// keys are errors; values are validated with the offending key named.
RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

struct LoadedConfig {
  RunConfig run;
  std::uint64_t hash = 0;  // of the raw file bytes
};
LoadedConfig load_config_file(const std::string& path);

// FNV-1a 64-bit, recorded in every CSV comment line.
std::uint64_t fnv1a64(const std::string& bytes);

// ------------------------------- CSV output ----------------------------------

// Scientific notation with 12 significant digits; the fixed format is what
// makes repeated runs byte-identical.
std::string format_sci(double v);

// "# phonopt <version> config_sha=<16 hex>" + header + rows.
std::string csv_document(std::uint64_t config_hash,
                         const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

// ------------------------------- driver --------------------------------------

// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error.
int run_cli(int argc, char** argv);

}  // namespace phonopt::cli
