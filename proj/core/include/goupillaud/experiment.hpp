#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "goupillaud/levy_paths.hpp"
#include "goupillaud/transport.hpp"

namespace goupillaud {

/// Invalid configuration; `line` is 0 when the problem is not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct ExperimentConfig {
  SubordinatorSpec driver = SubordinatorSpec::compound_poisson(1.0, 1.0, 1.0);
  std::uint64_t master_seed = 42;
  std::optional<TimeWindow> window;  // derived from the box when absent
  std::vector<int> levels{2, 3, 4, 5, 6, 7, 8, 9, 10};
  int reference_level = 14;
  InitialData u0 = InitialData::triangular(0.0, 1.0, 1.0);
  Box box{0.0, 4.0, 0.0, 2.0};
  std::vector<double> exponents{1.0, 2.0};
  std::size_t replicas = 64;
  std::size_t grid_nx = 512;
  std::size_t grid_nt = 257;
  double fio_bandwidth = 200.0;
  std::size_t fio_steps = 16384;
  std::size_t fio_points = 100;
  std::vector<double> times{1.0, 2.0, 3.0};
  double solve_x_lo = -2.0;
  double solve_x_hi = 10.0;
  std::size_t solve_samples = 1201;
  std::size_t probe_points = 1000;
  std::filesystem::path output_dir = "out";
  unsigned workers = 1;

  /// Line numbers of the keys read from a file, for error messages.
  std::map<std::string, std::size_t> key_lines;
  std::string source = "<defaults>";

  /// Throws ConfigError naming the offending key's line.
  void validate() const;
  int finest_level() const;
};

/// Parses flat "key = value" text; '#' starts a comment. Unknown keys and
/// malformed values are rejected with their line number.
ExperimentConfig parse_config(std::istream& is, const std::string& source);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Presets matching the two drivers of the published solution figure.
ExperimentConfig figure2_config(DriverKind kind);

std::vector<std::filesystem::path> cmd_sample_path(const ExperimentConfig& cfg, std::ostream& log);
std::vector<std::filesystem::path> cmd_solve(const ExperimentConfig& cfg, std::ostream& log);
std::vector<std::filesystem::path> cmd_converge(const ExperimentConfig& cfg, std::ostream& log);

struct FioCheckSummary {
  double max_deviation = 0.0;
  double max_tolerance = 0.0;
  std::size_t points = 0;
  std::size_t within_tolerance = 0;
};
FioCheckSummary cmd_fio_check(const ExperimentConfig& cfg, std::ostream& log);

std::vector<std::filesystem::path> cmd_figure2(const ExperimentConfig& base, std::ostream& log);

/// Hand-computed checks on the path with drift 1 and one jump of size 2 at
/// t = 0.5; returns the number of mismatches.
int cmd_selftest(std::ostream& log);

}  // namespace goupillaud
