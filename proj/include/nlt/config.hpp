#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "nlt/errors.hpp"
#include "nlt/ftl.hpp"
#include "nlt/scheme.hpp"

namespace nlt {

/// Malformed or invalid experiment configuration. `where` names the file and
/// line, or the flag, that caused it.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : Error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

enum class Command { CompareFtl, ZeroFilter, FilterStudy, Verify, Simulate };

Command command_from_name(std::string_view name);
std::string_view command_name(Command command);

struct ExperimentConfig {
  std::string kernel = "exp";
  std::vector<std::string> kernels{"exp", "tri", "box", "rat2", "cauchy"};
  double alpha = 0.5;
  std::vector<double> alphas;
  double ell = 0.06;
  std::string velocity = "linear";
  std::vector<double> profile_breakpoints{-0.75, 0.75};
  std::vector<double> profile_values{0.05, 1.0, 0.05};
  double a = -1.5;
  double b = 1.5;
  double t_end = 1.4;
  double safety = 0.9;
  BoundaryMode boundary = BoundaryMode::Ghost;
  std::filesystem::path output_dir = "out";
  /// 0 keeps only the initial and final levels.
  std::size_t record_every = 0;
  /// FtL time step; 0 means dt = ell.
  double dt = 0.0;
  /// Reference grid dx = ell / ref_refine.
  std::size_t ref_refine = 8;
  double ref_safety = 0.9;
  std::uint64_t seed = 20240601;
  std::size_t trials = 1000;
  std::size_t jobs = 1;
  bool paper_scale = false;

  DensityProfile profile() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Defaults for each command (full-size parameters, with
/// the desk-scale substitution for the filter study).
ExperimentConfig default_config(Command command);

/// Sets one field from its textual value. `where` is used in errors.
void apply_setting(ExperimentConfig& config, std::string_view key,
                   std::string_view value, const std::string& where);

/// Reads flat `key = value` lines; '#' starts a comment.
void apply_config_file(ExperimentConfig& config,
                       const std::filesystem::path& path);
void apply_config_text(ExperimentConfig& config, std::string_view text,
                       const std::string& source);

/// Replaces ell and alphas by the heaviest filter-study schedule.
void apply_paper_scale(ExperimentConfig& config, Command command);

double parse_number(std::string_view text, const std::string& where);

}  // namespace nlt
