#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nlt/campaigns.hpp"
#include "nlt/config.hpp"
#include "nlt/coordinates.hpp"
#include "nlt/diagnostics.hpp"
#include "nlt/ftl.hpp"
#include "nlt/reference.hpp"
#include "nlt/scheme.hpp"

namespace nlt {

// Every driver writes its CSV files and a gnuplot script into
// config.output_dir, unless that path is empty.

struct FtlModelResult {
  FtlModel model;
  FtlState final_state;
  double centroid;
};

struct CompareFtlResult {
  std::vector<FtlModelResult> models;  // local, eulerian, lagrangian
};

CompareFtlResult cmd_compare_ftl(const ExperimentConfig& config);

/// One Lagrangian pair-scheme run on the discretized profile.
struct PairRun {
  double alpha;
  LagrangianGrid grid;
  LagrangianData data;
  PairState final_state;
  std::size_t steps = 0;
  /// Largest sup-norm gap between filter(y) and an independently stepped w,
  /// when requested.
  std::optional<double> consistency_gap;
  /// Ranges and BV of w at every level, when requested.
  double w_min = 0.0;
  double w_max = 0.0;
  double bv_max = 0.0;
};

struct PairRunOptions {
  bool track_consistency = false;
  bool track_bounds = false;
  /// Called with every state (including the initial one).
  std::function<void(const PairState&)> observer;
};

PairRun run_pair_experiment(const ExperimentConfig& config,
                            const Kernel& kernel, double alpha,
                            const PairRunOptions& options = {});

/// Engquist-Osher reference for the configured profile on dx = ell/ref_refine,
/// over a window covering every car up to t_end.
struct ReferenceRun {
  EulerianGrid grid;
  EoSolution solution;
  StepFunction as_function() const;
};

ReferenceRun run_reference(const ExperimentConfig& config);

struct ZeroFilterRow {
  double alpha;
  double l1_inv_w;
  double l1_inv_y;
  double kuznetsov_bound;
  double filtered_gap;
  double gap_bound;  // alpha BV(y0) + 10 dz
  std::size_t n_cells;
  std::size_t steps;
};

struct ZeroFilterResult {
  std::vector<ZeroFilterRow> rows;  // sorted by decreasing alpha
  std::optional<RateFit> fit;
  double bv_y0 = 0.0;
};

ZeroFilterResult cmd_zero_filter(const ExperimentConfig& config);

struct FilterStudyRow {
  std::string kernel;
  double alpha;
  double filtered_gap;
  std::optional<double> identity_residual;  // exponential kernel only
  double bv_y;
  double bv_w;
};

struct FilterStudySummary {
  std::string kernel;
  /// filtered gap at the smallest alpha over the gap at the largest.
  double gap_ratio;
  bool gap_shrinks;  // ratio <= 1/2
};

struct FilterStudyResult {
  std::vector<FilterStudyRow> rows;
  std::vector<FilterStudySummary> summary;
};

FilterStudyResult cmd_filter_study(const ExperimentConfig& config);

VerifyReport cmd_verify(const ExperimentConfig& config);

struct SimulateResult {
  std::vector<PairState> trajectory;
  LagrangianGrid grid;
  double x_first;
};

SimulateResult cmd_simulate(const ExperimentConfig& config);

}  // namespace nlt
