#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "nlt/kernels.hpp"
#include "nlt/velocity.hpp"

namespace nlt {

/// How averages treat the cells beyond the right end of the window.
enum class BoundaryMode {
  /// Cells beyond the window hold the constant right state.
  Ghost,
  /// The last in-range weight absorbs all remaining kernel mass.
  Fold,
};

/// Right boundary of a Lagrangian window: the constant spacing carried by
/// every car downstream of it.
struct Boundary {
  double right_state = 1.0;
  BoundaryMode mode = BoundaryMode::Ghost;
};

struct LagrangianGrid {
  double dz = 1.0;
  std::size_t n_cells = 0;
  double y_left = 1.0;
  double y_right = 1.0;
  double z_origin = 0.0;

  void validate() const;
  double z(std::size_t i) const { return z_origin + static_cast<double>(i) * dz; }
};

/// Spacings y and their filtered counterpart w at one time level.
struct PairState {
  double t = 0.0;
  std::size_t step = 0;
  /// Size of the step that produced this level (0 initially).
  double dt = 0.0;
  std::vector<double> y;
  std::vector<double> w;
  /// Accumulated dt * V(1/y_0) over all steps taken; the Eulerian position
  /// of the first car is its initial position plus this shift.
  double anchor_shift = 0.0;
};

enum class CflCheck { Enforce, Skip };

/// Time step dt = safety * dz / sup W' over [w_min, w_max]; dz when W is flat.
double cfl_dt(const VelocityModel& model, double w_min, double w_max,
              double dz, double safety);

/// A_i = sum_j I_j v_{i+j} under the given boundary convention, written into
/// `out` (same length as `values`).
void average_into(std::span<const double> values, const WeightRow& row,
                  double ghost, BoundaryMode mode, std::span<double> out);

/// The single entry A_i of average_into.
double average_at(std::span<const double> values, const WeightRow& row,
                  double ghost, BoundaryMode mode, std::size_t i);

/// w_i = sum_j I_j y_{i+j}.
std::vector<double> filter(std::span<const double> y, const WeightRow& row,
                           const Boundary& boundary);

/// One step of the monotone scheme for the filtered variable:
/// w_i + lambda (A_{i+1} - A_i), A the average of W(w).
std::vector<double> step_w(std::span<const double> w, const WeightRow& row,
                           const VelocityModel& model, double lambda,
                           const Boundary& boundary,
                           CflCheck check = CflCheck::Enforce);

/// One upwind step for the spacing, y_i + lambda (W(w_{i+1}) - W(w_i)),
/// followed by refiltering. Advances t by lambda * dz and the anchor shift.
PairState step_pair(const PairState& state, const WeightRow& row,
                    const VelocityModel& model, double lambda,
                    const Boundary& boundary,
                    CflCheck check = CflCheck::Enforce);

struct RunOptions {
  double t_end = 0.0;
  double safety = 0.9;
  std::size_t record_every = 1;
  BoundaryMode mode = BoundaryMode::Ghost;
  double tail_mass_tol = 1e-12;
};

/// Drives step_pair on one grid with CFL-limited steps, landing exactly on
/// t_end.
class PairSimulation {
 public:
  PairSimulation(std::vector<double> y0, const LagrangianGrid& grid,
                 const Kernel& kernel, double alpha, VelocityModel model,
                 const RunOptions& options);

  const PairState& state() const noexcept { return state_; }
  const WeightRow& row() const noexcept { return row_; }
  const LagrangianGrid& grid() const noexcept { return grid_; }
  const VelocityModel& model() const noexcept { return model_; }
  Boundary boundary() const noexcept { return {grid_.y_right, options_.mode}; }
  bool done() const noexcept { return state_.t >= options_.t_end; }

  /// CFL step from the current range of w, shortened to land on t_end.
  double next_dt() const;
  /// Takes one step; returns the dt used.
  double advance();
  /// Steps until t_end, calling `observer` after every step.
  void run_to_end(const std::function<void(const PairState&)>& observer = {});

 private:
  LagrangianGrid grid_;
  VelocityModel model_;
  RunOptions options_;
  WeightRow row_;
  PairState state_;
};

std::vector<PairState> run(std::vector<double> y0, const LagrangianGrid& grid,
                           const Kernel& kernel, double alpha,
                           const VelocityModel& model,
                           const RunOptions& options);

/// CSV with header t,i,z_i,y_i,w_i, values at 17 significant digits.
void write_pair_csv(std::ostream& os, std::span<const PairState> states,
                    const LagrangianGrid& grid);

}  // namespace nlt
