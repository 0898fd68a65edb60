#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "nlt/scheme.hpp"
#include "nlt/velocity.hpp"

namespace nlt {

/// A Lagrangian state mapped to physical space: cell i occupies
/// [edges[i], edges[i+1]) and carries values[i].
struct EulerianTrace {
  double t = 0.0;
  std::vector<double> edges;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// xi_0 = anchor, xi_{i+1} = xi_i + y_i dz. Returns N + 1 edges.
std::vector<double> eulerian_coordinates(std::span<const double> y,
                                         double anchor, double dz);

/// Anchor position x_1(0) + sum_m dt_m V(1/y_1^m) from the full history of
/// the first spacing. Accumulates in the same order as the online shift in
/// PairState, so the two agree bitwise.
double anchor_from_history(double x1_0, const VelocityModel& model,
                           std::span<const double> dts,
                           std::span<const double> first_spacings);

enum class TraceValue { InverseW, InverseY };

/// Edges from the state's spacings and online anchor shift; values 1/w or 1/y.
EulerianTrace make_trace(const PairState& state, double x1_0, double dz,
                         TraceValue which);

/// Piecewise-constant function, left-closed: values[k] on [x_k, x_{k+1}).
/// Queries left of x_0 return values.front(), right of the last node
/// values.back().
class StepFunction {
 public:
  StepFunction(std::vector<double> grid_x, std::vector<double> values);

  double operator()(double x) const;
  std::span<const double> nodes() const noexcept { return x_; }
  std::span<const double> values() const noexcept { return v_; }

 private:
  std::vector<double> x_;
  std::vector<double> v_;
};

double sample_step_function(std::span<const double> grid_x,
                            std::span<const double> values, double query);

/// sum_i |values_i - reference(xi_i)| (xi_{i+1} - xi_i).
double l1_between_traces(const EulerianTrace& trace,
                         const StepFunction& reference);

/// Header t,xi_i,inv_w_i,inv_y_i; one row per cell.
void write_trace_csv(std::ostream& os, const PairState& state, double x1_0,
                     double dz);

}  // namespace nlt
