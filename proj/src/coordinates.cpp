#include "nlt/coordinates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <string>
#include <ostream>

#include "nlt/errors.hpp"

namespace nlt {

std::vector<double> eulerian_coordinates(std::span<const double> y,
                                         double anchor, double dz) {
  std::vector<double> xi(y.size() + 1);
  xi[0] = anchor;
  for (std::size_t i = 0; i < y.size(); ++i) xi[i + 1] = xi[i] + y[i] * dz;
  return xi;
}

double anchor_from_history(double x1_0, const VelocityModel& model,
                           std::span<const double> dts,
                           std::span<const double> first_spacings) {
  if (dts.size() != first_spacings.size()) {
    throw InvalidArgument("anchor_from_history: history is incomplete (" +
                          std::to_string(dts.size()) + " steps, " +
                          std::to_string(first_spacings.size()) +
                          " spacings)");
  }
  double shift = 0.0;
  for (std::size_t m = 0; m < dts.size(); ++m) {
    shift = shift + dts[m] * model.V(1.0 / first_spacings[m]);
  }
  return x1_0 + shift;
}

EulerianTrace make_trace(const PairState& state, double x1_0, double dz,
                         TraceValue which) {
  EulerianTrace trace;
  trace.t = state.t;
  trace.edges = eulerian_coordinates(state.y, x1_0 + state.anchor_shift, dz);
  const auto& src = which == TraceValue::InverseW ? state.w : state.y;
  trace.values.resize(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) trace.values[i] = 1.0 / src[i];
  return trace;
}

StepFunction::StepFunction(std::vector<double> grid_x,
                           std::vector<double> values)
    : x_(std::move(grid_x)), v_(std::move(values)) {
  if (x_.empty()) throw InvalidArgument("step function needs a nonempty grid");
  if (x_.size() != v_.size()) {
    throw InvalidArgument("step function needs one value per node");
  }
  if (!std::is_sorted(x_.begin(), x_.end())) {
    throw InvalidArgument("step function nodes must be sorted");
  }
}

double StepFunction::operator()(double x) const {
  return sample_step_function(x_, v_, x);
}

double sample_step_function(std::span<const double> grid_x,
                            std::span<const double> values, double query) {
  if (grid_x.empty() || grid_x.size() != values.size()) {
    throw InvalidArgument("sample_step_function: empty or mismatched grid");
  }
  const auto it = std::upper_bound(grid_x.begin(), grid_x.end(), query);
  if (it == grid_x.begin()) return values.front();
  return values[static_cast<std::size_t>(it - grid_x.begin()) - 1];
}

double l1_between_traces(const EulerianTrace& trace,
                         const StepFunction& reference) {
  if (trace.edges.size() != trace.values.size() + 1) {
    throw InvalidArgument("trace needs one more edge than values");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    const double width = trace.edges[i + 1] - trace.edges[i];
    total += std::abs(trace.values[i] - reference(trace.edges[i])) * width;
  }
  return total;
}

void write_trace_csv(std::ostream& os, const PairState& state, double x1_0,
                     double dz) {
  const std::vector<double> xi =
      eulerian_coordinates(state.y, x1_0 + state.anchor_shift, dz);
  os << "t,xi_i,inv_w_i,inv_y_i\n" << std::setprecision(17);
  for (std::size_t i = 0; i < state.y.size(); ++i) {
    os << state.t << ',' << xi[i] << ',' << 1.0 / state.w[i] << ','
       << 1.0 / state.y[i] << '\n';
  }
}

}  // namespace nlt
