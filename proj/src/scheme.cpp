#include "nlt/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "nlt/errors.hpp"

namespace nlt {
namespace {

// sum_j wts[j] (v[j] - center), four independent partial sums.
inline double weighted_deviation(const double* wts, const double* v,
                                 double center, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    s0 += wts[j] * (v[j] - center);
    s1 += wts[j + 1] * (v[j + 1] - center);
    s2 += wts[j + 2] * (v[j + 2] - center);
    s3 += wts[j + 3] * (v[j + 3] - center);
  }
  for (; j < n; ++j) s0 += wts[j] * (v[j] - center);
  return (s0 + s1) + (s2 + s3);
}

std::pair<double, double> range_with(std::span<const double> v, double extra) {
  double lo = extra, hi = extra;
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

void check_cfl(std::span<const double> w, const VelocityModel& model,
               double lambda, double ghost) {
  const auto [lo, hi] = range_with(w, ghost);
  const double number = lambda * model.sup_dW(lo, hi);
  if (number > 1.0 + 1e-12) throw CflViolation(number, 1.0);
}

}  // namespace

void LagrangianGrid::validate() const {
  if (!(dz > 0.0)) throw InvalidArgument("grid dz must be positive");
  if (n_cells == 0) throw InvalidArgument("grid must have at least one cell");
  if (!(y_left >= 1.0) || !(y_right >= 1.0)) {
    throw InvalidArgument("boundary spacings must be >= 1");
  }
}

double cfl_dt(const VelocityModel& model, double w_min, double w_max,
              double dz, double safety) {
  if (!(dz > 0.0)) throw InvalidArgument("cfl_dt: dz must be positive");
  if (!(safety > 0.0)) throw InvalidArgument("cfl_dt: safety must be positive");
  const double sup = model.sup_dW(w_min, w_max);
  if (sup <= 0.0) return dz;
  return safety * dz / sup;
}

double average_at(std::span<const double> values, const WeightRow& row,
                  double ghost, BoundaryMode mode, std::size_t i) {
  const std::size_t n = values.size();
  const std::size_t len = row.size();
  const double* wts = row.weights().data();
  const double* v = values.data();
  const std::size_t m = n - i;
  const double c = v[i];
  double dev;
  if (m >= len) {
    dev = weighted_deviation(wts + 1, v + i + 1, c, len - 1);
  } else if (mode == BoundaryMode::Ghost) {
    dev = weighted_deviation(wts + 1, v + i + 1, c, m - 1) +
          row.tail_from(m) * (ghost - c);
  } else {
    // the last in-range cell takes all remaining mass
    dev = m >= 2 ? weighted_deviation(wts + 1, v + i + 1, c, m - 2) +
                       row.tail_from(m - 1) * (v[n - 1] - c)
                 : 0.0;
  }
  return c + dev;
}

void average_into(std::span<const double> values, const WeightRow& row,
                  double ghost, BoundaryMode mode, std::span<double> out) {
  const std::size_t n = values.size();
  if (out.size() != n) throw InvalidArgument("average_into: size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = average_at(values, row, ghost, mode, i);
  }
}

std::vector<double> filter(std::span<const double> y, const WeightRow& row,
                           const Boundary& boundary) {
  if (y.empty()) throw InvalidArgument("filter: empty spacing sequence");
  std::vector<double> w(y.size());
  average_into(y, row, boundary.right_state, boundary.mode, w);
  return w;
}

std::vector<double> step_w(std::span<const double> w, const WeightRow& row,
                           const VelocityModel& model, double lambda,
                           const Boundary& boundary, CflCheck check) {
  if (w.empty()) throw InvalidArgument("step_w: empty state");
  const double ghost = boundary.right_state;
  if (check == CflCheck::Enforce) check_cfl(w, model, lambda, ghost);
  const std::size_t n = w.size();
  std::vector<double> flux(n);
  for (std::size_t i = 0; i < n; ++i) flux[i] = model.W(w[i]);
  const double flux_ghost = model.W(ghost);
  std::vector<double> avg(n);
  average_into(flux, row, flux_ghost, boundary.mode, avg);
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double right = i + 1 < n ? avg[i + 1] : flux_ghost;
    next[i] = w[i] + lambda * (right - avg[i]);
  }
  return next;
}

PairState step_pair(const PairState& state, const WeightRow& row,
                    const VelocityModel& model, double lambda,
                    const Boundary& boundary, CflCheck check) {
  const std::size_t n = state.y.size();
  if (n == 0 || state.w.size() != n) {
    throw InvalidArgument("step_pair: y and w must be nonempty and aligned");
  }
  const double ghost = boundary.right_state;
  if (check == CflCheck::Enforce) check_cfl(state.w, model, lambda, ghost);

  PairState next;
  next.y.resize(n);
  double flux_right = model.W(ghost);
  for (std::size_t i = n; i-- > 0;) {
    const double flux_here = model.W(state.w[i]);
    next.y[i] = state.y[i] + lambda * (flux_right - flux_here);
    flux_right = flux_here;
  }
  next.w = filter(next.y, row, boundary);
  const double dt = lambda * row.dz();
  next.t = state.t + dt;
  next.dt = dt;
  next.step = state.step + 1;
  next.anchor_shift = state.anchor_shift + dt * model.V(1.0 / next.y[0]);
  return next;
}

PairSimulation::PairSimulation(std::vector<double> y0,
                               const LagrangianGrid& grid,
                               const Kernel& kernel, double alpha,
                               VelocityModel model, const RunOptions& options)
    : grid_(grid),
      model_(std::move(model)),
      options_(options),
      row_(WeightRow::identity(grid.dz)) {
  grid_.validate();
  if (y0.size() != grid_.n_cells) {
    throw InvalidArgument("initial data has " + std::to_string(y0.size()) +
                          " cells, grid has " +
                          std::to_string(grid_.n_cells));
  }
  for (std::size_t i = 0; i < y0.size(); ++i) {
    if (!(y0[i] >= 1.0)) {
      throw InvalidArgument("initial spacing y0[" + std::to_string(i) +
                            "] = " + std::to_string(y0[i]) + " is below 1");
    }
  }
  if (!(options_.t_end >= 0.0)) throw InvalidArgument("t_end must be >= 0");
  if (!(options_.safety > 0.0)) throw InvalidArgument("safety must be > 0");
  if (options_.record_every == 0) options_.record_every = 1;

  WeightOptions wopts;
  wopts.tail_mass_tol = options_.tail_mass_tol;
  wopts.window = grid_.n_cells + 1;
  row_ = lagrangian_weights(kernel, alpha, grid_.dz, wopts);

  state_.y = std::move(y0);
  state_.w = filter(state_.y, row_, boundary());
}

double PairSimulation::next_dt() const {
  const auto [lo, hi] = range_with(state_.w, grid_.y_right);
  const double dt = cfl_dt(model_, lo, hi, grid_.dz, options_.safety);
  return std::min(dt, options_.t_end - state_.t);
}

double PairSimulation::advance() {
  const double dt = next_dt();
  const bool last = dt >= options_.t_end - state_.t;
  state_ = step_pair(state_, row_, model_, dt / grid_.dz, boundary());
  if (last) state_.t = options_.t_end;
  return dt;
}

void PairSimulation::run_to_end(
    const std::function<void(const PairState&)>& observer) {
  while (!done()) {
    advance();
    if (observer) observer(state_);
  }
}

std::vector<PairState> run(std::vector<double> y0, const LagrangianGrid& grid,
                           const Kernel& kernel, double alpha,
                           const VelocityModel& model,
                           const RunOptions& options) {
  PairSimulation sim(std::move(y0), grid, kernel, alpha, model, options);
  std::vector<PairState> trajectory{sim.state()};
  const std::size_t every = std::max<std::size_t>(options.record_every, 1);
  sim.run_to_end([&](const PairState& s) {
    if (s.step % every == 0 || s.t >= options.t_end) trajectory.push_back(s);
  });
  return trajectory;
}

void write_pair_csv(std::ostream& os, std::span<const PairState> states,
                    const LagrangianGrid& grid) {
  os << "t,i,z_i,y_i,w_i\n";
  os << std::setprecision(17);
  for (const auto& s : states) {
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      os << s.t << ',' << i << ',' << grid.z(i) << ',' << s.y[i] << ','
         << s.w[i] << '\n';
    }
  }
}

}  // namespace nlt
