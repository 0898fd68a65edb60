#include "nlt/ftl.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "nlt/errors.hpp"
#include "nlt/scheme.hpp"

namespace nlt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxCars = 50'000'000;

// Gap ratios within this relative distance of 1 are treated as exactly 1;
// they only arise from rounding in the mass inversion.
constexpr double kSnap = 1e-9;

}  // namespace

DensityProfile::DensityProfile(std::vector<double> breakpoints,
                               std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw InvalidArgument("density profile needs one more value than "
                          "breakpoints");
  }
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k + 1] > breakpoints_[k])) {
      throw InvalidArgument("density breakpoints must be strictly increasing");
    }
  }
  for (double v : values_) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw InvalidArgument("density values must lie in (0, 1], got " +
                            std::to_string(v));
    }
  }
}

DensityProfile DensityProfile::box(double lo, double hi, double inside,
                                   double outside) {
  return DensityProfile({lo, hi}, {outside, inside, outside});
}

std::size_t DensityProfile::piece_index(double x) const {
  return static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
      breakpoints_.begin());
}

double DensityProfile::operator()(double x) const {
  return values_[piece_index(x)];
}

double DensityProfile::mass(double from, double to) const {
  if (!(to >= from)) throw InvalidArgument("mass: requires from <= to");
  double total = 0.0;
  double cur = from;
  for (std::size_t k = piece_index(from); cur < to; ++k) {
    const double end =
        k < breakpoints_.size() ? std::min(breakpoints_[k], to) : to;
    total += values_[k] * (end - cur);
    cur = end;
  }
  return total;
}

double DensityProfile::position_of_mass(double from, double m) const {
  if (!(m >= 0.0)) throw InvalidArgument("position_of_mass: negative mass");
  double cur = from;
  for (std::size_t k = piece_index(from);; ++k) {
    const double rho = values_[k];
    if (k >= breakpoints_.size()) return cur + m / rho;
    const double piece = rho * (breakpoints_[k] - cur);
    if (m <= piece) return cur + m / rho;
    m -= piece;
    cur = breakpoints_[k];
  }
}

double DensityProfile::spacing_variation() const {
  double tv = 0.0;
  for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
    tv += std::abs(1.0 / values_[k + 1] - 1.0 / values_[k]);
  }
  return tv;
}

double FtlState::density(std::size_t i) const {
  if (i + 1 >= x.size()) return u_last;
  return std::min(1.0, ell / gap(i));
}

double FtlState::spacing(std::size_t i) const {
  if (i + 1 >= x.size()) return 1.0 / u_last;
  const double y = gap(i) / ell;
  return (y < 1.0 && y > 1.0 - kSnap) ? 1.0 : y;
}

double FtlState::centroid() const {
  double sum = 0.0;
  for (double xi : x) sum += xi;
  return sum / static_cast<double>(x.size());
}

InitialPositions discretize_positions(const DensityProfile& rho0, double ell,
                                      double a, double b) {
  if (!(ell > 0.0)) throw InvalidArgument("vehicle length must be positive");
  if (!(b > a)) throw InvalidArgument("discretization interval needs a < b");
  InitialPositions out;
  out.x.push_back(a);
  for (std::size_t k = 1;; ++k) {
    const double next =
        rho0.position_of_mass(a, static_cast<double>(k) * ell);
    out.x.push_back(next);
    if (next > b) break;
    if (k > kMaxCars) {
      throw InvalidArgument("discretization produces more than " +
                            std::to_string(kMaxCars) + " cars");
    }
  }
  out.u_left = rho0(a - 1.0);
  out.u_last = rho0(out.x.back());
  return out;
}

FtlState discretize_density(const DensityProfile& rho0, double ell, double a,
                            double b) {
  InitialPositions init = discretize_positions(rho0, ell, a, b);
  FtlState state;
  state.ell = ell;
  state.u_left = init.u_left;
  state.u_last = init.u_last;
  init.x.pop_back();
  state.x = std::move(init.x);
  return state;
}

LagrangianData lagrangian_initial_data(const DensityProfile& rho0, double ell,
                                       double a, double b) {
  const InitialPositions init = discretize_positions(rho0, ell, a, b);
  LagrangianData data;
  data.x_first = init.x.front();
  data.y_left = 1.0 / init.u_left;
  data.y_right = 1.0 / init.u_last;
  data.y0.resize(init.x.size() - 1);
  for (std::size_t i = 0; i + 1 < init.x.size(); ++i) {
    const double y = (init.x[i + 1] - init.x[i]) / ell;
    data.y0[i] = (y < 1.0 && y > 1.0 - kSnap) ? 1.0 : y;
  }
  return data;
}

std::string_view model_tag(FtlModel model) {
  switch (model) {
    case FtlModel::Local: return "local";
    case FtlModel::NonlocalEulerian: return "eulerian";
    case FtlModel::NonlocalLagrangian: return "lagrangian";
  }
  return "?";
}

FtlSetup FtlSetup::make(VelocityModel velocity, const Kernel& kernel,
                        double alpha, double ell, std::size_t n_cars) {
  WeightOptions options;
  options.window = n_cars + 1;
  WeightRow row = lagrangian_weights(kernel, alpha, ell, options);
  return FtlSetup{std::move(velocity), kernel, alpha, std::move(row)};
}

double speed_local(const FtlState& state, std::size_t i,
                   const VelocityModel& velocity) {
  if (i >= state.size()) throw InvalidArgument("speed_local: bad index");
  return velocity.V(state.density(i));
}

namespace {

std::vector<double> positions_with_infinity(const FtlState& state) {
  std::vector<double> xs(state.x);
  xs.push_back(kInf);
  return xs;
}

double eulerian_density(const FtlState& state, std::span<const double> xs,
                        std::size_t i, const Kernel& kernel, double alpha) {
  const std::vector<double> weights = eulerian_weights(kernel, alpha, xs, i);
  double u = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    u += weights[k] * state.density(i + k);
  }
  return u;
}

std::vector<double> all_spacings(const FtlState& state) {
  std::vector<double> y(state.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = state.spacing(i);
  return y;
}

}  // namespace

double speed_nonlocal_eulerian(const FtlState& state, std::size_t i,
                               const Kernel& kernel, double alpha,
                               const VelocityModel& velocity) {
  if (i >= state.size()) throw InvalidArgument("speed_nonlocal_eulerian: bad index");
  const std::vector<double> xs = positions_with_infinity(state);
  return velocity.V(eulerian_density(state, xs, i, kernel, alpha));
}

double speed_nonlocal_lagrangian(const FtlState& state, std::size_t i,
                                 const WeightRow& row,
                                 const VelocityModel& velocity) {
  if (i >= state.size()) throw InvalidArgument("speed_nonlocal_lagrangian: bad index");
  // Weight j multiplies the spacing of car i + j itself, not a repeated y_i.
  const std::vector<double> y = all_spacings(state);
  const double mean_spacing = average_at(y, row, y.back(), BoundaryMode::Fold, i);
  return velocity.V(1.0 / mean_spacing);
}

std::vector<double> speeds(const FtlState& state, FtlModel model,
                           const FtlSetup& setup) {
  const std::size_t n = state.size();
  std::vector<double> v(n);
  switch (model) {
    case FtlModel::Local:
      for (std::size_t i = 0; i < n; ++i) v[i] = setup.velocity.V(state.density(i));
      break;
    case FtlModel::NonlocalEulerian: {
      const std::vector<double> xs = positions_with_infinity(state);
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = setup.velocity.V(
            eulerian_density(state, xs, i, setup.kernel, setup.alpha));
      }
      break;
    }
    case FtlModel::NonlocalLagrangian: {
      const std::vector<double> y = all_spacings(state);
      std::vector<double> mean(n);
      average_into(y, setup.lagrangian_row, y.back(), BoundaryMode::Fold, mean);
      for (std::size_t i = 0; i < n; ++i) v[i] = setup.velocity.V(1.0 / mean[i]);
      break;
    }
  }
  return v;
}

double harmonic_mean_density(std::span<const double> weights,
                             std::span<const double> densities) {
  if (weights.size() != densities.size() || weights.empty()) {
    throw InvalidArgument("harmonic_mean_density: size mismatch");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] / densities[k];
  return 1.0 / s;
}

double arithmetic_mean_density(std::span<const double> weights,
                               std::span<const double> densities) {
  if (weights.size() != densities.size() || weights.empty()) {
    throw InvalidArgument("arithmetic_mean_density: size mismatch");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * densities[k];
  return s;
}

FtlState euler_step(const FtlState& state, FtlModel model,
                    const FtlSetup& setup, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("euler_step: dt must be positive");
  const std::vector<double> v = speeds(state, model, setup);
  FtlState next = state;
  next.t = state.t + dt;
  for (std::size_t i = 0; i < next.x.size(); ++i) next.x[i] += dt * v[i];
  for (std::size_t i = 0; i + 1 < next.x.size(); ++i) {
    const double gap = next.gap(i);
    if (gap < next.ell * (1.0 - kSnap)) throw OrderingViolation(i, gap, next.ell);
  }
  return next;
}

FtlState integrate(FtlState state, FtlModel model, const FtlSetup& setup,
                   double t_end, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("integrate: dt must be positive");
  const double t0 = state.t;
  const auto steps = static_cast<std::size_t>(
      std::ceil((t_end - t0) / dt - 1e-9));
  for (std::size_t n = 0; n < steps; ++n) {
    const double h = std::min(dt, t_end - state.t);
    if (h <= 0.0) break;
    state = euler_step(state, model, setup, h);
  }
  state.t = std::max(state.t, t_end);
  return state;
}

DensitySnapshot::DensitySnapshot(const FtlState& state) : x_(state.x) {
  u_.reserve(x_.size() + 1);
  u_.push_back(state.u_left);
  for (std::size_t i = 0; i < x_.size(); ++i) u_.push_back(state.density(i));
}

double DensitySnapshot::operator()(double x) const {
  const auto p = std::lower_bound(x_.begin(), x_.end(), x) - x_.begin();
  return u_[static_cast<std::size_t>(p)];
}

double DensitySnapshot::car_count(double ell) const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    total += (x_[i + 1] - x_[i]) * u_[i + 1];
  }
  return total / ell;
}

DensitySnapshot reconstruct_density(const FtlState& state) {
  return DensitySnapshot(state);
}

void write_density_csv(std::ostream& os, std::string_view tag,
                       const FtlState& state, double pad) {
  const DensitySnapshot snap(state);
  const auto x = snap.breakpoints();
  const auto u = snap.values();
  os << std::setprecision(17);
  os << tag << ',' << state.t << ',' << x.front() - pad << ',' << u[0] << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << tag << ',' << state.t << ',' << x[i] << ',' << u[i] << '\n';
    os << tag << ',' << state.t << ',' << x[i] << ',' << u[i + 1] << '\n';
  }
  os << tag << ',' << state.t << ',' << x.back() + pad << ',' << u.back()
     << '\n';
}

void write_ftl_csv(std::ostream& os, std::string_view tag,
                   const FtlState& state) {
  os << std::setprecision(17);
  for (std::size_t i = 0; i < state.size(); ++i) {
    os << state.t << ',' << i << ',' << state.x[i] << ',' << state.density(i)
       << ',' << tag << '\n';
  }
}

}  // namespace nlt
