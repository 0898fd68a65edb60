#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "nlt/kernels.hpp"
#include "nlt/velocity.hpp"

namespace nlt {

/// Piecewise-constant initial density on the real line. values[k] holds on
/// [breakpoints[k-1], breakpoints[k]); values.front() and values.back()
/// extend to -inf and +inf.
class DensityProfile {
 public:
  DensityProfile(std::vector<double> breakpoints, std::vector<double> values);

  /// `inside` on [lo, hi), `outside` elsewhere.
  static DensityProfile box(double lo, double hi, double inside,
                            double outside);

  double operator()(double x) const;
  /// Integral of the density over [from, to], from <= to.
  double mass(double from, double to) const;
  /// Smallest x >= from with mass(from, x) = m (exact piecewise-linear
  /// inversion).
  double position_of_mass(double from, double m) const;

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }
  /// Total variation of 1/rho.
  double spacing_variation() const;

 private:
  std::size_t piece_index(double x) const;

  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Car positions x_0 < ... < x_{N-1}; the leader is followed by an infinite
/// gap and moves with the frozen density u_last.
struct FtlState {
  double t = 0.0;
  double ell = 1.0;
  std::vector<double> x;
  double u_left = 1.0;
  double u_last = 1.0;

  std::size_t size() const noexcept { return x.size(); }
  double gap(std::size_t i) const { return x[i + 1] - x[i]; }
  /// u_i = ell / gap_i (capped at 1), u_last for the leader.
  double density(std::size_t i) const;
  /// 1 / density(i).
  double spacing(std::size_t i) const;
  /// Mean car position.
  double centroid() const;
};

/// Car positions from the cumulative mass of the profile: x_0 = a and
/// mass(x_k, x_{k+1}) = ell, continued until the first position beyond b.
struct InitialPositions {
  std::vector<double> x;  // N + 1 entries; the last lies beyond b
  double u_left = 1.0;    // rho0(a - 1)
  double u_last = 1.0;    // rho0(x_N)
};

InitialPositions discretize_positions(const DensityProfile& rho0, double ell,
                                      double a, double b);
FtlState discretize_density(const DensityProfile& rho0, double ell, double a,
                            double b);

/// Initial spacings y_i = gap_i / ell for the N cars, the downstream spacing
/// 1/u_last and the first car's position.
struct LagrangianData {
  std::vector<double> y0;
  double y_left = 1.0;
  double y_right = 1.0;
  double x_first = 0.0;
};

LagrangianData lagrangian_initial_data(const DensityProfile& rho0, double ell,
                                       double a, double b);

enum class FtlModel { Local, NonlocalEulerian, NonlocalLagrangian };

std::string_view model_tag(FtlModel model);

/// Parameters shared by the three models.
struct FtlSetup {
  VelocityModel velocity;
  Kernel kernel;
  double alpha;
  WeightRow lagrangian_row;

  /// Builds the position-independent Lagrangian row for dz = ell.
  static FtlSetup make(VelocityModel velocity, const Kernel& kernel,
                       double alpha, double ell, std::size_t n_cars);
};

/// V(u_i); the leader moves at V(u_last).
double speed_local(const FtlState& state, std::size_t i,
                   const VelocityModel& velocity);
/// V of the kernel-weighted arithmetic mean of downstream densities, with
/// weights recomputed from the current positions.
double speed_nonlocal_eulerian(const FtlState& state, std::size_t i,
                               const Kernel& kernel, double alpha,
                               const VelocityModel& velocity);
/// V of the weighted harmonic mean of downstream densities, i.e. of the
/// reciprocal of the Lagrangian average of the spacings.
double speed_nonlocal_lagrangian(const FtlState& state, std::size_t i,
                                 const WeightRow& row,
                                 const VelocityModel& velocity);

/// All speeds at once.
std::vector<double> speeds(const FtlState& state, FtlModel model,
                           const FtlSetup& setup);

/// Weighted harmonic and arithmetic means of densities with identical weights.
double harmonic_mean_density(std::span<const double> weights,
                             std::span<const double> densities);
double arithmetic_mean_density(std::span<const double> weights,
                               std::span<const double> densities);

/// Explicit Euler step. Throws OrderingViolation if any gap drops below ell.
FtlState euler_step(const FtlState& state, FtlModel model,
                    const FtlSetup& setup, double dt);

/// Integrates to t_end with steps of dt (last step shortened).
FtlState integrate(FtlState state, FtlModel model, const FtlSetup& setup,
                   double t_end, double dt);

/// Piecewise-constant density: u_left for x <= x_0, u_i on (x_i, x_{i+1}],
/// u_last beyond the leader.
class DensitySnapshot {
 public:
  explicit DensitySnapshot(const FtlState& state);

  double operator()(double x) const;
  std::span<const double> breakpoints() const noexcept { return x_; }
  /// values()[0] is u_left, values()[i + 1] is the density right of x_i.
  std::span<const double> values() const noexcept { return u_; }
  /// Integral over [x_0, x_{N-1}] divided by ell.
  double car_count(double ell) const;

 private:
  std::vector<double> x_;
  std::vector<double> u_;
};

DensitySnapshot reconstruct_density(const FtlState& state);

/// Step-function samples (x, u) suitable for plotting, with a model tag
/// column: header model,t,x,u.
void write_density_csv(std::ostream& os, std::string_view tag,
                       const FtlState& state, double pad);

/// Header t,i,x_i,u_i,model.
void write_ftl_csv(std::ostream& os, std::string_view tag,
                   const FtlState& state);

}  // namespace nlt
