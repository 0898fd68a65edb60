#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "nlt/scheme.hpp"
#include "nlt/velocity.hpp"

namespace nlt {

class DensityProfile;

/// Uniform finite-volume grid on [x_lo, x_hi] with constant states outside.
struct EulerianGrid {
  double dx = 1.0;
  double x_lo = 0.0;
  double x_hi = 1.0;
  double rho_left = 0.0;
  double rho_right = 0.0;

  void validate() const;
  std::size_t n_cells() const;
  double edge(std::size_t i) const { return x_lo + static_cast<double>(i) * dx; }
  double center(std::size_t i) const { return edge(i) + 0.5 * dx; }
  /// Left cell edges, the abscissae of the piecewise-constant solution.
  std::vector<double> edges() const;
};

/// Engquist-Osher flux for f(rho) = rho V(rho) on [0, 1]. The flux must be
/// unimodal; the maximizer rho* is located once at construction.
class EngquistOsherFlux {
 public:
  explicit EngquistOsherFlux(VelocityModel model);

  const VelocityModel& model() const noexcept { return model_; }
  double rho_star() const noexcept { return rho_star_; }
  double f_star() const noexcept { return f_star_; }
  /// max |f'| over [0, 1].
  double max_wave_speed() const noexcept { return max_speed_; }

  /// F(a, b) = f(min(a, rho*)) + f(max(b, rho*)) - f(rho*).
  double operator()(double a, double b) const;
  /// The increasing and decreasing parts: F(a, b) = plus(a) + minus(b).
  double plus(double a) const;
  double minus(double b) const;

 private:
  VelocityModel model_;
  double rho_star_;
  double f_star_;
  double max_speed_;
};

double eo_flux(double a, double b, const VelocityModel& model);

/// Conservative update with constant-extension ghost cells on both sides.
std::vector<double> eo_step(std::span<const double> rho,
                            const EngquistOsherFlux& flux, double lambda,
                            CflCheck check = CflCheck::Enforce);

/// Exact cell averages of a piecewise-constant profile.
std::vector<double> cell_averages(const DensityProfile& rho0,
                                  const EulerianGrid& grid);

struct EoSolution {
  double t = 0.0;
  std::size_t steps = 0;
  std::vector<double> rho;
};

/// Runs eo_step from rho0 to t_end with dt = safety dx / max|f'|, the last
/// step shortened to land on t_end.
EoSolution solve_eo(std::vector<double> rho0, const EulerianGrid& grid,
                    const EngquistOsherFlux& flux, double t_end,
                    double safety = 0.9);

/// First-order upwind step for w_t = W(w)_z: step_w with the row [1].
std::vector<double> lagrangian_upwind_step(std::span<const double> w,
                                           const VelocityModel& model,
                                           double lambda, double w_right,
                                           CflCheck check = CflCheck::Enforce);

/// Header t,x_i,rho_i; x_i is the cell center.
void write_eo_csv(std::ostream& os, const EulerianGrid& grid,
                  const EoSolution& solution);

}  // namespace nlt
