#include "nlt/reference.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "nlt/errors.hpp"
#include "nlt/ftl.hpp"

namespace nlt {
namespace {

double golden_section_max(const VelocityModel& model) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = model.flux(c);
  double fd = model.flux(d);
  while (hi - lo > 1e-12) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = model.flux(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = model.flux(d);
    }
  }
  // Comparisons of f stall near the flat maximum; finish on the sign of f'.
  double a = std::max(0.0, 0.5 * (lo + hi) - 1e-6);
  double b = std::min(1.0, 0.5 * (lo + hi) + 1e-6);
  if (model.dflux(a) > 0.0 && model.dflux(b) < 0.0) {
    for (int k = 0; k < 100 && b - a > 0.0; ++k) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      (model.dflux(m) > 0.0 ? a : b) = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void EulerianGrid::validate() const {
  if (!(dx > 0.0)) throw InvalidArgument("grid spacing dx must be positive");
  if (!(x_hi > x_lo)) throw InvalidArgument("grid needs x_lo < x_hi");
  for (double r : {rho_left, rho_right}) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw InvalidArgument("boundary densities must lie in [0, 1]");
    }
  }
}

std::size_t EulerianGrid::n_cells() const {
  return static_cast<std::size_t>(std::ceil((x_hi - x_lo) / dx - 1e-9));
}

std::vector<double> EulerianGrid::edges() const {
  std::vector<double> e(n_cells());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = edge(i);
  return e;
}

EngquistOsherFlux::EngquistOsherFlux(VelocityModel model)
    : model_(std::move(model)) {
  // The sign of f' may change at most once on [0, 1].
  constexpr int kScan = 1000;
  int sign_changes = 0;
  int last_sign = 0;
  double max_speed = 0.0;
  for (int k = 0; k <= kScan; ++k) {
    const double df = model_.dflux(static_cast<double>(k) / kScan);
    max_speed = std::max(max_speed, std::abs(df));
    const int s = df > 0.0 ? 1 : (df < 0.0 ? -1 : 0);
    if (s != 0) {
      if (last_sign != 0 && s != last_sign) ++sign_changes;
      last_sign = s;
    }
  }
  if (sign_changes > 1) {
    throw InvalidArgument("flux of velocity model '" + model_.name() +
                          "' is not unimodal");
  }
  rho_star_ = golden_section_max(model_);
  f_star_ = model_.flux(rho_star_);
  max_speed_ = max_speed;
}

double EngquistOsherFlux::plus(double a) const {
  return model_.flux(std::min(a, rho_star_));
}

double EngquistOsherFlux::minus(double b) const {
  return model_.flux(std::max(b, rho_star_)) - f_star_;
}

double EngquistOsherFlux::operator()(double a, double b) const {
  return plus(a) + minus(b);
}

double eo_flux(double a, double b, const VelocityModel& model) {
  return EngquistOsherFlux(model)(a, b);
}

std::vector<double> eo_step(std::span<const double> rho,
                            const EngquistOsherFlux& flux, double lambda,
                            CflCheck check) {
  const std::size_t n = rho.size();
  if (n == 0) throw InvalidArgument("eo_step: empty state");
  if (check == CflCheck::Enforce) {
    const double cfl = lambda * flux.max_wave_speed();
    if (cfl > 1.0 + 1e-12) throw CflViolation(cfl, 1.0);
  }
  // F_{i+1/2} = plus(rho_i) + minus(rho_{i+1}) for i = -1..n-1.
  std::vector<double> fp(n);
  std::vector<double> fm(n);
  for (std::size_t i = 0; i < n; ++i) {
    fp[i] = flux.plus(rho[i]);
    fm[i] = flux.minus(rho[i]);
  }
  std::vector<double> out(n);
  double left_face = fp[0] + fm[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double right_face =
        i + 1 < n ? fp[i] + fm[i + 1] : fp[i] + fm[i];
    out[i] = rho[i] - lambda * (right_face - left_face);
    left_face = right_face;
  }
  return out;
}

std::vector<double> cell_averages(const DensityProfile& rho0,
                                  const EulerianGrid& grid) {
  grid.validate();
  std::vector<double> rho(grid.n_cells());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho[i] = rho0.mass(grid.edge(i), grid.edge(i + 1)) / grid.dx;
  }
  return rho;
}

EoSolution solve_eo(std::vector<double> rho0, const EulerianGrid& grid,
                    const EngquistOsherFlux& flux, double t_end,
                    double safety) {
  grid.validate();
  if (rho0.size() != grid.n_cells()) {
    throw InvalidArgument("solve_eo: initial data does not match the grid");
  }
  if (!(safety > 0.0 && safety <= 1.0)) {
    throw InvalidArgument("solve_eo: safety must lie in (0, 1]");
  }
  const double speed = flux.max_wave_speed();
  const double dt_cfl = speed > 0.0 ? safety * grid.dx / speed : grid.dx;
  EoSolution sol{0.0, 0, std::move(rho0)};
  while (sol.t < t_end) {
    double dt = dt_cfl;
    bool last = false;
    if (sol.t + dt >= t_end) {
      dt = t_end - sol.t;
      last = true;
    }
    sol.rho = eo_step(sol.rho, flux, dt / grid.dx);
    sol.t = last ? t_end : sol.t + dt;
    ++sol.steps;
  }
  return sol;
}

std::vector<double> lagrangian_upwind_step(std::span<const double> w,
                                           const VelocityModel& model,
                                           double lambda, double w_right,
                                           CflCheck check) {
  return step_w(w, WeightRow::identity(), model, lambda,
                Boundary{w_right, BoundaryMode::Ghost}, check);
}

void write_eo_csv(std::ostream& os, const EulerianGrid& grid,
                  const EoSolution& solution) {
  os << "t,x_i,rho_i\n" << std::setprecision(17);
  for (std::size_t i = 0; i < solution.rho.size(); ++i) {
    os << solution.t << ',' << grid.center(i) << ',' << solution.rho[i]
       << '\n';
  }
}

}  // namespace nlt
