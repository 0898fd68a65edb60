#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlt/kernels.hpp"
#include "nlt/scheme.hpp"
#include "nlt/velocity.hpp"

namespace nlt {

/// sum_i |v_{i+1} - v_i|.
double bv_seminorm(std::span<const double> v);

/// Largest |w_{i+1} - w_i|, counting the jump into the right ghost state.
double max_increment(std::span<const double> w, double ghost);

/// Per-step growth bound on max_increment:
/// prev (1 + 2 dt sup W' I_0 / dz).
double oscillation_growth_bound(double prev, double dt, double sup_dW,
                                double I0, double dz);

/// dz sum_i |a_i - b_i|.
double l1_distance(std::span<const double> a, std::span<const double> b,
                   double dz);

/// 2 sqrt(2 T |W'|_inf BV(y0) alpha).
double kuznetsov_bound(double t, double sup_dW, double bv, double alpha);

struct EntropyCheck {
  bool ok = true;
  /// max_i (lhs_i - rhs_i); negative when every inequality is strict.
  double worst = 0.0;
  std::size_t worst_index = 0;
};

/// Q_c(w) = sgn(w - c) (W(w) - W(c)).
double kruzkov_flux(const VelocityModel& model, double w, double c);

/// Checks |w'_i - c| <= |w_i - c| + lambda (Aq_{i+1} - Aq_i), where Aq is the
/// kernel average of Q_c(w) (Aq beyond the window is Q_c(ghost)).
EntropyCheck check_entropy_step(std::span<const double> before,
                                std::span<const double> after, double c,
                                const WeightRow& row,
                                const VelocityModel& model, double lambda,
                                const Boundary& boundary = {},
                                double tol = 1e-12);

/// H(a, b) = int_a^b int_a^sigma eta''(mu) dmu W'(sigma) dsigma.
/// An empty eta_second means eta(w) = w^2 / 2.
using EtaSecond = std::function<double(double)>;
double entropy_kernel(const VelocityModel& model, double a, double b,
                      const EtaSecond& eta_second = {});

/// Per-cell dissipation D_i = int (-Phi_alpha')(zeta) H(w_i, w(z_i + zeta))
/// dzeta for piecewise-constant w, integrated exactly cell by cell. w beyond
/// the grid reads `ghost`.
std::vector<double> entropy_dissipation(std::span<const double> w,
                                        double ghost, const Kernel& kernel,
                                        double alpha, double dz,
                                        const VelocityModel& model,
                                        const EtaSecond& eta_second = {});

struct RateFit {
  std::vector<std::pair<double, double>> samples;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit of log(error) against log(alpha).
RateFit rate_fit(std::vector<std::pair<double, double>> samples);

/// max_i |-alpha (w_{i+1} - w_i) / dz + w_i - y_i| over interior cells.
double exp_identity_residual(std::span<const double> w,
                             std::span<const double> y, double alpha,
                             double dz);

/// dz sum_i |y_i - w_i|.
double filtered_gap(std::span<const double> y, std::span<const double> w,
                    double dz);

struct CampaignResult {
  std::string check;
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// Largest amount by which the inequality failed; negative if all held.
  double worst_margin = 0.0;
  /// Trial seed of the first failure, for reproduction (0 if none failed).
  std::uint64_t first_failure_seed = 0;
};

/// Header check,trials,violations,worst_margin,first_failure_seed.
void write_campaign_csv(std::ostream& os,
                        std::span<const CampaignResult> results);

}  // namespace nlt
