#include "nlt/diagnostics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "nlt/errors.hpp"

namespace nlt {
namespace {

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 10, 1e-13);
}

}  // namespace

double bv_seminorm(std::span<const double> v) {
  if (v.empty()) throw InvalidArgument("bv_seminorm: empty sequence");
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) tv += std::abs(v[i + 1] - v[i]);
  return tv;
}

double max_increment(std::span<const double> w, double ghost) {
  if (w.empty()) throw InvalidArgument("max_increment: empty sequence");
  double m = std::abs(ghost - w.back());
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    m = std::max(m, std::abs(w[i + 1] - w[i]));
  }
  return m;
}

double oscillation_growth_bound(double prev, double dt, double sup_dW,
                                double I0, double dz) {
  return prev * (1.0 + 2.0 * dt * sup_dW * I0 / dz);
}

double l1_distance(std::span<const double> a, std::span<const double> b,
                   double dz) {
  if (a.size() != b.size()) throw InvalidArgument("l1_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return dz * s;
}

double kuznetsov_bound(double t, double sup_dW, double bv, double alpha) {
  return 2.0 * std::sqrt(2.0 * t * sup_dW * bv * alpha);
}

double kruzkov_flux(const VelocityModel& model, double w, double c) {
  const double d = model.W(w) - model.W(c);
  if (w > c) return d;
  if (w < c) return -d;
  return 0.0;
}

EntropyCheck check_entropy_step(std::span<const double> before,
                                std::span<const double> after, double c,
                                const WeightRow& row,
                                const VelocityModel& model, double lambda,
                                const Boundary& boundary, double tol) {
  const std::size_t n = before.size();
  if (n == 0 || after.size() != n) {
    throw InvalidArgument("check_entropy_step: mismatched lengths");
  }
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = kruzkov_flux(model, before[i], c);
  const double q_ghost = kruzkov_flux(model, boundary.right_state, c);
  std::vector<double> aq(n);
  average_into(q, row, q_ghost, boundary.mode, aq);

  EntropyCheck result;
  result.worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double right = i + 1 < n ? aq[i + 1] : q_ghost;
    const double lhs = std::abs(after[i] - c);
    const double rhs = std::abs(before[i] - c) + lambda * (right - aq[i]);
    const double margin = lhs - rhs;
    if (margin > result.worst) {
      result.worst = margin;
      result.worst_index = i;
    }
  }
  result.ok = result.worst <= tol;
  return result;
}

double entropy_kernel(const VelocityModel& model, double a, double b,
                      const EtaSecond& eta_second) {
  if (a == b) return 0.0;
  if (!eta_second) {
    // int_a^b (sigma - a) W'(sigma) = (b - a) W(b) - int_a^b W
    if (const auto& prim = model.W_primitive()) {
      return (b - a) * model.W(b) - (prim(b) - prim(a));
    }
    const auto w = [&](double s) { return model.W(s); };
    return (b - a) * model.W(b) - integrate(w, a, b);
  }
  const auto inner = [&](double sigma) {
    return integrate(eta_second, a, sigma) * model.dW(sigma);
  };
  return integrate(inner, a, b);
}

std::vector<double> entropy_dissipation(std::span<const double> w,
                                        double ghost, const Kernel& kernel,
                                        double alpha, double dz,
                                        const VelocityModel& model,
                                        const EtaSecond& eta_second) {
  if (!kernel.differentiable()) {
    throw InvalidArgument("entropy dissipation needs a differentiable kernel; '" +
                          std::string(kernel.name()) + "' is not");
  }
  if (!(alpha > 0.0) || !(dz > 0.0)) {
    throw InvalidArgument("entropy_dissipation: alpha and dz must be positive");
  }
  // H(w_i, .) is constant on each cell, so the kernel integrates exactly:
  // cell j carries Phi_alpha(j dz) - Phi_alpha((j+1) dz) and the ghost region
  // carries the whole remaining tail Phi_alpha((n - i) dz).
  const std::size_t n = w.size();
  std::vector<double> phi(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    phi[j] = kernel.scaled_value(alpha, static_cast<double>(j) * dz);
  }
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 1; i + j < n; ++j) {
      sum += (phi[j] - phi[j + 1]) * entropy_kernel(model, w[i], w[i + j], eta_second);
    }
    sum += phi[n - i] * entropy_kernel(model, w[i], ghost, eta_second);
    d[i] = sum;
  }
  return d;
}

RateFit rate_fit(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw InvalidArgument("rate_fit needs at least 2 samples");
  double sx = 0.0, sy = 0.0;
  for (const auto& [a, e] : samples) {
    if (!(a > 0.0) || !(e > 0.0)) {
      throw InvalidArgument("rate_fit needs positive alpha and error");
    }
    sx += std::log(a);
    sy += std::log(e);
  }
  const double m = static_cast<double>(samples.size());
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [a, e] : samples) {
    const double dx = std::log(a) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e) - my);
  }
  if (sxx == 0.0) throw InvalidArgument("rate_fit needs distinct alpha values");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.samples = std::move(samples);
  return fit;
}

double exp_identity_residual(std::span<const double> w,
                             std::span<const double> y, double alpha,
                             double dz) {
  if (w.size() != y.size()) {
    throw InvalidArgument("exp_identity_residual: size mismatch");
  }
  double r = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    r = std::max(r, std::abs(-alpha * (w[i + 1] - w[i]) / dz + w[i] - y[i]));
  }
  return r;
}

double filtered_gap(std::span<const double> y, std::span<const double> w,
                    double dz) {
  return l1_distance(y, w, dz);
}

void write_campaign_csv(std::ostream& os,
                        std::span<const CampaignResult> results) {
  os << "check,trials,violations,worst_margin,first_failure_seed\n"
     << std::setprecision(17);
  for (const auto& r : results) {
    os << r.check << ',' << r.trials << ',' << r.violations << ','
       << r.worst_margin << ',' << r.first_failure_seed << '\n';
  }
}

}  // namespace nlt
