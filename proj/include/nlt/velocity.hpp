#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace nlt {

/// Speed law V(u) on [0, 1] together with the Lagrangian flux
/// W(w) = V(1/w) for spacings w >= 1.
///
/// V must be non-increasing and Lipschitz with V(1) = 0. The CFL bound uses
/// sup_{w >= w_min} W'(w) <= lipschitz / w_min^2, which is exact for the
/// linear law.
class VelocityModel {
 public:
  VelocityModel(std::string name, std::function<double(double)> speed,
                std::function<double(double)> speed_derivative,
                double lipschitz);

  /// V(u) = 1 - u.
  static VelocityModel linear();
  /// V(u) = 1 - u^2.
  static VelocityModel quadratic();
  /// Parses "linear" or "quadratic".
  static VelocityModel from_name(std::string_view name);

  const std::string& name() const noexcept { return name_; }
  double lipschitz() const noexcept { return lipschitz_; }

  double V(double u) const { return speed_(u); }
  double dV(double u) const { return speed_derivative_(u); }
  double W(double w) const { return speed_(1.0 / w); }
  double dW(double w) const { return -speed_derivative_(1.0 / w) / (w * w); }

  /// Upper bound of W' over [w_min, w_max] (requires 1 <= w_min <= w_max).
  double sup_dW(double w_min, double w_max) const;

  /// Antiderivative of W, when known in closed form (the built-in laws).
  const std::function<double(double)>& W_primitive() const noexcept {
    return W_primitive_;
  }
  VelocityModel& with_W_primitive(std::function<double(double)> primitive) {
    W_primitive_ = std::move(primitive);
    return *this;
  }

  /// Eulerian flux f(rho) = rho V(rho) and its derivative.
  double flux(double rho) const { return rho * speed_(rho); }
  double dflux(double rho) const {
    return speed_(rho) + rho * speed_derivative_(rho);
  }

 private:
  std::string name_;
  std::function<double(double)> speed_;
  std::function<double(double)> speed_derivative_;
  double lipschitz_;
  std::function<double(double)> W_primitive_;
};

}  // namespace nlt
