#include "nlt/velocity.hpp"

#include <cmath>
#include <string>

#include "nlt/errors.hpp"

namespace nlt {

VelocityModel::VelocityModel(std::string name,
                             std::function<double(double)> speed,
                             std::function<double(double)> speed_derivative,
                             double lipschitz)
    : name_(std::move(name)),
      speed_(std::move(speed)),
      speed_derivative_(std::move(speed_derivative)),
      lipschitz_(lipschitz) {
  if (!speed_ || !speed_derivative_) {
    throw InvalidArgument("velocity model needs V and V'");
  }
  if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_)) {
    throw InvalidArgument("velocity model Lipschitz constant must be finite");
  }
  if (std::abs(speed_(1.0)) > 1e-14) {
    throw InvalidArgument("velocity model must satisfy V(1) = 0");
  }
}

VelocityModel VelocityModel::linear() {
  return VelocityModel(
      "linear", [](double u) { return 1.0 - u; },
      [](double) { return -1.0; }, 1.0)
      .with_W_primitive([](double w) { return w - std::log(w); });
}

VelocityModel VelocityModel::quadratic() {
  return VelocityModel(
      "quadratic", [](double u) { return 1.0 - u * u; },
      [](double u) { return -2.0 * u; }, 2.0)
      .with_W_primitive([](double w) { return w + 1.0 / w; });
}

VelocityModel VelocityModel::from_name(std::string_view name) {
  if (name == "linear") return linear();
  if (name == "quadratic") return quadratic();
  throw InvalidArgument("unknown velocity model '" + std::string(name) +
                        "' (expected linear or quadratic)");
}

double VelocityModel::sup_dW(double w_min, double w_max) const {
  if (!(w_min >= 1.0 - 1e-9) || !(w_max >= w_min)) {
    throw InvalidArgument("sup_dW requires 1 <= w_min <= w_max, got [" +
                          std::to_string(w_min) + ", " +
                          std::to_string(w_max) + "]");
  }
  return lipschitz_ / (w_min * w_min);
}

}  // namespace nlt
