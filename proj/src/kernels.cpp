#include "nlt/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlt/errors.hpp"

namespace nlt {
namespace {

constexpr double kPi = std::numbers::pi;

void require_nonnegative(double z) {
  if (!(z >= 0.0)) {
    throw InvalidArgument("kernel argument must be nonnegative, got " +
                          std::to_string(z));
  }
}

void require_positive_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("filter size alpha must be positive, got " +
                          std::to_string(alpha));
  }
}

// (2/pi)(atan t - t/(1+t^2)) for small t = 1/z, summed as a series to avoid
// cancellation: sum_k (-1)^{k+1} 2k/(2k+1) t^{2k+1}.
double rat2_tail_series(double t) {
  const double t2 = t * t;
  double term = t * t2;
  double sum = 0.0;
  for (int k = 1; k < 60; ++k) {
    const double c = 2.0 * k / (2.0 * k + 1.0);
    const double add = (k % 2 == 1 ? c : -c) * term;
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    term *= t2;
  }
  return 2.0 / kPi * sum;
}

}  // namespace

Kernel Kernel::from_name(std::string_view name) {
  if (name == "exp") return Kernel(KernelFamily::Exponential);
  if (name == "tri") return Kernel(KernelFamily::Triangular);
  if (name == "box") return Kernel(KernelFamily::Box);
  if (name == "rat2") return Kernel(KernelFamily::RationalSquared);
  if (name == "cauchy") return Kernel(KernelFamily::Cauchy);
  throw InvalidArgument("unknown kernel '" + std::string(name) +
                        "' (expected exp, tri, box, rat2 or cauchy)");
}

std::span<const KernelFamily> Kernel::all_families() {
  static constexpr std::array kAll{
      KernelFamily::Exponential, KernelFamily::Triangular, KernelFamily::Box,
      KernelFamily::RationalSquared, KernelFamily::Cauchy};
  return kAll;
}

std::string_view Kernel::name() const noexcept {
  switch (family_) {
    case KernelFamily::Exponential: return "exp";
    case KernelFamily::Triangular: return "tri";
    case KernelFamily::Box: return "box";
    case KernelFamily::RationalSquared: return "rat2";
    case KernelFamily::Cauchy: return "cauchy";
  }
  return "?";
}

bool Kernel::theory_covered() const noexcept {
  return family_ != KernelFamily::Box && family_ != KernelFamily::Cauchy;
}

double Kernel::value(double z) const {
  require_nonnegative(z);
  switch (family_) {
    case KernelFamily::Exponential: return std::exp(-z);
    case KernelFamily::Triangular: return 2.0 * std::max(1.0 - z, 0.0);
    // value(1) = 0: support is [0, 1).
    case KernelFamily::Box: return z < 1.0 ? 1.0 : 0.0;
    case KernelFamily::RationalSquared: {
      const double s = 1.0 + z * z;
      return 4.0 / kPi / (s * s);
    }
    case KernelFamily::Cauchy: return 2.0 / kPi / (1.0 + z * z);
  }
  return 0.0;
}

double Kernel::cdf(double z) const {
  require_nonnegative(z);
  switch (family_) {
    case KernelFamily::Exponential: return -std::expm1(-z);
    case KernelFamily::Triangular: return z < 1.0 ? z * (2.0 - z) : 1.0;
    case KernelFamily::Box: return std::min(z, 1.0);
    case KernelFamily::RationalSquared:
      if (std::isinf(z)) return 1.0;
      if (z > 2.0) return 1.0 - rat2_tail_series(1.0 / z);
      return 2.0 / kPi * (std::atan(z) + z / (1.0 + z * z));
    case KernelFamily::Cauchy: return 2.0 / kPi * std::atan(z);
  }
  return 0.0;
}

double Kernel::survival(double z) const {
  require_nonnegative(z);
  switch (family_) {
    case KernelFamily::Exponential: return std::exp(-z);
    case KernelFamily::Triangular: {
      const double r = std::max(1.0 - z, 0.0);
      return r * r;
    }
    case KernelFamily::Box: return std::max(1.0 - z, 0.0);
    case KernelFamily::RationalSquared:
      if (std::isinf(z)) return 0.0;
      if (z > 2.0) return rat2_tail_series(1.0 / z);
      return 1.0 - cdf(z);
    case KernelFamily::Cauchy:
      if (z == 0.0) return 1.0;
      return 2.0 / kPi * std::atan(1.0 / z);
  }
  return 0.0;
}

double Kernel::mass_between(double lo, double hi) const {
  require_nonnegative(lo);
  if (!(hi >= lo)) {
    throw InvalidArgument("mass_between requires lo <= hi");
  }
  // Differences of the cdf are accurate near the origin, differences of the
  // survival function in the tail.
  const double c_hi = cdf(hi);
  if (c_hi <= 0.5) return c_hi - cdf(lo);
  return std::max(survival(lo) - survival(hi), 0.0);
}

double Kernel::derivative(double z) const {
  require_nonnegative(z);
  switch (family_) {
    case KernelFamily::Exponential: return -std::exp(-z);
    case KernelFamily::Triangular: return z < 1.0 ? -2.0 : 0.0;
    case KernelFamily::Box:
      throw InvalidArgument("the box kernel has no classical derivative");
    case KernelFamily::RationalSquared: {
      const double s = 1.0 + z * z;
      return -16.0 / kPi * z / (s * s * s);
    }
    case KernelFamily::Cauchy: {
      const double s = 1.0 + z * z;
      return -4.0 / kPi * z / (s * s);
    }
  }
  return 0.0;
}

double Kernel::scaled_value(double alpha, double z) const {
  require_positive_alpha(alpha);
  return value(z / alpha) / alpha;
}

double Kernel::scaled_cdf(double alpha, double z) const {
  require_positive_alpha(alpha);
  return cdf(z / alpha);
}

WeightRow::WeightRow(std::vector<double> weights, double alpha, double dz)
    : weights_(std::move(weights)), alpha_(alpha), dz_(dz) {
  if (weights_.empty()) throw InvalidArgument("weight row must be nonempty");
  if (!(dz > 0.0)) throw InvalidArgument("cell width dz must be positive");
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvalidArgument("weights must be nonnegative");
  }
  suffix_.assign(weights_.size(), 0.0);
  double acc = 0.0;
  for (std::size_t j = weights_.size(); j-- > 0;) {
    acc += weights_[j];
    suffix_[j] = acc;
  }
}

WeightRow WeightRow::identity(double dz) { return WeightRow({1.0}, 0.0, dz); }

WeightRow lagrangian_weights(const Kernel& kernel, double alpha, double dz,
                             const WeightOptions& options) {
  require_positive_alpha(alpha);
  if (!(dz > 0.0)) throw InvalidArgument("cell width dz must be positive");
  const double tol = options.tail_mass_tol;
  if (!(tol > 0.0 && tol < 1.0)) {
    throw InvalidArgument("tail_mass_tol must lie in (0, 1)");
  }
  const double ratio = dz / alpha;
  const std::size_t cap =
      options.window > 0 ? options.window : options.max_entries;

  // K = smallest index with survival(K ratio) <= tol; the row keeps
  // entries 0..K-1 and the last of them takes the residual.
  std::vector<double> weights;
  std::size_t k = 1;
  for (;; ++k) {
    if (kernel.survival(static_cast<double>(k) * ratio) <= tol) break;
    if (k >= cap) {
      if (options.window > 0) break;
      throw TruncationError(
          "kernel '" + std::string(kernel.name()) +
          "' needs more than " + std::to_string(cap) +
          " weights to reach tail mass " + std::to_string(tol));
    }
  }
  weights.reserve(k);
  double head = 0.0;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    double w = kernel.mass_between(static_cast<double>(j) * ratio,
                                   static_cast<double>(j + 1) * ratio);
    // The exact masses are non-increasing; keep rounding from breaking that.
    if (!weights.empty()) w = std::min(w, weights.back());
    weights.push_back(w);
    head += w;
  }
  weights.push_back(std::max(1.0 - head, 0.0));
  return WeightRow(std::move(weights), alpha, dz);
}

std::vector<double> eulerian_weights(const Kernel& kernel, double alpha,
                                     std::span<const double> positions,
                                     std::size_t i) {
  require_positive_alpha(alpha);
  if (positions.size() < 2) {
    throw InvalidArgument("eulerian_weights needs at least two positions");
  }
  const std::size_t n = positions.size() - 1;
  if (i >= n) throw InvalidArgument("eulerian_weights: index out of range");
  for (std::size_t j = 0; j + 1 < positions.size(); ++j) {
    if (!(positions[j + 1] > positions[j])) {
      throw InvalidArgument("positions must be strictly increasing");
    }
  }
  std::vector<double> weights;
  weights.reserve(n - i);
  const double xi = positions[i];
  double head = 0.0;
  for (std::size_t j = i; j + 1 < n; ++j) {
    const double w = kernel.mass_between((positions[j] - xi) / alpha,
                                         (positions[j + 1] - xi) / alpha);
    weights.push_back(w);
    head += w;
  }
  weights.push_back(std::max(1.0 - head, 0.0));
  return weights;
}

}  // namespace nlt
