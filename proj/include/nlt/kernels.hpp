#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace nlt {

enum class KernelFamily { Exponential, Triangular, Box, RationalSquared, Cauchy };

/// Non-increasing averaging kernel on [0, inf) with unit mass.
///
/// Families and their unscaled densities:
///   exp     e^{-z}
///   tri     2 max(1 - z, 0)
///   box     indicator of [0, 1)
///   rat2    (4/pi) (1 + z^2)^{-2}
///   cauchy  (2/pi) (1 + z^2)^{-1}
///
/// Box (discontinuous) and Cauchy (infinite first moment) fall outside the
/// convergence theory; `theory_covered()` reports this.
class Kernel {
 public:
  explicit Kernel(KernelFamily family) : family_(family) {}

  /// Parses "exp", "tri", "box", "rat2" or "cauchy".
  static Kernel from_name(std::string_view name);
  static std::span<const KernelFamily> all_families();

  KernelFamily family() const noexcept { return family_; }
  std::string_view name() const noexcept;
  bool theory_covered() const noexcept;
  bool differentiable() const noexcept { return family_ != KernelFamily::Box; }

  double value(double z) const;
  double cdf(double z) const;
  /// 1 - cdf(z), evaluated without cancellation in the tail.
  double survival(double z) const;
  /// Mass on [lo, hi] with 0 <= lo <= hi (hi may be +inf).
  double mass_between(double lo, double hi) const;
  /// Classical derivative; throws for the box kernel.
  double derivative(double z) const;

  /// (1/alpha) value(z/alpha).
  double scaled_value(double alpha, double z) const;
  double scaled_cdf(double alpha, double z) const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  KernelFamily family_;
};

/// One row of the Toeplitz weight matrix for Lagrangian averaging:
/// I_j = mass of the scaled kernel on [j dz, (j+1) dz). The final entry
/// absorbs the remaining tail so the row has unit mass.
class WeightRow {
 public:
  WeightRow(std::vector<double> weights, double alpha, double dz);

  /// The collapsed row [1] (alpha -> 0).
  static WeightRow identity(double dz = 1.0);

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t truncation_index() const noexcept { return weights_.size() - 1; }
  double operator[](std::size_t j) const { return weights_[j]; }
  double alpha() const noexcept { return alpha_; }
  double dz() const noexcept { return dz_; }

  /// Sum of I_j for j >= k (zero when k >= size()).
  double tail_from(std::size_t k) const noexcept {
    return k < suffix_.size() ? suffix_[k] : 0.0;
  }

 private:
  std::vector<double> weights_;
  std::vector<double> suffix_;
  double alpha_;
  double dz_;
};

struct WeightOptions {
  double tail_mass_tol = 1e-12;
  /// Hard cap on the row length when no window is given.
  std::size_t max_entries = std::size_t{1} << 22;
  /// When nonzero, the row stops after `window` entries even if the tail is
  /// still heavier than the tolerance. On a grid of N cells with constant
  /// states beyond it, window = N + 1 loses nothing.
  std::size_t window = 0;
};

WeightRow lagrangian_weights(const Kernel& kernel, double alpha, double dz,
                             const WeightOptions& options = {});

/// Weights of the car at positions[i] against the downstream gaps
/// [x_j, x_{j+1}), j = i..N-1, for positions x_0..x_N. x_N is treated as
/// +inf, so the final weight absorbs the tail. Returns N - i entries.
std::vector<double> eulerian_weights(const Kernel& kernel, double alpha,
                                     std::span<const double> positions,
                                     std::size_t i);

}  // namespace nlt
