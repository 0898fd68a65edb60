#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "nlt/diagnostics.hpp"
#include "nlt/errors.hpp"
#include "nlt/ftl.hpp"

using namespace nlt;

namespace {
const VelocityModel kLinear = VelocityModel::linear();
const Kernel kExp(KernelFamily::Exponential);

// int_a^b int_a^sigma eta''(mu) dmu W'(sigma) dsigma by composite Simpson in
// both variables.
template <class F>
double double_simpson(F eta2, const VelocityModel& m, double a, double b) {
  auto simpson = [](auto f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = f(lo) + f(hi);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(lo + k * h);
    return s * h / 3.0;
  };
  return simpson([&](double sigma) { return simpson(eta2, a, sigma, 200) * m.dW(sigma); },
                 a, b, 400);
}

std::vector<double> smooth_profile(double dz, double length) {
  const auto n = static_cast<std::size_t>(std::lround(length / dz));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (static_cast<double>(i) + 0.5) * dz;
    y[i] = z < 1.0 ? 3.0 + std::sin(2.0 * M_PI * z) : 3.0;
  }
  return y;
}
}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("bv seminorm") {
  CHECK(bv_seminorm(std::vector<double>{2.0, 2.0, 2.0}) == 0.0);
  CHECK(bv_seminorm(std::vector<double>{1.0, 3.0, 2.0}) == 3.0);
  const LagrangianData d = lagrangian_initial_data(
      DensityProfile::box(-0.75, 0.75, 1.0, 0.05), 1.0 / 500, -1.5, 1.5);
  CHECK(bv_seminorm(d.y0) == doctest::Approx(38.0).epsilon(1e-12));
  CHECK_THROWS_AS(bv_seminorm(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("increments and bounds") {
  CHECK(max_increment(std::vector<double>{1.0, 1.5, 1.2}, 3.0) == 1.8);
  CHECK(oscillation_growth_bound(2.0, 0.1, 1.0, 0.5, 0.1) == doctest::Approx(4.0));
  CHECK(kuznetsov_bound(1.2, 1.0, 38.0, 0.5) == doctest::Approx(2.0 * std::sqrt(45.6)));
  CHECK(l1_distance(std::vector<double>{1, 2}, std::vector<double>{2, 0}, 0.5) == 1.5);
}

TEST_CASE("entropy step check") {
  const WeightRow row({0.6, 0.3, 0.1}, 1.0, 1.0);
  SUBCASE("constant state") {
    const std::vector<double> w(8, 3.0);
    const auto r = check_entropy_step(w, w, 2.0, row, kLinear, 0.5, {3.0});
    CHECK(r.ok);
    CHECK(r.worst == doctest::Approx(0.0));
  }
  SUBCASE("c below the range is an identity") {
    const std::vector<double> w{2.0, 3.0, 5.0, 4.0, 2.5};
    const auto next = step_w(w, row, kLinear, 0.9, {3.0});
    const auto r = check_entropy_step(w, next, 1.5, row, kLinear, 0.9, {3.0});
    CHECK(r.ok);
    CHECK(std::abs(r.worst) <= 1e-12);
  }
  SUBCASE("a tampered update is caught") {
    const std::vector<double> w{2.0, 3.0, 5.0, 4.0, 2.5};
    auto next = step_w(w, row, kLinear, 0.9, {3.0});
    next[2] += 0.1;
    const auto r = check_entropy_step(w, next, 4.5, row, kLinear, 0.9, {3.0});
    CHECK_FALSE(r.ok);
    CHECK(r.worst_index == 2);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(check_entropy_step(std::vector<double>{1, 2}, std::vector<double>{1},
                                       1.0, row, kLinear, 0.5),
                    InvalidArgument);
  }
}

TEST_CASE("kruzkov flux") {
  CHECK(kruzkov_flux(kLinear, 2.0, 4.0) == doctest::Approx(0.25));
  CHECK(kruzkov_flux(kLinear, 4.0, 2.0) == doctest::Approx(0.25));
  CHECK(kruzkov_flux(kLinear, 3.0, 3.0) == 0.0);
}

TEST_CASE("entropy kernel") {
  const auto one = [](double) { return 1.0; };
  const auto cubic = [](double mu) { return 0.3 * mu; };
  for (auto [a, b] : {std::pair{1.0, 2.0}, {5.0, 1.5}, {2.0, 19.0}, {3.0, 3.0}}) {
    CAPTURE(a);
    CAPTURE(b);
    const double closed = entropy_kernel(kLinear, a, b);
    CHECK(closed >= 0.0);
    CHECK(closed == doctest::Approx(double_simpson(one, kLinear, a, b)).epsilon(1e-8));
    CHECK(entropy_kernel(kLinear, a, b, one) == doctest::Approx(closed).epsilon(1e-10));
    CHECK(entropy_kernel(kLinear, a, b, cubic) ==
          doctest::Approx(double_simpson(cubic, kLinear, a, b)).epsilon(1e-8));
    // quadratic lower bound with c = min W' / 2
    const double min_dw = kLinear.dW(std::max(a, b));
    CHECK(closed >= 0.5 * min_dw * (b - a) * (b - a) * (1 - 1e-12));
  }
  const VelocityModel q = VelocityModel::quadratic();
  CHECK(entropy_kernel(q, 1.2, 4.0) == doctest::Approx(double_simpson(one, q, 1.2, 4.0)).epsilon(1e-8));
}

TEST_CASE("entropy dissipation") {
  SUBCASE("constant profile") {
    for (double d : entropy_dissipation(std::vector<double>(20, 4.0), 4.0, kExp, 0.1, 0.02, kLinear)) {
      CHECK(d == 0.0);
    }
  }
  SUBCASE("two-point profile") {
    const double a = 2.0, b = 5.0, alpha = 0.1, dz = 0.01;
    const auto d = entropy_dissipation(std::vector<double>{a, b}, b, kExp, alpha, dz, kLinear);
    // only zeta >= dz sees the jump: D_0 = Phi_alpha(dz) H(a, b)
    const double expect = kExp.scaled_value(alpha, dz) * entropy_kernel(kLinear, a, b);
    CHECK(d[0] == doctest::Approx(expect).epsilon(1e-4));
    CHECK(d[0] >= 0.5 * kLinear.dW(b) * (b - a) * (b - a) * kExp.scaled_value(alpha, dz) * (1 - 1e-4));
    CHECK(d[1] == 0.0);
  }
  SUBCASE("nonnegative on random profiles") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(1.0, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> w(24);
      for (auto& x : w) x = u(rng);
      for (double d : entropy_dissipation(w, u(rng), kExp, 0.02 + 0.001 * trial, 0.01, kLinear)) {
        CHECK(d >= -1e-12);
      }
    }
  }
  SUBCASE("box kernel is rejected") {
    CHECK_THROWS_AS(entropy_dissipation(std::vector<double>{1, 2}, 2.0, Kernel(KernelFamily::Box),
                                        0.1, 0.01, kLinear),
                    InvalidArgument);
  }
}

TEST_CASE("rate fit") {
  CHECK(rate_fit({{1.0, 1.0}, {0.25, 0.5}}).slope == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rate_fit({{1.0, 3.0}, {0.5, 1.5}, {0.1, 0.3}}).slope == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rate_fit({{1.0, 2.0}, {0.5, 2.0}, {0.1, 2.0}}).slope == doctest::Approx(0.0));
  std::vector<std::pair<double, double>> planted;
  for (double a : {0.5, 0.2, 0.1, 0.03, 0.01, 0.001}) planted.emplace_back(a, 1.7 * std::pow(a, 0.37));
  const RateFit fit = rate_fit(planted);
  CHECK(std::abs(fit.slope - 0.37) <= 1e-10);
  CHECK(std::abs(std::exp(fit.intercept) - 1.7) <= 1e-10);
  CHECK_THROWS_AS(rate_fit({{1.0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(rate_fit({{1.0, 1.0}, {0.0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(rate_fit({{1.0, 1.0}, {0.5, -1.0}}), InvalidArgument);
}

TEST_CASE("exponential identity residual") {
  CHECK(exp_identity_residual(std::vector<double>(5, 2.0), std::vector<double>(5, 2.0), 0.1, 0.01) == 0.0);
  const double alpha = 0.1;
  auto residual = [&](const Kernel& k, double dz) {
    const auto y = smooth_profile(dz, 1.5);
    WeightOptions opts;
    opts.window = y.size() + 1;
    const WeightRow row = lagrangian_weights(k, alpha, dz, opts);
    const auto w = filter(y, row, {3.0});
    return exp_identity_residual(w, y, alpha, dz);
  };
  const double r1 = residual(kExp, 1.0 / 200);
  const double r2 = residual(kExp, 1.0 / 400);
  CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.1));
  const Kernel box(KernelFamily::Box);
  const double b1 = residual(box, 1.0 / 200);
  const double b2 = residual(box, 1.0 / 400);
  CHECK(b1 > 0.1);
  CHECK(b2 > 0.8 * b1);
}

TEST_CASE("filtered gap") {
  const std::vector<double> y{1.0, 2.0, 3.0};
  CHECK(filtered_gap(y, y, 0.1) == 0.0);
  CHECK(filtered_gap(y, std::vector<double>{1.5, 2.0, 2.0}, 0.1) == doctest::Approx(0.15));
  CHECK_THROWS_AS(filtered_gap(y, std::vector<double>{1.0}, 0.1), InvalidArgument);
}

TEST_CASE("campaign csv") {
  std::ostringstream os;
  const std::vector<CampaignResult> results{{"monotonicity", 10, 0, -0.5, 0}};
  write_campaign_csv(os, results);
  CHECK(os.str() == "check,trials,violations,worst_margin,first_failure_seed\nmonotonicity,10,0,-0.5,0\n");
}

}  // TEST_SUITE
