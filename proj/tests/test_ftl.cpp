#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nlt/errors.hpp"
#include "nlt/ftl.hpp"

using namespace nlt;

namespace {
const VelocityModel kLinear = VelocityModel::linear();
const DensityProfile kBoxData = DensityProfile::box(-0.75, 0.75, 1.0, 0.05);

FtlState make_state(std::vector<double> x, double ell, double u_last) {
  FtlState s;
  s.x = std::move(x);
  s.ell = ell;
  s.u_left = u_last;
  s.u_last = u_last;
  return s;
}
}  // namespace

TEST_SUITE("ftl") {

TEST_CASE("density profiles") {
  CHECK(kBoxData(0.0) == 1.0);
  CHECK(kBoxData(-0.75) == 1.0);
  CHECK(kBoxData(0.75) == 0.05);
  CHECK(kBoxData(-3.0) == 0.05);
  CHECK(kBoxData.mass(-1.0, 1.0) == doctest::Approx(1.5 + 0.025));
  CHECK(kBoxData.spacing_variation() == doctest::Approx(38.0));
  const double x = kBoxData.position_of_mass(-1.0, 0.5);
  CHECK(kBoxData.mass(-1.0, x) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(DensityProfile({0.0}, {0.5, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(DensityProfile({0.0}, {0.5, 1.2}), InvalidArgument);
  CHECK_THROWS_AS(DensityProfile({1.0, 0.0}, {0.5, 0.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(DensityProfile({0.0}, {0.5}), InvalidArgument);
}

TEST_CASE("discretization") {
  SUBCASE("constant density gives uniform spacing") {
    const FtlState s = discretize_density(DensityProfile({}, {0.5}), 0.1, 0.0, 1.0);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(s.gap(i) == doctest::Approx(0.2));
    CHECK(s.x.front() == 0.0);
    CHECK(s.u_last == 0.5);
  }
  SUBCASE("box data") {
    const double ell = 0.06;
    const InitialPositions init = discretize_positions(kBoxData, ell, -1.5, 1.5);
    CHECK(init.x.front() == -1.5);
    CHECK(init.x.back() > 1.5);
    CHECK(init.x[init.x.size() - 2] <= 1.5);
    CHECK(init.u_left == 0.05);
    CHECK(init.u_last == 0.05);
    // the number of gaps equals the mass below the last car over ell
    const double n = static_cast<double>(init.x.size() - 1);
    CHECK(kBoxData.mass(init.x.front(), init.x.back()) == doctest::Approx(n * ell));
    for (std::size_t i = 0; i + 1 < init.x.size(); ++i) {
      const double gap = init.x[i + 1] - init.x[i];
      if (init.x[i] >= -0.75 && init.x[i + 1] <= 0.75) CHECK(gap == doctest::Approx(0.06));
      if (init.x[i + 1] <= -0.75 || init.x[i] >= 0.75) CHECK(gap == doctest::Approx(1.2));
      CHECK(gap >= ell * (1 - 1e-12));
    }
    const FtlState s = discretize_density(kBoxData, ell, -1.5, 1.5);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.density(i) <= 1.0);
  }
  SUBCASE("lagrangian data") {
    const LagrangianData d = lagrangian_initial_data(kBoxData, 0.01, -1.5, 1.5);
    CHECK(d.x_first == -1.5);
    CHECK(d.y_right == doctest::Approx(20.0));
    CHECK(d.y_left == doctest::Approx(20.0));
    for (double y : d.y0) {
      CHECK(y >= 1.0);
      CHECK(y <= 20.0 + 1e-9);
    }
    CHECK(d.y0[d.y0.size() / 2] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("local speed") {
  const FtlState jammed = make_state({0.0, 0.1, 0.2}, 0.1, 1.0);
  CHECK(speed_local(jammed, 0, kLinear) == 0.0);
  const FtlState sparse = make_state({0.0, 2.0}, 0.1, 0.05);
  CHECK(speed_local(sparse, 0, kLinear) == doctest::Approx(0.95));
  CHECK(speed_local(sparse, 1, kLinear) == doctest::Approx(0.95));
  CHECK_THROWS_AS(speed_local(sparse, 2, kLinear), InvalidArgument);
}

TEST_CASE("nonlocal speeds") {
  const Kernel exp_k(KernelFamily::Exponential);
  SUBCASE("constant density") {
    const FtlState s = make_state({0.0, 0.4, 0.8, 1.2, 1.6}, 0.1, 0.25);
    const FtlSetup setup = FtlSetup::make(kLinear, exp_k, 0.5, 0.1, s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(speed_nonlocal_eulerian(s, i, exp_k, 0.5, kLinear) == doctest::Approx(0.75));
      CHECK(speed_nonlocal_lagrangian(s, i, setup.lagrangian_row, kLinear) ==
            doctest::Approx(0.75));
    }
    for (auto m : {FtlModel::Local, FtlModel::NonlocalEulerian, FtlModel::NonlocalLagrangian}) {
      for (double v : speeds(s, m, setup)) CHECK(v == doctest::Approx(0.75));
    }
  }
  SUBCASE("the leader uses the frozen density") {
    const FtlState s = make_state({0.0, 0.15, 0.5}, 0.1, 0.05);
    CHECK(speed_nonlocal_eulerian(s, 2, exp_k, 0.5, kLinear) == doctest::Approx(0.95));
    const FtlSetup setup = FtlSetup::make(kLinear, exp_k, 0.5, 0.1, s.size());
    CHECK(speed_nonlocal_lagrangian(s, 2, setup.lagrangian_row, kLinear) == doctest::Approx(0.95));
  }
  SUBCASE("eulerian arithmetic mean, box kernel") {
    const FtlState s = make_state({0.0, 0.2, 0.5}, 0.1, 0.05);
    // weights 0.4 and 0.6 on densities 1/2 and 1/3
    CHECK(speed_nonlocal_eulerian(s, 0, Kernel(KernelFamily::Box), 0.5, kLinear) ==
          doctest::Approx(0.6));
  }
  SUBCASE("lagrangian harmonic mean") {
    const double ell = 0.1;
    const FtlState s = make_state({0.0, ell, 3 * ell}, ell, 0.05);
    const WeightRow row({0.5, 0.5}, 1.0, ell);
    CHECK(speed_nonlocal_lagrangian(s, 0, row, kLinear) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("tiny filters reduce to the local model") {
    const FtlState s = make_state({0.0, 0.13, 0.3, 0.41, 0.9}, 0.1, 0.2);
    const FtlSetup setup = FtlSetup::make(kLinear, exp_k, 1e-5, 0.1, s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double local = speed_local(s, i, kLinear);
      CHECK(speed_nonlocal_eulerian(s, i, exp_k, 1e-5, kLinear) == doctest::Approx(local).epsilon(1e-12));
      CHECK(speed_nonlocal_lagrangian(s, i, setup.lagrangian_row, kLinear) ==
            doctest::Approx(local).epsilon(1e-12));
    }
  }
}

TEST_CASE("harmonic mean density never exceeds the arithmetic mean") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(1 + trial % 9), u(w.size());
    double total = 0.0;
    for (auto& x : w) total += (x = unit(rng));
    for (auto& x : w) x /= total;
    for (auto& x : u) x = 0.05 + 0.95 * unit(rng);
    const double h = harmonic_mean_density(w, u);
    const double a = arithmetic_mean_density(w, u);
    CHECK(h <= a * (1 + 1e-15));
    CHECK(kLinear.V(h) >= kLinear.V(a) - 1e-14);
  }
  CHECK_THROWS_AS(harmonic_mean_density(std::vector<double>{1.0}, std::vector<double>{}), InvalidArgument);
}

TEST_CASE("euler steps") {
  const Kernel exp_k(KernelFamily::Exponential);
  SUBCASE("a jammed platoon does not move") {
    const FtlState s = make_state({0.0, 0.1, 0.2, 0.3}, 0.1, 1.0);
    const FtlSetup setup = FtlSetup::make(kLinear, exp_k, 0.5, 0.1, s.size());
    for (auto m : {FtlModel::Local, FtlModel::NonlocalEulerian, FtlModel::NonlocalLagrangian}) {
      CHECK(euler_step(s, m, setup, 0.1).x == s.x);
    }
  }
  SUBCASE("a single free car") {
    const FtlState s = make_state({1.0}, 0.1, 0.05);
    const FtlSetup setup = FtlSetup::make(kLinear, exp_k, 0.5, 0.1, 1);
    const FtlState next = euler_step(s, FtlModel::NonlocalLagrangian, setup, 0.1);
    CHECK(next.x[0] == doctest::Approx(1.095));
    CHECK(next.t == doctest::Approx(0.1));
  }
  SUBCASE("ordering violations name the car") {
    const FtlState s = make_state({0.0, 0.2, 0.3}, 0.1, 1.0);
    const FtlSetup setup = FtlSetup::make(kLinear, exp_k, 0.5, 0.1, s.size());
    try {
      euler_step(s, FtlModel::Local, setup, 1.0);
      FAIL("expected an ordering violation");
    } catch (const OrderingViolation& e) {
      CHECK(e.index() == 0);
    }
  }
  SUBCASE("integrate lands on t_end") {
    const FtlState s = discretize_density(kBoxData, 0.06, -1.5, 1.5);
    const FtlSetup setup = FtlSetup::make(kLinear, exp_k, 0.5, 0.06, s.size());
    const FtlState end = integrate(s, FtlModel::Local, setup, 0.5, 0.06);
    CHECK(end.t == doctest::Approx(0.5));
  }
}

TEST_CASE("the lagrangian model moves mass furthest downstream") {
  const double ell = 0.06;
  const FtlState s = discretize_density(kBoxData, ell, -1.5, 1.5);
  const FtlSetup setup =
      FtlSetup::make(kLinear, Kernel(KernelFamily::Exponential), 0.5, ell, s.size());
  const double local = integrate(s, FtlModel::Local, setup, 1.4, ell).centroid();
  const double eul = integrate(s, FtlModel::NonlocalEulerian, setup, 1.4, ell).centroid();
  const double lag = integrate(s, FtlModel::NonlocalLagrangian, setup, 1.4, ell).centroid();
  CHECK(lag > eul);
  CHECK(lag > local);
}

TEST_CASE("density reconstruction") {
  const FtlState s = make_state({0.0, 0.2, 0.5, 0.9}, 0.1, 0.05);
  const DensitySnapshot u = reconstruct_density(s);
  CHECK(u(-1.0) == s.u_left);
  CHECK(u(0.0) == s.u_left);
  CHECK(u(0.1) == doctest::Approx(0.5));
  CHECK(u(0.2) == doctest::Approx(0.5));
  CHECK(u(0.3) == doctest::Approx(1.0 / 3.0));
  CHECK(u(0.7) == doctest::Approx(0.25));
  CHECK(u(5.0) == 0.05);
  CHECK(u.car_count(0.1) == doctest::Approx(3.0));

  const FtlState uniform = make_state({0.0, 0.3, 0.6, 0.9}, 0.1, 1.0 / 3.0);
  const DensitySnapshot c = reconstruct_density(uniform);
  for (double x = -0.5; x < 1.5; x += 0.05) CHECK(c(x) == doctest::Approx(1.0 / 3.0));

  std::ostringstream os;
  write_ftl_csv(os, "local", s);
  CHECK(os.str().find(",local\n") != std::string::npos);
}

}  // TEST_SUITE
