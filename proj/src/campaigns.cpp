#include "nlt/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nlt/ftl.hpp"
#include "nlt/kernels.hpp"
#include "nlt/velocity.hpp"

namespace nlt {
namespace {

constexpr double kLo = 1.0;
constexpr double kHi = 20.0;

struct Trial {
  std::uint64_t seed;
  std::mt19937_64 rng;
  WeightRow row;
  double ghost;
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Trial make_trial(std::uint64_t seed, std::size_t cells) {
  Trial t{seed, std::mt19937_64(seed), WeightRow::identity(), 0.0};
  const auto families = Kernel::all_families();
  const auto k = std::uniform_int_distribution<std::size_t>(
      0, families.size() - 1)(t.rng);
  const double dz = 1.0 / static_cast<double>(cells);
  // log-uniform filter size from a fraction of a cell to twice the window
  const double alpha = dz * std::exp(uniform(t.rng, std::log(0.125),
                                             std::log(2.0 * cells)));
  WeightOptions opts;
  opts.window = cells + 1;
  t.row = lagrangian_weights(Kernel(families[k]), alpha, dz, opts);
  t.ghost = uniform(t.rng, kLo, kHi);
  return t;
}

std::vector<double> random_state(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  // Mix smooth stretches with jumps so both regimes are exercised.
  double level = uniform(rng, kLo, kHi);
  for (auto& x : v) {
    if (uniform(rng, 0.0, 1.0) < 0.3) level = uniform(rng, kLo, kHi);
    x = level;
  }
  for (auto& x : v) {
    if (uniform(rng, 0.0, 1.0) < 0.5) x = std::clamp(x + uniform(rng, -1.0, 1.0), kLo, kHi);
  }
  return v;
}

std::pair<double, double> range_of(std::span<const double> v, double extra) {
  double lo = extra, hi = extra;
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return {lo, hi};
}

double tv_with_ghost(std::span<const double> v, double ghost) {
  return bv_seminorm(v) + std::abs(ghost - v.back());
}

struct Tracker {
  CampaignResult result;
  bool failed_this_trial = false;

  explicit Tracker(const char* name) {
    result.check = name;
    result.worst_margin = -std::numeric_limits<double>::infinity();
  }
  void observe(double margin, double tol) {
    result.worst_margin = std::max(result.worst_margin, margin);
    if (margin > tol) failed_this_trial = true;
  }
  void end_trial(std::uint64_t seed) {
    ++result.trials;
    if (failed_this_trial) {
      if (result.violations == 0) result.first_failure_seed = seed;
      ++result.violations;
    }
    failed_this_trial = false;
  }
};

std::vector<std::uint64_t> trial_seeds(const CampaignOptions& o,
                                       std::uint64_t salt) {
  std::mt19937_64 master(o.seed ^ (salt * 0x9E3779B97F4A7C15ULL));
  std::vector<std::uint64_t> seeds(o.trials);
  for (auto& s : seeds) s = master();
  return seeds;
}

}  // namespace

OrderedPairResults ordered_pair_campaign(const CampaignOptions& o,
                                         CflCheck check) {
  const VelocityModel model = VelocityModel::linear();
  Tracker mono("monotonicity"), contraction("l1_contraction"),
      maxp("max_principle"), tvd("tvd"), cont("time_continuity"),
      osc("oscillation_growth");
  const double dz = 1.0 / static_cast<double>(o.cells);

  for (std::uint64_t seed : trial_seeds(o, 1)) {
    Trial t = make_trial(seed, o.cells);
    std::vector<double> w = random_state(t.rng, o.cells);
    std::vector<double> v(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      v[i] = uniform(t.rng, 0.0, 1.0) < 0.5 ? w[i] : w[i] - uniform(t.rng, 0.0, 1.0) * (w[i] - kLo);
    }
    const Boundary boundary{t.ghost, BoundaryMode::Ghost};
    const auto [lo_w, hi_w] = range_of(w, t.ghost);
    const auto [lo_v, hi_v] = range_of(v, t.ghost);
    const double lo = std::min(lo_w, lo_v);
    const double sup = model.sup_dW(lo, std::max(hi_w, hi_v));
    const double lambda = o.safety / sup;
    const double dt = lambda * dz;
    const double tv0 = tv_with_ghost(w, t.ghost);
    double l1 = l1_distance(w, v, dz);
    double incr = max_increment(w, t.ghost);

    for (std::size_t n = 0; n < o.steps; ++n) {
      std::vector<double> wn = step_w(w, t.row, model, lambda, boundary, check);
      std::vector<double> vn = step_w(v, t.row, model, lambda, boundary, check);
      double order = -std::numeric_limits<double>::infinity();
      double excursion = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < wn.size(); ++i) {
        order = std::max(order, vn[i] - wn[i]);
        excursion = std::max({excursion, lo_w - wn[i], wn[i] - hi_w});
      }
      mono.observe(order, o.tol);
      maxp.observe(excursion, o.tol);
      const double l1n = l1_distance(wn, vn, dz);
      contraction.observe(l1n - l1, o.tol);
      l1 = l1n;
      tvd.observe(tv_with_ghost(wn, t.ghost) - tv0, o.tol);
      cont.observe(l1_distance(wn, w, dz) - dt * sup * tv0, o.tol);
      const double incr_n = max_increment(wn, t.ghost);
      osc.observe(incr_n - oscillation_growth_bound(incr, dt, sup, t.row[0], dz),
                  o.tol);
      incr = incr_n;
      w = std::move(wn);
      v = std::move(vn);
    }
    for (Tracker* tr : {&mono, &contraction, &maxp, &tvd, &cont, &osc}) {
      tr->end_trial(seed);
    }
  }
  return {mono.result, contraction.result, maxp.result,
          tvd.result,  cont.result,        osc.result};
}

CampaignResult entropy_campaign(const CampaignOptions& o) {
  const VelocityModel model = VelocityModel::linear();
  Tracker tr("entropy_inequality");
  for (std::uint64_t seed : trial_seeds(o, 2)) {
    Trial t = make_trial(seed, o.cells);
    const std::vector<double> w = random_state(t.rng, o.cells);
    const double c = uniform(t.rng, kLo, kHi);
    const Boundary boundary{t.ghost, BoundaryMode::Ghost};
    const auto [lo, hi] = range_of(w, t.ghost);
    const double lambda = o.safety / model.sup_dW(lo, hi);
    const std::vector<double> next = step_w(w, t.row, model, lambda, boundary);
    tr.observe(check_entropy_step(w, next, c, t.row, model, lambda, boundary,
                                  o.tol).worst,
               o.tol);
    tr.end_trial(seed);
  }
  return tr.result;
}

CampaignResult entropy_equality_campaign(const CampaignOptions& o) {
  const VelocityModel model = VelocityModel::linear();
  Tracker tr("entropy_equality_below_range");
  for (std::uint64_t seed : trial_seeds(o, 3)) {
    Trial t = make_trial(seed, o.cells);
    std::vector<double> w = random_state(t.rng, o.cells);
    // Lift the state so that some c in [1, 2) lies strictly below it.
    for (auto& x : w) x = std::min(kHi, x + 1.0);
    t.ghost = std::min(kHi, t.ghost + 1.0);
    const auto [lo, hi] = range_of(w, t.ghost);
    const double c = uniform(t.rng, kLo, lo);
    const Boundary boundary{t.ghost, BoundaryMode::Ghost};
    const double lambda = o.safety / model.sup_dW(lo, hi);
    const std::vector<double> next = step_w(w, t.row, model, lambda, boundary);
    // Equality: check both directions, swapping the roles via -margin.
    const EntropyCheck fwd =
        check_entropy_step(w, next, c, t.row, model, lambda, boundary, o.tol);
    double reverse = -std::numeric_limits<double>::infinity();
    {
      std::vector<double> q(w.size()), aq(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) q[i] = kruzkov_flux(model, w[i], c);
      const double qg = kruzkov_flux(model, t.ghost, c);
      average_into(q, t.row, qg, boundary.mode, aq);
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double right = i + 1 < w.size() ? aq[i + 1] : qg;
        const double rhs = std::abs(w[i] - c) + lambda * (right - aq[i]);
        reverse = std::max(reverse, rhs - std::abs(next[i] - c));
      }
    }
    tr.observe(std::max(fwd.worst, reverse), o.tol);
    tr.end_trial(seed);
  }
  return tr.result;
}

CampaignResult consistency_campaign(const CampaignOptions& o) {
  const VelocityModel model = VelocityModel::linear();
  Tracker tr("scheme_consistency");
  for (std::uint64_t seed : trial_seeds(o, 4)) {
    Trial t = make_trial(seed, o.cells);
    PairState s;
    s.y = random_state(t.rng, o.cells);
    const Boundary boundary{t.ghost, BoundaryMode::Ghost};
    s.w = filter(s.y, t.row, boundary);
    const auto [lo, hi] = range_of(s.w, t.ghost);
    const double lambda = o.safety / model.sup_dW(lo, hi);
    double worst = 0.0;
    std::vector<double> w = s.w;
    for (std::size_t n = 0; n < o.steps; ++n) {
      s = step_pair(s, t.row, model, lambda, boundary);
      w = step_w(w, t.row, model, lambda, boundary);
      for (std::size_t i = 0; i < w.size(); ++i) {
        worst = std::max(worst, std::abs(w[i] - s.w[i]));
      }
    }
    tr.observe(worst, 1e-10);
    tr.end_trial(seed);
  }
  return tr.result;
}

CampaignResult ftl_ordering_campaign(const CampaignOptions& o) {
  Tracker tr("ftl_speed_ordering");
  const VelocityModel models[] = {VelocityModel::linear(),
                                  VelocityModel::quadratic()};
  for (std::uint64_t seed : trial_seeds(o, 5)) {
    std::mt19937_64 rng(seed);
    const auto k = std::uniform_int_distribution<std::size_t>(1, 32)(rng);
    std::vector<double> weights(k), densities(k);
    double total = 0.0;
    for (auto& x : weights) total += (x = uniform(rng, 0.0, 1.0));
    for (auto& x : weights) x /= total;
    for (auto& u : densities) u = 1.0 / uniform(rng, kLo, kHi);
    const double harmonic = harmonic_mean_density(weights, densities);
    const double arithmetic = arithmetic_mean_density(weights, densities);
    for (const auto& m : models) {
      tr.observe(m.V(arithmetic) - m.V(harmonic), 1e-14);
    }
    tr.end_trial(seed);
  }
  return tr.result;
}

bool VerifyReport::passed() const {
  for (const auto& c : checks) {
    if (c.violations != 0) return false;
  }
  return negative_control.violations > 0;
}

VerifyReport run_verify(const CampaignOptions& options) {
  VerifyReport report;
  const OrderedPairResults pairs = ordered_pair_campaign(options);
  report.checks = {pairs.monotonicity,   pairs.l1_contraction,
                   pairs.max_principle,  pairs.tvd,
                   pairs.time_continuity, pairs.oscillation_growth,
                   entropy_campaign(options),
                   entropy_equality_campaign(options),
                   consistency_campaign(options),
                   ftl_ordering_campaign(options)};
  CampaignOptions unstable = options;
  unstable.safety = 1.5;
  report.negative_control =
      ordered_pair_campaign(unstable, CflCheck::Skip).monotonicity;
  report.negative_control.check = "negative_control_cfl_1.5";
  return report;
}

}  // namespace nlt
