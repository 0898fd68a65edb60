// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "nlt/campaigns.hpp"
#include "nlt/config.hpp"
#include "nlt/coordinates.hpp"
#include "nlt/experiments.hpp"
#include "nlt/kernels.hpp"
#include "nlt/reference.hpp"

using namespace nlt;

namespace {

int failures = 0;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig quiet(Command command) {
  ExperimentConfig c = default_config(command);
  c.output_dir.clear();
  c.jobs = 4;
  return c;
}

void monotonicity_and_contraction() {
  Stopwatch sw;
  const OrderedPairResults r = ordered_pair_campaign(CampaignOptions{});
  const double secs = sw.seconds();
  const auto& m = r.monotonicity;
  report(1, "monotonicity", m.trials == 1000 && m.violations == 0 && secs < 5.0,
         fmt("%zu trials, %zu violations, worst margin %.3g, %.2f s (limit 5 s)",
             m.trials, m.violations, m.worst_margin, secs));
  const auto& l = r.l1_contraction;
  report(2, "L1 contraction", l.trials == 1000 && l.violations == 0,
         fmt("%zu trials, %zu violations, worst margin %.3g", l.trials,
             l.violations, l.worst_margin));
}

void max_principle_and_tvd() {
  Stopwatch sw;
  ExperimentConfig c = quiet(Command::Simulate);
  c.ell = 1.0 / 500;
  c.t_end = 1.2;
  PairRunOptions opts;
  opts.track_bounds = true;
  bool ok = true;
  std::string detail;
  for (double alpha : {0.5, 1.0 / 32}) {
    const PairRun r = run_pair_experiment(c, Kernel(KernelFamily::Exponential), alpha, opts);
    const bool here = r.w_min >= 1.0 - 1e-10 && r.w_max <= 20.0 + 1e-10 &&
                      r.bv_max <= 38.0 + 1e-10;
    ok = ok && here;
    detail += fmt("alpha=%g: w in [%.12g, %.12g], max BV %.12g; ", alpha, r.w_min,
                  r.w_max, r.bv_max);
  }
  const double secs = sw.seconds();
  report(3, "maximum principle and TVD", ok && secs < 10.0,
         detail + fmt("%.2f s (limit 10 s)", secs));
}

void entropy() {
  const CampaignResult r = entropy_campaign(CampaignOptions{});
  report(4, "discrete entropy inequality", r.trials == 1000 && r.violations == 0,
         fmt("%zu trials, %zu violations, worst margin %.3g", r.trials,
             r.violations, r.worst_margin));
}

void zero_filter() {
  Stopwatch sw;
  const ZeroFilterResult r = cmd_zero_filter(quiet(Command::ZeroFilter));
  const double secs = sw.seconds();

  bool decreasing = true;
  bool bounded = true;
  bool gaps = true;
  std::string errors, gap_detail;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    if (k > 0 && !(row.l1_inv_w < r.rows[k - 1].l1_inv_w)) decreasing = false;
    const double bound = 2.0 * std::sqrt(2.0 * 1.2 * 1.0 * 38.0 * row.alpha);
    if (!(row.l1_inv_w <= bound)) bounded = false;
    const double gap_bound = row.alpha * 38.0 + 10.0 * (1.0 / 2000);
    if (!(row.filtered_gap <= gap_bound)) gaps = false;
    errors += fmt("alpha=%g: %.4g (bound %.4g); ", row.alpha, row.l1_inv_w, bound);
    gap_detail += fmt("alpha=%g: %.4g (bound %.4g); ", row.alpha, row.filtered_gap, gap_bound);
  }
  const double slope = r.fit ? r.fit->slope : 0.0;
  report(5, "zero-filter rate",
         r.rows.size() == 4 && decreasing && bounded && slope >= 0.45 && secs < 120.0,
         errors + fmt("slope %.4f (min 0.45), strictly decreasing: %s, %.1f s (limit 120 s)",
                      slope, decreasing ? "yes" : "no", secs));
  report(6, "exponential-kernel filtered gap", r.rows.size() == 4 && gaps, gap_detail);
}

void box_versus_exponential() {
  Stopwatch sw;
  ExperimentConfig c = quiet(Command::FilterStudy);
  c.ell = 1.0 / 2500;
  c.alphas = {1.0 / 16, 1.0 / 64};
  c.kernels = {"box", "exp"};
  const FilterStudyResult r = cmd_filter_study(c);
  const double secs = sw.seconds();
  double box = 0.0, exp = 0.0;
  for (const auto& s : r.summary) {
    if (s.kernel == "box") box = s.gap_ratio;
    if (s.kernel == "exp") exp = s.gap_ratio;
  }
  // "decreases by at least 70%" means ratio <= 0.3; "fails to decrease by more
  // than 50%" means ratio >= 0.5.
  report(7, "box-kernel weak convergence",
         box >= 0.5 && exp <= 0.3 && secs < 120.0,
         fmt("gap ratio alpha=1/64 over 1/16: box %.4f (decrease %.1f%%), exp %.4f "
             "(decrease %.1f%%), %.1f s (limit 120 s)",
             box, 100.0 * (1.0 - box), exp, 100.0 * (1.0 - exp), secs));
}

void self_consistency() {
  ExperimentConfig c = quiet(Command::Simulate);
  c.ell = 1.0 / 500;
  c.t_end = 1.2;
  PairRunOptions opts;
  opts.track_consistency = true;
  const PairRun r = run_pair_experiment(c, Kernel(KernelFamily::Exponential), 1.0 / 8, opts);
  const double gap = r.consistency_gap.value_or(1.0);
  report(8, "scheme self-consistency", gap <= 1e-9,
         fmt("sup |filter(y) - w| = %.3g over %zu steps (limit 1e-9)", gap, r.steps));
}

void ftl_ordering() {
  const CampaignResult r = ftl_ordering_campaign(CampaignOptions{});
  ExperimentConfig c = quiet(Command::CompareFtl);
  c.ell = 0.005;
  c.alpha = 0.5;
  c.t_end = 1.4;
  const CompareFtlResult cmp = cmd_compare_ftl(c);
  double local = 0.0, eulerian = 0.0, lagrangian = 0.0;
  for (const auto& m : cmp.models) {
    if (m.model == FtlModel::Local) local = m.centroid;
    if (m.model == FtlModel::NonlocalEulerian) eulerian = m.centroid;
    if (m.model == FtlModel::NonlocalLagrangian) lagrangian = m.centroid;
  }
  report(9, "FtL speed ordering",
         r.trials == 1000 && r.violations == 0 && lagrangian > eulerian && lagrangian > local,
         fmt("%zu trials, %zu violations, worst margin %.3g; centroids local %.6f, "
             "eulerian %.6f, lagrangian %.6f",
             r.trials, r.violations, r.worst_margin, local, eulerian, lagrangian));
}

void reference_solver() {
  Stopwatch sw;
  const VelocityModel model = VelocityModel::linear();
  const EngquistOsherFlux flux(model);

  // Riemann fan: rho = 1 left of 0, 0 right of 0.
  const EulerianGrid grid{1.0 / 2000, -1.5, 1.5, 1.0, 0.0};
  std::vector<double> fan0(grid.n_cells());
  for (std::size_t i = 0; i < fan0.size(); ++i) fan0[i] = grid.center(i) < 0.0 ? 1.0 : 0.0;
  const EoSolution fan = solve_eo(fan0, grid, flux, 1.0, 0.9);
  double fan_l1 = 0.0;
  for (std::size_t i = 0; i < fan.rho.size(); ++i) {
    const double x = grid.center(i);
    const double exact = x <= -1.0 ? 1.0 : x >= 1.0 ? 0.0 : 0.5 * (1.0 - x);
    fan_l1 += std::abs(fan.rho[i] - exact) * grid.dx;
  }

  // Lagrangian upwind on the box data, mapped through the xi-coordinates.
  ExperimentConfig c = quiet(Command::ZeroFilter);
  const LagrangianData data = lagrangian_initial_data(c.profile(), c.ell, c.a, c.b);
  const ReferenceRun ref = run_reference(c);
  PairState s;
  s.y = data.y0;
  while (s.t < c.t_end) {
    const auto [lo, hi] = std::minmax_element(s.y.begin(), s.y.end());
    double dt = cfl_dt(model, std::min(*lo, data.y_right), std::max(*hi, data.y_right),
                       c.ell, c.safety);
    dt = std::min(dt, c.t_end - s.t);
    s.y = lagrangian_upwind_step(s.y, model, dt / c.ell, data.y_right);
    s.anchor_shift += dt * model.V(1.0 / s.y[0]);
    s.t = s.t + dt >= c.t_end ? c.t_end : s.t + dt;
    ++s.step;
  }
  s.w = s.y;
  const double lag_l1 = l1_between_traces(
      make_trace(s, data.x_first, c.ell, TraceValue::InverseY), ref.as_function());
  const double secs = sw.seconds();
  report(10, "reference-solver cross-validation",
         fan_l1 <= 5e-3 && lag_l1 <= 1e-2 && secs < 30.0,
         fmt("EO fan L1 %.4g (limit 5e-3); Lagrangian upwind vs EO L1 %.4g (limit 1e-2); "
             "%.1f s (limit 30 s)",
             fan_l1, lag_l1, secs));
}

void kernel_cdf() {
  std::vector<double> abscissae;
  for (int k = 1; k <= 25; ++k) abscissae.push_back(0.2 * k);
  for (int k = 0; k < 25; ++k) abscissae.push_back(5.0 * std::pow(200.0, k / 24.0));
  double worst = 0.0;
  std::string where;
  for (const auto f : Kernel::all_families()) {
    const Kernel kernel(f);
    for (double z : abscissae) {
      const double dev = std::abs(kernel.cdf(z) - oracle::kernel_cdf(kernel, z));
      if (dev > worst) {
        worst = dev;
        where = fmt("%s at z=%g", std::string(kernel.name()).c_str(), z);
      }
    }
  }
  report(11, "kernel CDF oracle", worst <= 1e-10,
         fmt("5 families x %zu abscissae, max deviation %.3g%s%s (limit 1e-10)",
             abscissae.size(), worst, where.empty() ? "" : " ", where.c_str()));
}

}  // namespace

int main() {
  monotonicity_and_contraction();
  max_principle_and_tvd();
  entropy();
  zero_filter();
  box_versus_exponential();
  self_consistency();
  ftl_ordering();
  reference_solver();
  kernel_cdf();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
