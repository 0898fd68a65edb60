#include "nlt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace nlt {
namespace {

namespace fs = std::filesystem;

// Runs f(0..n-1) on up to `jobs` threads; rethrows the first exception.
template <class F>
void parallel_for(std::size_t n, std::size_t jobs, F&& f) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(jobs, n); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

bool writes(const ExperimentConfig& c) { return !c.output_dir.empty(); }

std::ofstream open_output(const ExperimentConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  const fs::path path = c.output_dir / name;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

double bv_with_ghost(std::span<const double> v, double ghost) {
  return bv_seminorm(v) + std::abs(ghost - v.back());
}

std::string alpha_label(double alpha) {
  std::ostringstream os;
  os << std::setprecision(6) << alpha;
  return os.str();
}

}  // namespace

CompareFtlResult cmd_compare_ftl(const ExperimentConfig& config) {
  config.validate();
  const DensityProfile rho0 = config.profile();
  const FtlState start = discretize_density(rho0, config.ell, config.a, config.b);
  const FtlSetup setup =
      FtlSetup::make(VelocityModel::from_name(config.velocity),
                     Kernel::from_name(config.kernel), config.alpha,
                     config.ell, start.size());
  const double dt = config.dt > 0.0 ? config.dt : config.ell;

  CompareFtlResult result;
  for (FtlModel m : {FtlModel::Local, FtlModel::NonlocalEulerian,
                     FtlModel::NonlocalLagrangian}) {
    FtlState final_state = integrate(start, m, setup, config.t_end, dt);
    const double centroid = final_state.centroid();
    result.models.push_back({m, std::move(final_state), centroid});
  }

  if (writes(config)) {
    auto density = open_output(config, "compare_ftl_density.csv");
    density << "model,t,x,u\n";
    auto cars = open_output(config, "compare_ftl_cars.csv");
    cars << "t,i,x_i,u_i,model\n";
    auto summary = open_output(config, "compare_ftl_summary.csv");
    summary << "model,t,n_cars,centroid\n" << std::setprecision(17);
    for (const auto& r : result.models) {
      write_density_csv(density, model_tag(r.model), r.final_state, 0.5);
      write_ftl_csv(cars, model_tag(r.model), r.final_state);
      summary << model_tag(r.model) << ',' << r.final_state.t << ','
              << r.final_state.size() << ',' << r.centroid << '\n';
    }
    auto gp = open_output(config, "compare_ftl.gp");
    gp << "set datafile separator ','\n"
       << "set key top left\n"
       << "set xlabel 'x'\nset ylabel 'u'\n"
       << "set title 'FtL models, ell = " << config.ell
       << ", alpha = " << config.alpha << ", t = " << config.t_end << "'\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output 'compare_ftl.png'\n"
       << "plot for [m in 'local eulerian lagrangian'] "
          "'compare_ftl_density.csv' using "
          "(strcol(1) eq m ? $3 : NaN):4 with lines title m\n";
  }
  return result;
}

PairRun run_pair_experiment(const ExperimentConfig& config,
                            const Kernel& kernel, double alpha,
                            const PairRunOptions& options) {
  PairRun out;
  out.alpha = alpha;
  out.data = lagrangian_initial_data(config.profile(), config.ell, config.a,
                                     config.b);
  out.grid = LagrangianGrid{config.ell, out.data.y0.size(), out.data.y_left,
                            out.data.y_right, 0.0};
  RunOptions ro;
  ro.t_end = config.t_end;
  ro.safety = config.safety;
  ro.mode = config.boundary;
  PairSimulation sim(out.data.y0, out.grid, kernel, alpha,
                     VelocityModel::from_name(config.velocity), ro);

  auto track = [&](const PairState& s) {
    if (options.track_bounds) {
      const auto [lo, hi] = std::minmax_element(s.w.begin(), s.w.end());
      out.w_min = std::min(out.w_min, *lo);
      out.w_max = std::max(out.w_max, *hi);
      out.bv_max = std::max(out.bv_max, bv_seminorm(s.w));
    }
    if (options.observer) options.observer(s);
  };
  out.w_min = std::numeric_limits<double>::infinity();
  out.w_max = -std::numeric_limits<double>::infinity();
  track(sim.state());

  std::vector<double> w_indep;
  if (options.track_consistency) {
    w_indep = sim.state().w;
    out.consistency_gap = 0.0;
  }
  while (!sim.done()) {
    if (options.track_consistency) {
      const double lambda = sim.next_dt() / out.grid.dz;
      w_indep = step_w(w_indep, sim.row(), sim.model(), lambda, sim.boundary());
    }
    sim.advance();
    ++out.steps;
    if (options.track_consistency) {
      const auto& w = sim.state().w;
      for (std::size_t i = 0; i < w.size(); ++i) {
        *out.consistency_gap =
            std::max(*out.consistency_gap, std::abs(w[i] - w_indep[i]));
      }
    }
    track(sim.state());
  }
  out.final_state = sim.state();
  return out;
}

StepFunction ReferenceRun::as_function() const {
  return StepFunction(grid.edges(), solution.rho);
}

ReferenceRun run_reference(const ExperimentConfig& config) {
  const DensityProfile rho0 = config.profile();
  const VelocityModel model = VelocityModel::from_name(config.velocity);
  const InitialPositions init =
      discretize_positions(rho0, config.ell, config.a, config.b);
  // Cars never move left and never faster than V(0).
  const double lo = config.a - 0.1;
  const double hi = init.x.back() + config.t_end * model.V(0.0) + 0.1;
  ReferenceRun ref;
  ref.grid = EulerianGrid{config.ell / static_cast<double>(config.ref_refine),
                          lo, hi, rho0(lo), rho0(hi)};
  const EngquistOsherFlux flux(model);
  ref.solution = solve_eo(cell_averages(rho0, ref.grid), ref.grid, flux,
                          config.t_end, config.ref_safety);
  return ref;
}

ZeroFilterResult cmd_zero_filter(const ExperimentConfig& config) {
  config.validate();
  std::vector<double> alphas = config.alphas;
  if (alphas.empty()) alphas = {config.alpha};
  std::sort(alphas.begin(), alphas.end(), std::greater<>());
  const Kernel kernel = Kernel::from_name(config.kernel);
  const VelocityModel model = VelocityModel::from_name(config.velocity);

  const ReferenceRun ref = run_reference(config);
  const StepFunction rho = ref.as_function();

  ZeroFilterResult result;
  result.rows.resize(alphas.size());
  std::vector<PairRun> runs(alphas.size());
  parallel_for(alphas.size(), config.jobs, [&](std::size_t k) {
    runs[k] = run_pair_experiment(config, kernel, alphas[k]);
  });

  const auto& data = runs.front().data;
  result.bv_y0 = bv_with_ghost(data.y0, data.y_right);
  const auto [y_lo, y_hi] = std::minmax_element(data.y0.begin(), data.y0.end());
  const double sup_dW = model.sup_dW(std::min(*y_lo, data.y_right),
                                     std::max(*y_hi, data.y_right));
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const PairRun& r = runs[k];
    const PairState& s = r.final_state;
    ZeroFilterRow& row = result.rows[k];
    row.alpha = alphas[k];
    row.l1_inv_w = l1_between_traces(
        make_trace(s, r.data.x_first, config.ell, TraceValue::InverseW), rho);
    row.l1_inv_y = l1_between_traces(
        make_trace(s, r.data.x_first, config.ell, TraceValue::InverseY), rho);
    row.kuznetsov_bound =
        kuznetsov_bound(config.t_end, sup_dW, result.bv_y0, alphas[k]);
    row.filtered_gap = filtered_gap(s.y, s.w, config.ell);
    row.gap_bound = alphas[k] * result.bv_y0 + 10.0 * config.ell;
    row.n_cells = s.y.size();
    row.steps = r.steps;
  }
  if (result.rows.size() >= 2) {
    std::vector<std::pair<double, double>> samples;
    for (const auto& row : result.rows) samples.emplace_back(row.alpha, row.l1_inv_w);
    result.fit = rate_fit(std::move(samples));
  }

  if (writes(config)) {
    auto errors = open_output(config, "zero_filter_errors.csv");
    errors << "alpha,l1_inv_w,l1_inv_y,kuznetsov_bound,filtered_gap,gap_bound,"
              "n_cells,steps\n"
           << std::setprecision(17);
    for (const auto& row : result.rows) {
      errors << row.alpha << ',' << row.l1_inv_w << ',' << row.l1_inv_y << ','
             << row.kuznetsov_bound << ',' << row.filtered_gap << ','
             << row.gap_bound << ',' << row.n_cells << ',' << row.steps << '\n';
    }
    if (result.fit) {
      auto rate = open_output(config, "zero_filter_rate.csv");
      rate << "slope,intercept\n" << std::setprecision(17) << result.fit->slope
           << ',' << result.fit->intercept << '\n';
    }
    {
      auto out = open_output(config, "zero_filter_reference.csv");
      write_eo_csv(out, ref.grid, ref.solution);
    }
    for (std::size_t k = 0; k < runs.size(); ++k) {
      auto out = open_output(config, "zero_filter_trace_" + std::to_string(k) + ".csv");
      write_trace_csv(out, runs[k].final_state, runs[k].data.x_first, config.ell);
    }
    auto gp = open_output(config, "zero_filter.gp");
    gp << "set datafile separator ','\n"
       << "set terminal pngcairo size 1200,900\n"
       << "set output 'zero_filter.png'\n"
       << "set multiplot layout 2,2\n"
       << "set xlabel 'x'\nset ylabel 'density'\nset key top left\n";
    for (std::size_t k = 0; k < runs.size(); ++k) {
      gp << "set title 'alpha = " << alpha_label(alphas[k]) << ", t = "
         << config.t_end << "'\n"
         << "plot 'zero_filter_reference.csv' using 2:3 skip 1 with lines "
            "title 'rho (EO)', \\\n"
         << "     'zero_filter_trace_" << k
         << ".csv' using 2:3 skip 1 with lines title '1/w', \\\n"
         << "     'zero_filter_trace_" << k
         << ".csv' using 2:4 skip 1 with lines title '1/y'\n";
    }
    gp << "unset multiplot\n";
  }
  return result;
}

FilterStudyResult cmd_filter_study(const ExperimentConfig& config) {
  config.validate();
  std::vector<double> alphas = config.alphas;
  if (alphas.empty()) alphas = {config.alpha};
  std::sort(alphas.begin(), alphas.end(), std::greater<>());

  const std::size_t nk = config.kernels.size();
  const std::size_t na = alphas.size();
  std::vector<PairRun> runs(nk * na);
  parallel_for(runs.size(), config.jobs, [&](std::size_t idx) {
    const Kernel kernel = Kernel::from_name(config.kernels[idx / na]);
    runs[idx] = run_pair_experiment(config, kernel, alphas[idx % na]);
  });

  FilterStudyResult result;
  for (std::size_t idx = 0; idx < runs.size(); ++idx) {
    const Kernel kernel = Kernel::from_name(config.kernels[idx / na]);
    const PairState& s = runs[idx].final_state;
    FilterStudyRow row;
    row.kernel = std::string(kernel.name());
    row.alpha = runs[idx].alpha;
    row.filtered_gap = filtered_gap(s.y, s.w, config.ell);
    if (kernel.family() == KernelFamily::Exponential) {
      row.identity_residual = exp_identity_residual(s.w, s.y, row.alpha, config.ell);
    }
    row.bv_y = bv_seminorm(s.y);
    row.bv_w = bv_seminorm(s.w);
    result.rows.push_back(row);
  }
  for (std::size_t k = 0; k < nk; ++k) {
    const double first = result.rows[k * na].filtered_gap;
    const double last = result.rows[k * na + na - 1].filtered_gap;
    const double ratio = first > 0.0 ? last / first : 0.0;
    result.summary.push_back({result.rows[k * na].kernel, ratio, ratio <= 0.5});
  }

  if (writes(config)) {
    auto out = open_output(config, "filter_study.csv");
    out << "kernel,alpha,ell,filtered_gap,identity_residual,bv_y,bv_w\n"
        << std::setprecision(17);
    for (const auto& r : result.rows) {
      out << r.kernel << ',' << r.alpha << ',' << config.ell << ','
          << r.filtered_gap << ',';
      if (r.identity_residual) out << *r.identity_residual;
      out << ',' << r.bv_y << ',' << r.bv_w << '\n';
    }
    auto sum = open_output(config, "filter_study_summary.csv");
    sum << "kernel,gap_ratio,gap_shrinks\n" << std::setprecision(17);
    for (const auto& s : result.summary) {
      sum << s.kernel << ',' << s.gap_ratio << ',' << (s.gap_shrinks ? 1 : 0)
          << '\n';
    }
    for (std::size_t idx = 0; idx < runs.size(); ++idx) {
      auto tr = open_output(config, "filter_study_trace_" +
                                        result.rows[idx].kernel + "_" +
                                        std::to_string(idx % na) + ".csv");
      write_trace_csv(tr, runs[idx].final_state, runs[idx].data.x_first, config.ell);
    }
    auto gp = open_output(config, "filter_study.gp");
    gp << "set datafile separator ','\n"
       << "set terminal pngcairo size " << 500 * na << "," << 350 * nk << "\n"
       << "set output 'filter_study.png'\n"
       << "set multiplot layout " << nk << "," << na << "\n"
       << "set xlabel 'x'\nset ylabel 'density'\nset key top left\n";
    for (std::size_t idx = 0; idx < runs.size(); ++idx) {
      const std::string file = "filter_study_trace_" + result.rows[idx].kernel +
                               "_" + std::to_string(idx % na) + ".csv";
      gp << "set title '" << result.rows[idx].kernel << ", alpha = "
         << alpha_label(result.rows[idx].alpha) << "'\n"
         << "plot '" << file << "' using 2:4 skip 1 with lines title '1/y', \\\n"
         << "     '" << file << "' using 2:3 skip 1 with lines title '1/w'\n";
    }
    gp << "unset multiplot\n";
  }
  return result;
}

VerifyReport cmd_verify(const ExperimentConfig& config) {
  config.validate();
  CampaignOptions options;
  options.seed = config.seed;
  options.trials = config.trials;
  VerifyReport report = run_verify(options);
  if (writes(config)) {
    auto out = open_output(config, "verify_report.csv");
    std::vector<CampaignResult> all = report.checks;
    all.push_back(report.negative_control);
    write_campaign_csv(out, all);
  }
  return report;
}

SimulateResult cmd_simulate(const ExperimentConfig& config) {
  config.validate();
  const LagrangianData data =
      lagrangian_initial_data(config.profile(), config.ell, config.a, config.b);
  SimulateResult result;
  result.grid = LagrangianGrid{config.ell, data.y0.size(), data.y_left,
                               data.y_right, 0.0};
  result.x_first = data.x_first;
  RunOptions ro;
  ro.t_end = config.t_end;
  ro.safety = config.safety;
  ro.mode = config.boundary;
  ro.record_every = config.record_every == 0
                        ? std::numeric_limits<std::size_t>::max()
                        : config.record_every;
  result.trajectory = run(data.y0, result.grid, Kernel::from_name(config.kernel),
                          config.alpha, VelocityModel::from_name(config.velocity),
                          ro);
  if (writes(config)) {
    {
      auto out = open_output(config, "simulate_pair.csv");
      write_pair_csv(out, result.trajectory, result.grid);
    }
    {
      auto out = open_output(config, "simulate_trace.csv");
      write_trace_csv(out, result.trajectory.back(), data.x_first, config.ell);
    }
    auto gp = open_output(config, "simulate.gp");
    gp << "set datafile separator ','\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output 'simulate.png'\n"
       << "set xlabel 'x'\nset ylabel 'density'\nset key top left\n"
       << "set title '" << config.kernel << " kernel, alpha = "
       << alpha_label(config.alpha) << ", t = " << config.t_end << "'\n"
       << "plot 'simulate_trace.csv' using 2:3 skip 1 with lines title '1/w', \\\n"
       << "     'simulate_trace.csv' using 2:4 skip 1 with lines title '1/y'\n";
  }
  return result;
}

}  // namespace nlt
