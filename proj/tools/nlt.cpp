// Command-line front end for the experiments.
//
// Settings are layered: command defaults, then --config FILE, then the
// NLT_OUTPUT_DIR environment variable (output directory only), then flags.

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "nlt/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kVerificationFailed = 3 };

struct Flags {
  std::string config_file;
  std::vector<std::string> sets;
  std::string kernel, kernels, alpha, alphas, ell, t_end, velocity, output;
  std::string seed, trials, jobs, safety, record_every, boundary;
  bool paper_scale = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("-c,--config", f.config_file, "key = value config file");
  cmd->add_option("--set", f.sets, "override any config key (key=value)");
  cmd->add_option("-o,--output-dir", f.output, "output directory");
  cmd->add_option("--kernel", f.kernel, "exp, tri, box, rat2 or cauchy");
  cmd->add_option("--alpha", f.alpha, "filter size (fractions like 1/8 allowed)");
  cmd->add_option("--ell", f.ell, "vehicle length / Lagrangian cell width");
  cmd->add_option("--t-end", f.t_end, "final time");
  cmd->add_option("--velocity", f.velocity, "linear or quadratic");
  cmd->add_option("--safety", f.safety, "CFL safety factor in (0, 1]");
  cmd->add_option("--boundary", f.boundary, "ghost or fold");
  cmd->add_option("--jobs", f.jobs, "worker threads for sweeps");
}

nlt::ExperimentConfig build_config(nlt::Command command, const Flags& f) {
  nlt::ExperimentConfig c = nlt::default_config(command);
  if (!f.config_file.empty()) nlt::apply_config_file(c, f.config_file);
  if (const char* env = std::getenv("NLT_OUTPUT_DIR"); env && *env) {
    c.output_dir = env;
  }
  if (f.paper_scale || c.paper_scale) nlt::apply_paper_scale(c, command);
  const std::pair<const char*, const std::string*> named[] = {
      {"kernel", &f.kernel},   {"kernels", &f.kernels},
      {"alpha", &f.alpha},     {"alphas", &f.alphas},
      {"ell", &f.ell},         {"t_end", &f.t_end},
      {"velocity", &f.velocity}, {"output_dir", &f.output},
      {"seed", &f.seed},       {"trials", &f.trials},
      {"jobs", &f.jobs},       {"safety", &f.safety},
      {"record_every", &f.record_every}, {"boundary", &f.boundary}};
  for (const auto& [key, value] : named) {
    if (!value->empty()) {
      nlt::apply_setting(c, key, *value, std::string("--") + key);
    }
  }
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw nlt::ConfigError("--set " + s, "expected key=value");
    }
    nlt::apply_setting(c, s.substr(0, eq), s.substr(eq + 1), "--set");
  }
  c.validate();
  return c;
}

int run_command(nlt::Command command, const Flags& flags) {
  const nlt::ExperimentConfig c = build_config(command, flags);
  std::cout << std::setprecision(6);
  switch (command) {
    case nlt::Command::CompareFtl: {
      const auto r = nlt::cmd_compare_ftl(c);
      for (const auto& m : r.models) {
        std::cout << std::left << std::setw(12) << nlt::model_tag(m.model)
                  << " centroid " << m.centroid << '\n';
      }
      break;
    }
    case nlt::Command::ZeroFilter: {
      const auto r = nlt::cmd_zero_filter(c);
      std::cout << "alpha        L1(1/w)      L1(1/y)      bound        gap\n";
      for (const auto& row : r.rows) {
        std::cout << std::left << std::setw(13) << row.alpha << std::setw(13)
                  << row.l1_inv_w << std::setw(13) << row.l1_inv_y
                  << std::setw(13) << row.kuznetsov_bound << row.filtered_gap
                  << '\n';
      }
      if (r.fit) std::cout << "fitted rate " << r.fit->slope << '\n';
      break;
    }
    case nlt::Command::FilterStudy: {
      const auto r = nlt::cmd_filter_study(c);
      for (const auto& row : r.rows) {
        std::cout << std::left << std::setw(8) << row.kernel << " alpha "
                  << std::setw(12) << row.alpha << " gap " << row.filtered_gap
                  << '\n';
      }
      for (const auto& s : r.summary) {
        std::cout << s.kernel << ": gap ratio " << s.gap_ratio
                  << (s.gap_shrinks ? "" : "  (gap does not shrink)") << '\n';
      }
      break;
    }
    case nlt::Command::Verify: {
      const auto r = nlt::cmd_verify(c);
      for (const auto& chk : r.checks) {
        std::cout << std::left << std::setw(30) << chk.check << chk.violations
                  << '/' << chk.trials << " violations";
        if (chk.violations) std::cout << " (first at seed " << chk.first_failure_seed << ")";
        std::cout << '\n';
      }
      std::cout << std::left << std::setw(30) << r.negative_control.check
                << r.negative_control.violations << '/'
                << r.negative_control.trials << " violations (expected > 0)\n";
      if (!r.passed()) {
        std::cerr << "verification failed (seed " << c.seed << ")\n";
        return kVerificationFailed;
      }
      break;
    }
    case nlt::Command::Simulate: {
      const auto r = nlt::cmd_simulate(c);
      std::cout << "cells " << r.grid.n_cells << ", levels "
                << r.trajectory.size() << ", t = " << r.trajectory.back().t
                << '\n';
      break;
    }
  }
  if (!c.output_dir.empty()) std::cout << "wrote " << c.output_dir.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Lagrangian traffic-flow experiments"};
  app.require_subcommand(1);
  Flags flags;

  auto* compare = app.add_subcommand("compare-ftl", "three FtL models on one profile");
  auto* zero = app.add_subcommand("zero-filter", "alpha sweep against an Engquist-Osher reference");
  auto* study = app.add_subcommand("filter-study", "filtered gap per kernel and alpha");
  auto* verify = app.add_subcommand("verify", "seeded property campaigns");
  auto* simulate = app.add_subcommand("simulate", "single pair-scheme run");
  for (auto* cmd : {compare, zero, study, verify, simulate}) add_common(cmd, flags);
  for (auto* cmd : {zero, study}) {
    cmd->add_option("--alphas", flags.alphas, "comma-separated filter sizes");
  }
  study->add_option("--kernels", flags.kernels, "comma-separated kernel names");
  study->add_flag("--paper-scale", flags.paper_scale,
                  "use the full ell = 1/10000 schedule");
  zero->add_flag("--paper-scale", flags.paper_scale, "accepted for symmetry");
  verify->add_option("--seed", flags.seed, "campaign seed");
  verify->add_option("--trials", flags.trials, "trials per campaign");
  simulate->add_option("--record-every", flags.record_every,
                       "record every n-th level (0: first and last)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const nlt::Command command =
        nlt::command_from_name(app.get_subcommands().front()->get_name());
    return run_command(command, flags);
  } catch (const nlt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
