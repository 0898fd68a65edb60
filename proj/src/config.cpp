#include "nlt/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nlt/kernels.hpp"
#include "nlt/velocity.hpp"

namespace nlt {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double parse_plain(std::string_view text, const std::string& where) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(where, "'" + std::string(text) + "' is not a number");
  }
  return v;
}

std::size_t parse_count(std::string_view text, const std::string& where) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(where,
                      "'" + std::string(text) + "' is not a nonnegative integer");
  }
  return v;
}

bool parse_bool(std::string_view text, const std::string& where) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(where, "'" + std::string(text) + "' is not a boolean");
}

std::vector<double> parse_numbers(std::string_view text,
                                  const std::string& where) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_number(item, where));
  return out;
}

}  // namespace

double parse_number(std::string_view text, const std::string& where) {
  text = trim(text);
  // Accept fractions such as 1/2000.
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_plain(text, where);
  const double num = parse_plain(trim(text.substr(0, slash)), where);
  const double den = parse_plain(trim(text.substr(slash + 1)), where);
  if (den == 0.0) throw ConfigError(where, "division by zero in '" + std::string(text) + "'");
  return num / den;
}

Command command_from_name(std::string_view name) {
  if (name == "compare-ftl") return Command::CompareFtl;
  if (name == "zero-filter") return Command::ZeroFilter;
  if (name == "filter-study") return Command::FilterStudy;
  if (name == "verify") return Command::Verify;
  if (name == "simulate") return Command::Simulate;
  throw InvalidArgument("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::CompareFtl: return "compare-ftl";
    case Command::ZeroFilter: return "zero-filter";
    case Command::FilterStudy: return "filter-study";
    case Command::Verify: return "verify";
    case Command::Simulate: return "simulate";
  }
  return "?";
}

DensityProfile ExperimentConfig::profile() const {
  return DensityProfile(profile_breakpoints, profile_values);
}

void ExperimentConfig::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0)) {
      throw ConfigError(field, "must be positive, got " + std::to_string(v));
    }
  };
  positive(alpha, "alpha");
  for (double al : alphas) positive(al, "alphas");
  positive(ell, "ell");
  positive(t_end, "t_end");
  positive(safety, "safety");
  positive(ref_safety, "ref_safety");
  if (safety > 1.0) throw ConfigError("safety", "must not exceed 1");
  if (ref_safety > 1.0) throw ConfigError("ref_safety", "must not exceed 1");
  if (dt < 0.0) throw ConfigError("dt", "must be nonnegative");
  if (!(b > a)) throw ConfigError("a, b", "need a < b");
  if (ref_refine == 0) throw ConfigError("ref_refine", "must be at least 1");
  if (trials == 0) throw ConfigError("trials", "must be at least 1");
  if (jobs == 0) throw ConfigError("jobs", "must be at least 1");
  try {
    Kernel::from_name(kernel);
    for (const auto& k : kernels) Kernel::from_name(k);
  } catch (const InvalidArgument& e) {
    throw ConfigError("kernel", e.what());
  }
  try {
    VelocityModel::from_name(velocity);
  } catch (const InvalidArgument& e) {
    throw ConfigError("velocity", e.what());
  }
  try {
    profile();
  } catch (const InvalidArgument& e) {
    throw ConfigError("profile", e.what());
  }
}

ExperimentConfig default_config(Command command) {
  ExperimentConfig c;
  switch (command) {
    case Command::CompareFtl:
      c.ell = 0.06;
      c.alpha = 0.5;
      c.t_end = 1.4;
      break;
    case Command::ZeroFilter:
      c.ell = 1.0 / 2000;
      c.t_end = 1.2;
      c.alphas = {1.0 / 2, 1.0 / 8, 1.0 / 32, 1.0 / 128};
      break;
    case Command::FilterStudy:
      c.ell = 1.0 / 2500;
      c.t_end = 1.2;
      c.alphas = {1.0 / 16, 1.0 / 64};
      break;
    case Command::Verify:
      break;
    case Command::Simulate:
      c.ell = 1.0 / 500;
      c.alpha = 1.0 / 8;
      c.t_end = 1.2;
      break;
  }
  return c;
}

void apply_paper_scale(ExperimentConfig& config, Command command) {
  config.paper_scale = true;
  if (command == Command::FilterStudy) {
    config.ell = 1.0 / 10000;
    config.alphas = {1.0 / 64, 1.0 / 256};
  }
}

void apply_setting(ExperimentConfig& c, std::string_view key,
                   std::string_view value, const std::string& where) {
  key = trim(key);
  value = trim(value);
  const std::string w = where + " (" + std::string(key) + ")";
  if (key == "kernel") {
    c.kernel = std::string(value);
  } else if (key == "kernels") {
    c.kernels.clear();
    for (auto k : split_list(value)) c.kernels.emplace_back(k);
    if (c.kernels.empty()) throw ConfigError(w, "kernel list is empty");
  } else if (key == "alpha") {
    c.alpha = parse_number(value, w);
  } else if (key == "alphas") {
    c.alphas = parse_numbers(value, w);
    if (c.alphas.empty()) throw ConfigError(w, "alpha list is empty");
  } else if (key == "ell") {
    c.ell = parse_number(value, w);
  } else if (key == "velocity") {
    c.velocity = std::string(value);
  } else if (key == "profile_breakpoints") {
    c.profile_breakpoints = parse_numbers(value, w);
  } else if (key == "profile_values") {
    c.profile_values = parse_numbers(value, w);
  } else if (key == "a") {
    c.a = parse_number(value, w);
  } else if (key == "b") {
    c.b = parse_number(value, w);
  } else if (key == "t_end") {
    c.t_end = parse_number(value, w);
  } else if (key == "safety") {
    c.safety = parse_number(value, w);
  } else if (key == "boundary") {
    if (value == "ghost") {
      c.boundary = BoundaryMode::Ghost;
    } else if (value == "fold") {
      c.boundary = BoundaryMode::Fold;
    } else {
      throw ConfigError(w, "boundary must be 'ghost' or 'fold'");
    }
  } else if (key == "output_dir") {
    c.output_dir = std::string(value);
  } else if (key == "record_every") {
    c.record_every = parse_count(value, w);
  } else if (key == "dt") {
    c.dt = parse_number(value, w);
  } else if (key == "ref_refine") {
    c.ref_refine = parse_count(value, w);
  } else if (key == "ref_safety") {
    c.ref_safety = parse_number(value, w);
  } else if (key == "seed") {
    c.seed = parse_count(value, w);
  } else if (key == "trials") {
    c.trials = parse_count(value, w);
  } else if (key == "jobs") {
    c.jobs = parse_count(value, w);
  } else if (key == "paper_scale") {
    c.paper_scale = parse_bool(value, w);
  } else {
    throw ConfigError(where, "unknown key '" + std::string(key) + "'");
  }
}

void apply_config_text(ExperimentConfig& config, std::string_view text,
                       const std::string& source) {
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where, "expected 'key = value'");
    }
    apply_setting(config, view.substr(0, eq), view.substr(eq + 1), where);
  }
}

void apply_config_file(ExperimentConfig& config,
                       const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str(), path.string());
}

}  // namespace nlt
