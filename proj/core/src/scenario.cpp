#include "qsync/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace qsync {

namespace {

std::string join_issues(const std::vector<ScenarioIssue>& issues) {
  std::ostringstream out;
  out << "invalid scenario:";
  for (const auto& issue : issues) out << "\n  " << issue.key << ": " << issue.message;
  return out.str();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

template <typename T>
bool parse_unsigned(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_list(std::string_view s, std::vector<double>& out) {
  out.clear();
  s = trim(s);
  if (s.empty()) return true;
  while (true) {
    const auto comma = s.find(',');
    double x = 0.0;
    if (!parse_double(s.substr(0, comma), x)) return false;
    out.push_back(x);
    if (comma == std::string_view::npos) return true;
    s = s.substr(comma + 1);
  }
}

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

ScenarioError::ScenarioError(std::vector<ScenarioIssue> issues)
    : Error(ErrorCode::Parse, join_issues(issues)), issues_(std::move(issues)) {}

std::vector<ScenarioIssue> validate_scenario(const ScenarioConfig& c) {
  std::vector<ScenarioIssue> issues;
  auto need_positive = [&](const char* key, double x) {
    if (!positive_finite(x)) issues.push_back({key, "must be a positive finite number"});
  };
  if (c.graph.empty()) issues.push_back({"graph", "must name a file or builtin:standin10"});
  need_positive("omega", c.omega);
  need_positive("tau", c.tau);
  need_positive("delta", c.delta);
  need_positive("M", c.M);
  need_positive("zoom.mu", c.zoom_mu);
  need_positive("zoom.eps_slack", c.eps_slack);
  if (!(c.eps_norm >= 0.0) || !std::isfinite(c.eps_norm)) {
    issues.push_back({"eps_norm", "must be >= 0 (0 selects the default)"});
  }
  if (positive_finite(c.M) && positive_finite(c.delta)) {
    if (!(c.M > c.delta)) issues.push_back({"M", "must exceed delta"});
    if (c.zoom_mode == ZoomMode::Adjustable && !(c.M > 2.0 * c.delta)) {
      issues.push_back({"zoom.mode", "adjustable zoom requires M > 2*delta"});
    }
  }
  if (positive_finite(c.omega) && positive_finite(c.tau) &&
      is_degenerate_sampling(c.omega, c.tau)) {
    issues.push_back({"tau", "lies on a window boundary tau = k*pi/omega"});
  }
  if (!positive_finite(c.horizon)) {
    issues.push_back({"horizon", "must be a positive finite number"});
  } else if (positive_finite(c.tau)) {
    const double steps = c.horizon / c.tau;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
      issues.push_back({"horizon", "must be an integer multiple of tau"});
    }
  }
  const InitialConfig& init = c.initial;
  if (init.mode == InitialMode::Seeded) {
    if (!(init.fraction >= 0.0 && init.fraction <= 1.0)) {
      issues.push_back({"initial.fraction", "must lie in [0, 1]"});
    }
    if (!(init.amplitude >= 0.0) || !std::isfinite(init.amplitude)) {
      issues.push_back({"initial.amplitude", "must be >= 0"});
    }
  } else {
    if (init.r.empty()) issues.push_back({"initial.r", "required when initial.mode = explicit"});
    if (init.v.empty()) issues.push_back({"initial.v", "required when initial.mode = explicit"});
    if (!init.r.empty() && !init.v.empty() && init.r.size() != init.v.size()) {
      issues.push_back({"initial.v", "must have as many entries as initial.r"});
    }
    for (double x : init.r) {
      if (!std::isfinite(x)) issues.push_back({"initial.r", "entries must be finite"});
    }
    for (double x : init.v) {
      if (!std::isfinite(x)) issues.push_back({"initial.v", "entries must be finite"});
    }
  }
  return issues;
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig c;
  std::vector<ScenarioIssue> issues;
  std::map<std::string, std::size_t> seen;
  std::string section;
  std::size_t line_no = 0;

  auto bad_type = [&](const std::string& key, const char* what) {
    issues.push_back({key, std::string("expected ") + what});
  };

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({where, "unterminated section header"});
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "zoom" && section != "initial" && !section.empty()) {
        issues.push_back({where, "unknown section [" + section + "]"});
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({where, "expected key = value"});
      continue;
    }
    std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    if (auto [it, fresh] = seen.emplace(key, line_no); !fresh) {
      issues.push_back({key, "duplicate key (first set on line " + std::to_string(it->second) + ")"});
      continue;
    }

    auto number = [&](double& slot) {
      if (!parse_double(value, slot)) bad_type(key, "a number");
    };
    if (key == "graph") {
      c.graph = std::string(value);
    } else if (key == "omega") {
      number(c.omega);
    } else if (key == "tau") {
      number(c.tau);
    } else if (key == "delta") {
      number(c.delta);
    } else if (key == "M") {
      number(c.M);
    } else if (key == "zoom.mode") {
      if (value == "fixed") {
        c.zoom_mode = ZoomMode::Fixed;
      } else if (value == "adjustable") {
        c.zoom_mode = ZoomMode::Adjustable;
      } else {
        bad_type(key, "fixed or adjustable");
      }
    } else if (key == "zoom.mu") {
      number(c.zoom_mu);
    } else if (key == "zoom.eps_slack") {
      number(c.eps_slack);
    } else if (key == "eps_norm") {
      number(c.eps_norm);
    } else if (key == "horizon") {
      number(c.horizon);
    } else if (key == "dense") {
      if (!parse_unsigned(value, c.dense)) bad_type(key, "a nonnegative integer");
    } else if (key == "seed") {
      if (!parse_unsigned(value, c.seed)) bad_type(key, "a nonnegative integer");
    } else if (key == "allow_infeasible") {
      if (value == "true") {
        c.allow_infeasible = true;
      } else if (value == "false") {
        c.allow_infeasible = false;
      } else {
        bad_type(key, "true or false");
      }
    } else if (key == "initial.mode") {
      if (value == "seeded") {
        c.initial.mode = InitialMode::Seeded;
      } else if (value == "explicit") {
        c.initial.mode = InitialMode::Explicit;
      } else {
        bad_type(key, "seeded or explicit");
      }
    } else if (key == "initial.fraction") {
      number(c.initial.fraction);
    } else if (key == "initial.amplitude") {
      number(c.initial.amplitude);
    } else if (key == "initial.r") {
      if (!parse_list(value, c.initial.r)) bad_type(key, "a comma-separated list of numbers");
    } else if (key == "initial.v") {
      if (!parse_list(value, c.initial.v)) bad_type(key, "a comma-separated list of numbers");
    } else {
      issues.push_back({key, "unknown key"});
    }
  }

  // Only report invariant violations for values that parsed.
  for (auto& issue : validate_scenario(c)) {
    bool already = false;
    for (const auto& prior : issues) already = already || prior.key == issue.key;
    if (!already) issues.push_back(std::move(issue));
  }
  if (!issues.empty()) throw ScenarioError(std::move(issues));
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ScenarioConfig c = parse_scenario(text.str());
  if (c.graph.rfind("builtin:", 0) != 0) {
    const std::filesystem::path graph(c.graph);
    if (graph.is_relative()) c.graph = (path.parent_path() / graph).lexically_normal().string();
  }
  return c;
}

std::string emit_scenario(const ScenarioConfig& c) {
  std::ostringstream out;
  out << "graph = " << c.graph << '\n'
      << "omega = " << format_double(c.omega) << '\n'
      << "tau = " << format_double(c.tau) << '\n'
      << "delta = " << format_double(c.delta) << '\n'
      << "M = " << format_double(c.M) << '\n'
      << "eps_norm = " << format_double(c.eps_norm) << '\n'
      << "horizon = " << format_double(c.horizon) << '\n'
      << "dense = " << c.dense << '\n'
      << "seed = " << c.seed << '\n'
      << "allow_infeasible = " << (c.allow_infeasible ? "true" : "false") << '\n'
      << "\n[zoom]\n"
      << "mode = " << (c.zoom_mode == ZoomMode::Fixed ? "fixed" : "adjustable") << '\n'
      << "mu = " << format_double(c.zoom_mu) << '\n'
      << "eps_slack = " << format_double(c.eps_slack) << '\n'
      << "\n[initial]\n";
  if (c.initial.mode == InitialMode::Seeded) {
    out << "mode = seeded\n"
        << "fraction = " << format_double(c.initial.fraction) << '\n'
        << "amplitude = " << format_double(c.initial.amplitude) << '\n';
  } else {
    out << "mode = explicit\n"
        << "r = " << format_list(c.initial.r) << '\n'
        << "v = " << format_list(c.initial.v) << '\n';
  }
  return out.str();
}

DirectedGraph scenario_graph(const ScenarioConfig& c) {
  if (c.graph == "builtin:standin10") return standin_graph();
  if (c.graph.rfind("builtin:", 0) == 0) {
    throw Error(ErrorCode::InvalidArgument, "unknown builtin graph " + c.graph);
  }
  return read_graph_file(c.graph);
}

ModelParams model_params(const ScenarioConfig& c) {
  ModelParams p{c.omega, c.tau, c.delta, c.M};
  p.eps_slack = c.eps_slack;
  p.eps_norm = c.eps_norm;
  p.allow_infeasible = c.allow_infeasible;
  return p;
}

RunSettings run_settings(const ScenarioConfig& c) {
  RunSettings run;
  run.mode = c.zoom_mode;
  run.mu = c.zoom_mu;
  run.steps = static_cast<std::size_t>(std::llround(c.horizon / c.tau));
  run.dense = c.dense;
  return run;
}

Vec initial_state(const ScenarioConfig& c, const Model& model) {
  const auto n = static_cast<Eigen::Index>(model.sys.nodes());
  if (c.initial.mode == InitialMode::Explicit) {
    if (static_cast<Eigen::Index>(c.initial.r.size()) != n ||
        static_cast<Eigen::Index>(c.initial.v.size()) != n) {
      throw Error(ErrorCode::InvalidArgument,
                  "initial.r and initial.v must have one entry per node (" +
                      std::to_string(n) + ")");
    }
    Vec X(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i) = c.initial.r[static_cast<std::size_t>(i)];
      X(n + i) = c.initial.v[static_cast<std::size_t>(i)];
    }
    return X;
  }
  return seeded_initial_state(model, c.zoom_mu, c.initial.fraction, c.initial.amplitude, c.seed);
}

}  // namespace qsync
