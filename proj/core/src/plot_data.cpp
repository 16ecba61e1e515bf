#include "qsync/plot_data.hpp"

#include <fstream>
#include <limits>
#include <ostream>
#include <string>

namespace qsync {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.precision(std::numeric_limits<double>::max_digits10);
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_header(std::ostream& out, const char* prefix, std::size_t n) {
  for (std::size_t i = 1; i <= n; ++i) out << ',' << prefix << i;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

}  // namespace

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  const auto n = static_cast<Eigen::Index>(trace.nodes);
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << 't';
  write_header(out, "r_", trace.nodes);
  write_header(out, "v_", trace.nodes);
  out << ",mu,stage,err_inf\n";
  for (const auto& row : trace.rows) {
    out << row.t;
    for (Eigen::Index i = 0; i < 2 * n; ++i) out << ',' << row.X(i);
    out << ',' << row.mu << ',' << to_string(row.stage) << ',' << row.err_inf << '\n';
  }
  out.precision(precision);
}

void write_events_csv(std::ostream& out, const SimulationTrace& trace) {
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "kind,k,t,value,detail\n";
  for (const auto& e : trace.events) {
    out << to_string(e.kind) << ',' << e.k << ',' << e.t << ',' << e.value << ','
        << csv_field(e.detail) << '\n';
  }
  out.precision(precision);
}

PlotFiles emit_plot_data(const SimulationTrace& trace, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  PlotFiles files{dir / "positions.csv", dir / "velocities.csv", dir / "error.csv"};
  const auto n = static_cast<Eigen::Index>(trace.nodes);
  const bool with_mu = trace.mode == ZoomMode::Adjustable;

  auto pos = open_csv(files.positions);
  auto vel = open_csv(files.velocities);
  auto err = open_csv(files.error);
  pos << 't';
  write_header(pos, "r_", trace.nodes);
  pos << '\n';
  vel << 't';
  write_header(vel, "v_", trace.nodes);
  vel << '\n';
  err << "t,err_inf" << (with_mu ? ",mu" : "") << '\n';

  for (const auto& row : trace.rows) {
    pos << row.t;
    vel << row.t;
    for (Eigen::Index i = 0; i < n; ++i) {
      pos << ',' << row.X(i);
      vel << ',' << row.X(n + i);
    }
    pos << '\n';
    vel << '\n';
    err << row.t << ',' << row.err_inf;
    if (with_mu) err << ',' << row.mu;
    err << '\n';
  }
  finish(pos, files.positions);
  finish(vel, files.velocities);
  finish(err, files.error);
  return files;
}

}  // namespace qsync
