#pragma once

#include <filesystem>
#include <iosfwd>

#include "qsync/simulator.hpp"

namespace qsync {

struct PlotFiles {
  std::filesystem::path positions;
  std::filesystem::path velocities;
  std::filesystem::path error;
};

/// positions.csv (t, r_1..r_n), velocities.csv (t, v_1..v_n) and error.csv
/// (t, err_inf, plus mu for adjustable zoom). Values use 17 significant
/// digits; an empty trace yields header-only files. Throws Error(Io) when
/// the directory cannot be created or written.
PlotFiles emit_plot_data(const SimulationTrace& trace, const std::filesystem::path& dir);

/// t, r_1..r_n, v_1..v_n, mu, stage, err_inf
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

/// kind, k, t, value, detail
void write_events_csv(std::ostream& out, const SimulationTrace& trace);

}  // namespace qsync
