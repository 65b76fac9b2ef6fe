#pragma once

#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "solitonflow/analyze.hpp"
#include "solitonflow/model.hpp"

namespace solitonflow {

/// Streaming CSV writer with a fixed column order and fixed float
/// formatting (17 significant digits), so identical configs produce
/// byte-identical files.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void header(const std::vector<std::string>& names);
  void row(std::span<const double> values);

 private:
  std::FILE* f_ = nullptr;
};

/// Column names for a trajectory CSV with r factors:
/// t, g_1..g_r, gdot_1..gdot_r, u, udot, xi, trL, Rbar, Lcal, H,
/// Xtilde_1..r, Ytilde_1..r, res2.
std::vector<std::string> trajectory_csv_header(int r);

struct ReportMeta {
  std::string system;
  std::string mode;
  std::string preset;
  std::string config_echo;  // raw config text, optional
};

/// Serialize a diagnostics report (with run metadata) as JSON.
std::string report_json(const ReportMeta& meta, const DiagnosticsReport& report);

/// Serialize a Ricci-flat convergence report as JSON.
std::string report_json(const ReportMeta& meta, const Trajectory& traj,
                        const RicciFlatConvergence& conv);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace solitonflow
