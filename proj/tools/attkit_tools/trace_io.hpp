#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "attkit/sim.hpp"

namespace attkit::tools {

/// Column schema of trace.csv. Long format: one row per record and mode.
/// Floats carry 17 significant digits, so parsing a trace back reproduces
/// the exact doubles.
inline constexpr const char* kTraceHeader =
    "t,j,mode,attitude_err,bias_err,phi,q,l0,jump";

void write_trace_csv(std::ostream& out, const RunResult& result);
void write_trace_csv(const std::string& path, const RunResult& result);

/// One parsed trace row; the reader is the plot tool's only input.
struct TraceRow {
  double t = 0.0;
  long j = 0;
  std::string mode;
  double attitude_err = 0.0;
  double bias_err = 0.0;
  double phi = 0.0;
  std::size_t q = 0;
  double l0 = 0.0;
  bool jump = false;
};
std::vector<TraceRow> read_trace_csv(std::istream& in);
std::vector<TraceRow> read_trace_csv(const std::string& path);

nlohmann::json summary_to_json(const RunResult& result);
void write_summary_json(const std::string& path, const RunResult& result);

}  // namespace attkit::tools
