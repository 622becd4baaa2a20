#pragma once

#include <string>
#include <vector>

#include "attkit_tools/trace_io.hpp"

namespace attkit::tools {

/// Renders the attitude and bias error histories of a parsed trace as a
/// two-panel SVG (log scale on the vertical axes, one polyline per mode).
/// Works from the trace rows alone, so plots reproduce from archived CSVs.
std::string render_error_plot(const std::vector<TraceRow>& rows, const std::string& title);

void write_error_plot(const std::string& path, const std::vector<TraceRow>& rows,
                      const std::string& title);

}  // namespace attkit::tools
