#include "attkit_tools/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "attkit_tools/scenario_json.hpp"

namespace attkit::tools {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& out, const RunResult& result) {
  out << kTraceHeader << "\n";
  for (const TraceRecord& row : result.trace) {
    for (std::size_t im = 0; im < row.modes.size(); ++im) {
      const ModeTraceRecord& mr = row.modes[im];
      out << fmt17(row.t) << ',' << mr.jumps << ',' << to_string(result.config.modes[im]) << ','
          << fmt17(mr.attitude_err) << ',' << fmt17(mr.bias_err) << ',' << fmt17(mr.phi) << ','
          << mr.q << ',' << fmt17(mr.l0) << ',' << (mr.jumped ? 1 : 0) << "\n";
    }
  }
}

void write_trace_csv(const std::string& path, const RunResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("trace: cannot write '" + path + "'");
  write_trace_csv(out, result);
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("trace: empty file");
  if (line != kTraceHeader)
    throw std::invalid_argument("trace: unexpected header '" + line + "'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    TraceRow row;
    auto next = [&](const char* what) {
      if (!std::getline(ss, field, ','))
        throw std::invalid_argument("trace: line " + std::to_string(lineno) + " is missing " +
                                    what);
      return field;
    };
    row.t = std::stod(next("t"));
    row.j = std::stol(next("j"));
    row.mode = next("mode");
    row.attitude_err = std::stod(next("attitude_err"));
    row.bias_err = std::stod(next("bias_err"));
    row.phi = std::stod(next("phi"));
    row.q = static_cast<std::size_t>(std::stoul(next("q")));
    row.l0 = std::stod(next("l0"));
    row.jump = next("jump") == "1";
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("trace: cannot open '" + path + "'");
  return read_trace_csv(in);
}

nlohmann::json summary_to_json(const RunResult& result) {
  nlohmann::json j;
  j["scenario"] = result.config.name;
  j["config"] = scenario_to_json(result.config);
  j["warp_clamp_events"] = result.warp_clamp_events;
  j["truth_max_orth_drift"] = result.truth_max_orth_drift;
  nlohmann::json modes = nlohmann::json::array();
  for (std::size_t im = 0; im < result.config.modes.size(); ++im) {
    const ModeStats& st = result.stats[im];
    nlohmann::json m;
    m["mode"] = to_string(result.config.modes[im]);
    m["settling_time"] = st.settling_time;
    m["final_attitude_err"] = st.final_attitude_err;
    m["final_bias_err"] = st.final_bias_err;
    m["jump_count"] = st.jump_count;
    m["l0_initial"] = st.l0_initial;
    m["max_l0_flow_increase"] = st.max_l0_flow_increase;
    m["min_jump_drop"] = st.jump_count > 0 ? st.min_jump_drop : 0.0;
    m["max_orth_drift"] = st.max_orth_drift;
    m["renorm_count"] = st.renorm_count;
    m["jumps_after_converged"] = st.jumps_after_converged;
    m["max_bhat_norm"] = st.max_bhat_norm;
    modes.push_back(std::move(m));
  }
  j["modes"] = std::move(modes);
  return j;
}

void write_summary_json(const std::string& path, const RunResult& result) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("summary: cannot write '" + path + "'");
  out << summary_to_json(result).dump(2) << "\n";
}

}  // namespace attkit::tools
