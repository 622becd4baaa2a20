#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"

#include "attkit/checks.hpp"
#include "attkit/sampling.hpp"
#include "attkit_tools/scenario_json.hpp"
#include "attkit_tools/svg_plot.hpp"
#include "attkit_tools/trace_io.hpp"

namespace fs = std::filesystem;
using namespace attkit;
using nlohmann::json;

namespace {

void emit_error(const std::string& kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

struct RunOverrides {
  std::optional<double> dt, t_end, k, delta_fraction;
  std::optional<std::string> design;
  std::vector<std::string> modes;

  void apply(ScenarioConfig& c) const {
    if (dt) c.dt = *dt;
    if (t_end) c.t_end = *t_end;
    if (k) c.k = *k;
    if (delta_fraction) c.delta_fraction = *delta_fraction;
    if (design) {
      static const std::map<std::string, ObserverMode> byDesign{
          {"d1", ObserverMode::Hybrid1},
          {"d2", ObserverMode::Hybrid2},
          {"d3", ObserverMode::Hybrid3},
          {"d4", ObserverMode::Hybrid4}};
      const auto it = byDesign.find(*design);
      if (it == byDesign.end())
        throw std::invalid_argument("unknown design '" + *design + "' (use d1..d4)");
      c.modes = {it->second};
    }
    if (!modes.empty()) {
      c.modes.clear();
      for (const std::string& m : modes) {
        const auto mode = parse_observer_mode(m);
        if (!mode) throw std::invalid_argument("unknown mode '" + m + "'");
        c.modes.push_back(*mode);
      }
    }
  }
};

void add_override_flags(CLI::App* cmd, RunOverrides& ov) {
  cmd->add_option("--dt", ov.dt, "Integrator step [s]");
  cmd->add_option("--t-end", ov.t_end, "Simulation horizon [s]");
  cmd->add_option("--design", ov.design, "Restrict to one design (d1|d2|d3|d4)");
  cmd->add_option("--k", ov.k, "Warp gain");
  cmd->add_option("--delta-frac", ov.delta_fraction, "Hysteresis gap as a fraction of the bound");
  cmd->add_option("--modes", ov.modes, "Observer modes to co-simulate")->delimiter(',');
}

void execute_and_write(const ScenarioConfig& config, const fs::path& outdir) {
  fs::create_directories(outdir);
  const RunResult result = run(config);
  tools::write_trace_csv((outdir / "trace.csv").string(), result);
  tools::write_summary_json((outdir / "summary.json").string(), result);

  static std::mutex io_mutex;
  std::lock_guard<std::mutex> lock(io_mutex);
  std::cout << config.name << ": wrote " << (outdir / "trace.csv").string() << "\n";
  const Summary s = metrics(result);
  for (const ModeSummary& m : s.modes) {
    std::cout << "  " << m.mode << ": settling ";
    if (std::isfinite(m.stats.settling_time))
      std::cout << m.stats.settling_time << " s";
    else
      std::cout << "never";
    std::cout << ", final attitude_err " << m.stats.final_attitude_err << ", final bias_err "
              << m.stats.final_bias_err << ", jumps " << m.stats.jump_count << "\n";
  }
}

std::string safe_dir_name(const std::string& name) {
  std::string out = name.empty() ? "scenario" : name;
  for (char& c : out)
    if (c == '/' || c == '\\' || c == ':') c = '_';
  return out;
}

void run_many(const std::vector<ScenarioConfig>& configs, const fs::path& outroot, int jobs) {
  if (configs.size() == 1) {
    execute_and_write(configs[0], outroot);
    return;
  }
  // Several scenarios: one subdirectory each, optionally in parallel.
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::vector<std::string> errors;
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      try {
        execute_and_write(configs[i], outroot / safe_dir_name(configs[i].name));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        errors.push_back(configs[i].name + ": " + e.what());
      }
    }
  };
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (!errors.empty()) throw Fault("scenario failures: " + errors.front());
}

json design_report(const std::vector<Vec3>& inertial, const std::vector<double>& rho, double k,
                   double delta_fraction, std::size_t samples, std::uint64_t seed, int jobs) {
  json report;
  report["k"] = k;
  report["delta_fraction"] = delta_fraction;

  const WeightMatrix wv = WeightMatrix::from_vectors(inertial, rho);
  const WeightMatrix wi = WeightMatrix::identity();
  report["weight"]["eigenvalues"] = {wv.eigenvalue(0), wv.eigenvalue(1), wv.eigenvalue(2)};
  report["weight"]["xi"] = wv.xi();
  report["weight"]["lambda_max_bar"] = wv.lambda_max_bar();
  report["weight"]["k_bar"] = k_bar(wv.xi());
  report["weight"]["distinct_eigenvalues"] = wv.has_distinct_eigenvalues();

  for (Design d : {Design::D1, Design::D2, Design::D3, Design::D4}) {
    const bool direct = d == Design::D3 || d == Design::D4;
    const WeightMatrix& w = direct ? wv : wi;
    json dj;
    try {
      const HybridConfig c = make_config(d, w, k, delta_fraction);
      dj["delta_bound"] = c.delta_bound;
      dj["delta"] = c.delta;
      dj["q_count"] = c.q_count();
      if (direct) {
        dj["lambda"] = lambda_branch(w);
        const Vec3 u = c.warp.nu(0);
        dj["axis"] = {u.x, u.y, u.z};
      }
      const AlphaEstimate est =
          estimate_alphas(c.warp, c.kind, c.delta, samples, seed, jobs);
      dj["alpha1"] = est.alpha1;
      dj["alpha2"] = est.alpha2;
      dj["alpha3_sampled"] = est.alpha3;
      dj["alpha4_sampled"] = est.alpha4;
      dj["alpha1_sampled"] = est.alpha1_sampled;
      dj["alpha2_sampled"] = est.alpha2_sampled;
      dj["flow_samples"] = est.flow_samples;

      // Transport-matrix conditioning over random states.
      std::mt19937_64 rng(seed + 999);
      std::uniform_int_distribution<std::size_t> pick_q(0, c.q_count() - 1);
      double min_det = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < std::min<std::size_t>(samples, 100000); ++i) {
        const Rotation x = random_rotation(rng);
        min_det = std::min(min_det,
                           std::abs(theta_matrix(c.warp, x, pick_q(rng)).determinant()));
      }
      dj["min_abs_det_theta"] = min_det;
    } catch (const std::invalid_argument& e) {
      dj["error"] = e.what();
    }
    report["designs"][to_string(d)] = std::move(dj);
  }
  report["warp_clamp_events"] = warp_clamp_count();
  return report;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Hybrid attitude and gyro-bias observers on SO(3): simulation and verification"};
  app.require_subcommand(1);

  // run
  auto* cmd_run = app.add_subcommand("run", "Execute scenario files (trace.csv + summary.json)");
  std::vector<std::string> scenario_paths;
  std::string out_dir = "out";
  int jobs = 1;
  RunOverrides run_ov;
  cmd_run->add_option("scenario", scenario_paths, "Scenario JSON file(s)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_run->add_option("--out", out_dir, "Output directory");
  cmd_run->add_option("--jobs", jobs, "Concurrent scenarios");
  add_override_flags(cmd_run, run_ov);

  // example
  auto* cmd_example = app.add_subcommand("example", "Run a built-in study (1 or 2)");
  int example_id = 1;
  std::string example_out = "out";
  std::string example_save;
  RunOverrides example_ov;
  cmd_example->add_option("which", example_id, "Study number")->required()->check(CLI::Range(1, 2));
  cmd_example->add_option("--out", example_out, "Output directory");
  cmd_example->add_option("--save-scenario", example_save,
                          "Also write the scenario as a JSON file");
  add_override_flags(cmd_example, example_ov);

  // design-report
  auto* cmd_report = app.add_subcommand(
      "design-report", "Gap bounds, axis selection and sampled coefficients for a vector set");
  std::string report_scenario;
  std::string report_out;
  double report_k = 0.95 / std::sqrt(5.0);
  double report_frac = 0.8;
  std::size_t report_samples = 200000;
  std::uint64_t report_seed = 20250810;
  int report_jobs = 1;
  cmd_report->add_option("--scenario", report_scenario,
                         "Take vectors, weights and gains from this scenario file")
      ->check(CLI::ExistingFile);
  cmd_report->add_option("--k", report_k, "Warp gain");
  cmd_report->add_option("--delta-frac", report_frac, "Gap fraction");
  cmd_report->add_option("--samples", report_samples, "Sampling effort");
  cmd_report->add_option("--seed", report_seed, "Sampling seed");
  cmd_report->add_option("--jobs", report_jobs, "Sampling threads");
  cmd_report->add_option("--out", report_out, "Write the report here instead of stdout");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "Run the full property suite");
  std::uint64_t verify_seed = 20250810;
  bool verify_quick = false;
  int verify_jobs = 1;
  cmd_verify->add_option("--seed", verify_seed, "Sampling seed");
  cmd_verify->add_flag("--quick", verify_quick, "Reduced sample counts");
  cmd_verify->add_option("--jobs", verify_jobs, "Sampling threads");

  // plot
  auto* cmd_plot = app.add_subcommand("plot", "Render attitude/bias error SVG from a trace");
  std::string plot_trace, plot_out = "plot.svg", plot_title;
  cmd_plot->add_option("--trace", plot_trace, "trace.csv produced by run/example")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_plot->add_option("--out", plot_out, "Output SVG path");
  cmd_plot->add_option("--title", plot_title, "Plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints usage/help text
    if (code == 0) return 0;       // help or version request
    emit_error("validation", e.what());
    return 1;
  }

  if (cmd_run->parsed()) {
    std::vector<ScenarioConfig> configs;
    for (const std::string& path : scenario_paths) {
      ScenarioConfig c = tools::load_scenario(path);
      run_ov.apply(c);
      c.validate();
      configs.push_back(std::move(c));
    }
    run_many(configs, out_dir, jobs);
    return 0;
  }

  if (cmd_example->parsed()) {
    ScenarioConfig c = default_example(example_id);
    example_ov.apply(c);
    c.validate();
    if (!example_save.empty()) {
      tools::save_scenario(c, example_save);
      std::cout << "wrote " << example_save << "\n";
    }
    execute_and_write(c, example_out);
    return 0;
  }

  if (cmd_report->parsed()) {
    std::vector<Vec3> inertial;
    std::vector<double> rho;
    if (!report_scenario.empty()) {
      const ScenarioConfig c = tools::load_scenario(report_scenario);
      inertial = c.inertial;
      rho = c.rho;
      report_k = c.k;
      report_frac = c.delta_fraction;
    } else {
      const ScenarioConfig c = default_example(2);
      inertial = c.inertial;
      rho = c.rho;
    }
    const json report =
        design_report(inertial, rho, report_k, report_frac, report_samples, report_seed,
                      report_jobs);
    if (report_out.empty()) {
      std::cout << report.dump(2) << "\n";
    } else {
      std::ofstream out(report_out);
      if (!out) throw std::runtime_error("design-report: cannot write '" + report_out + "'");
      out << report.dump(2) << "\n";
      std::cout << "wrote " << report_out << "\n";
    }
    return 0;
  }

  if (cmd_verify->parsed()) {
    CheckOptions opt;
    opt.seed = verify_seed;
    opt.quick = verify_quick;
    opt.threads = verify_jobs;
    const auto start = std::chrono::steady_clock::now();
    const CheckList results = run_all_checks(opt);
    std::size_t failed = 0;
    for (const CheckResult& c : results) {
      std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " - " << c.detail << "\n";
      if (!c.passed) ++failed;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << results.size() - failed << "/" << results.size() << " checks passed in "
              << secs << " s\n";
    return failed == 0 ? 0 : 1;
  }

  if (cmd_plot->parsed()) {
    const std::vector<tools::TraceRow> rows = tools::read_trace_csv(plot_trace);
    const std::string title =
        plot_title.empty() ? fs::path(plot_trace).filename().string() : plot_title;
    tools::write_error_plot(plot_out, rows, title);
    std::cout << "wrote " << plot_out << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::invalid_argument& e) {
    emit_error("validation", e.what());
    return 1;
  } catch (const Fault& e) {
    emit_error("fault", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("runtime", e.what());
    return 2;
  }
}
