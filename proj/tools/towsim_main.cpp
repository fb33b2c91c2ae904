// Command-line front end: single runs, controller comparisons, and scenario
// sweeps over a directory. Exit codes: 0 success, 2 configuration error,
// 3 fatal dynamics error.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "towsim/harness.hpp"

namespace fs = std::filesystem;
using namespace towsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDynamics = 3;

Scenario load_with_overrides(const std::string& path, double dt,
                             double duration) {
  Scenario s = load_scenario(path);
  if (dt > 0.0) s.dt_physics = dt;
  if (duration > 0.0) s.duration = duration;
  s.validate();
  return s;
}

void write_assumption_file(const Scenario& s, const fs::path& out_dir) {
  std::ofstream out(out_dir / (s.name + "_assumptions.txt"), std::ios::binary);
  write_assumptions(s, out);
}

int run_compare(const Scenario& scenario, const fs::path& out_dir,
                std::ostream& console) {
  std::vector<RunSummary> summaries;
  for (const ControllerKind kind :
       {ControllerKind::kPid, ControllerKind::kFsvc}) {
    summaries.push_back(run_scenario(scenario, kind, out_dir).summary);
  }
  std::ostringstream table;
  write_comparison(scenario.name, summaries, table);
  console << table.str();
  std::ofstream out(out_dir / (scenario.name + "_summary.txt"),
                    std::ios::binary);
  out << table.str();
  write_assumption_file(scenario, out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar tethered UAV-buoy towing simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  std::string controller_override;
  double dt_override = 0.0;
  double duration_override = 0.0;

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run one scenario with one controller");
  simulate->add_option("scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("--controller", controller_override,
                       "Controller (fsvc|pid); defaults to the scenario's");
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--dt", dt_override, "Physics time step override [s]");
  simulate->add_option("--duration", duration_override,
                       "Horizon override [s]");

  CLI::App* compare = app.add_subcommand(
      "compare", "Run both controllers and print the comparison table");
  compare->add_option("scenario", scenario_path, "Scenario file")->required();
  compare->add_option("--out", out_dir, "Output directory");
  compare->add_option("--dt", dt_override, "Physics time step override [s]");
  compare->add_option("--duration", duration_override,
                      "Horizon override [s]");

  std::string sweep_dir;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* sweep =
      app.add_subcommand("sweep", "Run every scenario file in a directory");
  sweep->add_option("dir", sweep_dir, "Directory of *.scn files")->required();
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--jobs", jobs, "Concurrent scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const Scenario scenario =
          load_with_overrides(scenario_path, dt_override, duration_override);
      const ControllerKind kind =
          controller_override.empty()
              ? scenario.controller
              : controller_kind_from_string(controller_override);
      const RunOutput out = run_scenario(scenario, kind, out_dir);
      write_summary(out.summary, std::cout);
      std::ofstream summary_file(
          fs::path(out_dir) /
              (scenario.name + "_" + to_string(kind) + "_summary.txt"),
          std::ios::binary);
      write_summary(out.summary, summary_file);
      write_assumption_file(scenario, out_dir);
      std::cout << "csv: " << out.csv_path.string() << "\n";
      return 0;
    }

    if (compare->parsed()) {
      const Scenario scenario =
          load_with_overrides(scenario_path, dt_override, duration_override);
      return run_compare(scenario, out_dir, std::cout);
    }

    if (sweep->parsed()) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(sweep_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".scn") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) {
        std::cerr << "no *.scn files in " << sweep_dir << "\n";
        return kExitConfig;
      }

      // Scenarios are independent; run them concurrently and print each
      // buffered console block in input order.
      std::vector<std::string> blocks(files.size());
      std::vector<int> codes(files.size(), 0);
      std::vector<std::thread> workers;
      std::atomic<size_t> next{0};
      const unsigned n_workers =
          std::max(1u, std::min<unsigned>(jobs, files.size()));
      for (unsigned w = 0; w < n_workers; ++w) {
        workers.emplace_back([&]() {
          for (size_t i = next.fetch_add(1); i < files.size();
               i = next.fetch_add(1)) {
            std::ostringstream console;
            try {
              const Scenario scenario = load_scenario(files[i].string());
              const RunOutput out =
                  run_scenario(scenario, scenario.controller, out_dir);
              write_summary(out.summary, console);
              std::ofstream summary_file(
                  fs::path(out_dir) / (scenario.name + "_" +
                                       to_string(scenario.controller) +
                                       "_summary.txt"),
                  std::ios::binary);
              write_summary(out.summary, summary_file);
              write_assumption_file(scenario, out_dir);
            } catch (const ConfigError& err) {
              console << files[i].string() << ": config error: " << err.what()
                      << "\n";
              codes[i] = kExitConfig;
            } catch (const SimulationError& err) {
              console << files[i].string() << ": dynamics error: "
                      << err.what() << "\n";
              codes[i] = kExitDynamics;
            }
            blocks[i] = console.str();
          }
        });
      }
      for (std::thread& t : workers) t.join();
      for (const std::string& block : blocks) std::cout << block;
      const auto failed =
          std::find_if(codes.begin(), codes.end(), [](int c) { return c; });
      return failed == codes.end() ? 0 : *failed;
    }
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const SimulationError& err) {
    std::cerr << "dynamics error: " << err.what() << "\n";
    return kExitDynamics;
  }
  return 0;
}
