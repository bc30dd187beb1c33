// Copyright 2026 The ofdmflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ofdmflow/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "OFDM downlink toolbox: channel traces, max-min subcarrier "
      "assignment, power sweeps and robust gain-flow solving"};
  app.require_subcommand(1);

  std::string scenario_path, trace_path, network_path, out_path, powers;
  std::string solver = "milp";
  int phase = 1;
  int threads = 1;
  std::optional<std::uint64_t> seed_override;
  std::uint64_t seed_value = 0;

  CLI::App* gen = app.add_subcommand(
      "gen-trace", "Generate an attenuation trace CSV from a scenario");
  gen->alias("gen_trace");
  gen->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  gen->add_option("--out", out_path, "Output trace CSV")->required();
  CLI::Option* gen_seed =
      gen->add_option("--seed", seed_value, "Override the scenario seed");
  gen->add_option("--threads", threads, "Worker threads")
      ->default_val(1)
      ->check(CLI::PositiveNumber);

  CLI::App* assign = app.add_subcommand(
      "assign", "Solve one downlink phase of a trace");
  assign->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  assign->add_option("--trace", trace_path, "Trace CSV file")->required();
  assign->add_option("--phase", phase, "Downlink phase (1-based)")
      ->required();
  assign->add_option("--solver", solver, "milp, brute or static")
      ->default_val("milp");
  assign->add_option("--out", out_path, "Output assignment CSV")->required();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sweep transmit power and record min-throughput and SNR");
  sweep->add_option("--scenario", scenario_path, "Scenario JSON file")
      ->required();
  sweep->add_option("--powers", powers, "Grid START:STOP:STEP in dBm")
      ->required();
  sweep->add_option("--solver", solver, "milp, brute or static")
      ->default_val("milp");
  sweep->add_option("--out", out_path, "Output curve CSV")->required();
  CLI::Option* sweep_seed =
      sweep->add_option("--seed", seed_value, "Override the scenario seed");
  sweep->add_option("--threads", threads, "Worker threads")
      ->default_val(1)
      ->check(CLI::PositiveNumber);

  CLI::App* gainflow = app.add_subcommand(
      "gainflow", "Solve a robust minimum channel gain flow instance");
  gainflow->add_option("--network", network_path, "Network JSON file")
      ->required();
  gainflow->add_option("--out", out_path, "Output flows CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  using namespace ofdmflow::cli;
  if (gen->parsed()) {
    if (gen_seed->count() > 0) seed_override = seed_value;
    return run_gen_trace(scenario_path, out_path, seed_override, threads);
  }
  if (assign->parsed())
    return run_assign(scenario_path, trace_path, phase, solver, out_path);
  if (sweep->parsed()) {
    if (sweep_seed->count() > 0) seed_override = seed_value;
    return run_sweep(scenario_path, powers, solver, out_path, seed_override,
                     threads);
  }
  if (gainflow->parsed()) return run_gainflow(network_path, out_path);
  return 2;
}
