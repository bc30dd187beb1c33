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
//
// Command implementations behind the CLI.  Each returns a process exit
// code: 0 success, 2 malformed input or sweep spec, 3 I/O failure,
// 4 enumeration guard tripped, 5 protected flow infeasible, 1 unexpected.
// Commands run twice with identical inputs produce byte-identical output
// files, whatever the thread count.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ofdmflow/assign.hpp"
#include "ofdmflow/channel.hpp"
#include "ofdmflow/errors.hpp"
#include "ofdmflow/gainflow.hpp"
#include "ofdmflow/io.hpp"

namespace ofdmflow::cli {

enum class Solver { milp, brute, statically };

inline Solver parse_solver(const std::string& name) {
  if (name == "milp") return Solver::milp;
  if (name == "brute") return Solver::brute;
  if (name == "static") return Solver::statically;
  throw MalformedInput("unknown solver \"" + name +
                       "\" (expected milp, brute or static)");
}

inline Assignment run_solver(Solver solver, const RateMatrix& rates) {
  switch (solver) {
    case Solver::milp: return solve_maxmin(rates);
    case Solver::brute: return brute_force_maxmin(rates);
    case Solver::statically: return static_assignment(rates);
  }
  throw Error("unreachable");
}

/// Power grid in dBm, parsed from "START:STOP:STEP".
struct SweepSpec {
  double start_dbm = 0.0;
  double stop_dbm = 0.0;
  double step_dbm = 0.0;

  static SweepSpec parse(const std::string& text) {
    SweepSpec spec;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> spec.start_dbm >> c1 >> spec.stop_dbm >> c2 >>
          spec.step_dbm) ||
        c1 != ':' || c2 != ':' || !in.eof())
      throw MalformedInput("power grid must be START:STOP:STEP (dBm), got \"" +
                           text + "\"");
    spec.validate();
    return spec;
  }

  void validate() const {
    if (!(step_dbm > 0.0)) throw MalformedInput("power step must be positive");
    if (start_dbm > stop_dbm)
      throw MalformedInput("power start must not exceed stop");
    if (grid().size() > 200) throw MalformedInput("power grid exceeds 200 points");
  }

  std::vector<double> grid() const {
    std::vector<double> points;
    for (int k = 0;; ++k) {
      const double p = start_dbm + k * step_dbm;
      if (p > stop_dbm + 1e-9 * step_dbm) break;
      points.push_back(p);
    }
    return points;
  }
};

inline double dbm_to_watts(double dbm) {
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

namespace detail {

inline int report(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << "\n";
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const MalformedInput& e) {
    return report(e, 2);
  } catch (const MalformedProblem& e) {
    return report(e, 2);
  } catch (const DomainError& e) {
    return report(e, 2);
  } catch (const IndexError& e) {
    return report(e, 2);
  } catch (const TooLarge& e) {
    return report(e, 4);
  } catch (const IoError& e) {
    return report(e, 3);
  } catch (const std::exception& e) {
    return report(e, 1);
  }
}

}  // namespace detail

inline int run_gen_trace(const std::string& scenario_path,
                         const std::string& out_path,
                         std::optional<std::uint64_t> seed_override = {},
                         int threads = 1) {
  return detail::guarded([&] {
    Scenario scenario = io::load_scenario(scenario_path);
    if (seed_override) scenario.seed = *seed_override;
    const ChannelTrace trace = generate_trace(scenario, threads);
    io::write_file(out_path, io::trace_to_csv(trace));
    return 0;
  });
}

inline int run_assign(const std::string& scenario_path,
                      const std::string& trace_path, int phase,
                      const std::string& solver_name,
                      const std::string& out_path) {
  return detail::guarded([&] {
    const Solver solver = parse_solver(solver_name);
    const Scenario scenario = io::load_scenario(scenario_path);
    const ChannelTrace trace =
        io::parse_trace_csv(io::read_file(trace_path), scenario);
    if (phase < 1 || phase > scenario.phases)
      throw MalformedInput("phase " + std::to_string(phase) +
                           " outside 1.." + std::to_string(scenario.phases));
    const RateMatrix rates =
        build_rate_matrix(trace, phase - 1, scenario.total_power);
    const Assignment assignment = run_solver(solver, rates);
    io::write_file(out_path, io::assignment_to_csv(assignment));
    return 0;
  });
}

struct SweepPoint {
  double power_dbm = 0.0;
  double mean_min_throughput = 0.0;  // bits per phase, averaged over phases
  double mean_snr_db = 0.0;          // averaged over all (n, j, t)
};

/// Evaluates one power on the grid.  The trace is power-independent, so
/// only the SNR rescales; every phase is solved and epsilon averaged.
inline SweepPoint sweep_point(const ChannelTrace& trace, Solver solver,
                              double power_dbm) {
  const Scenario& sc = trace.scenario;
  const double watts = dbm_to_watts(power_dbm);
  const double per_subcarrier = watts / sc.subcarriers;

  SweepPoint point;
  point.power_dbm = power_dbm;
  double eps_sum = 0.0;
  for (int t = 0; t < sc.phases; ++t) {
    const RateMatrix rates = build_rate_matrix(trace, t, watts);
    eps_sum += static_cast<double>(run_solver(solver, rates).epsilon);
  }
  point.mean_min_throughput = eps_sum / sc.phases;

  double db_sum = 0.0;
  for (int t = 0; t < sc.phases; ++t)
    for (int n = 0; n < sc.subcarriers; ++n)
      for (int j = 0; j < sc.terminals; ++j)
        db_sum += 10.0 * std::log10(
                             snr(per_subcarrier, trace.at(n, j, t),
                                 sc.noise_power));
  point.mean_snr_db =
      db_sum / (static_cast<double>(sc.subcarriers) * sc.terminals * sc.phases);
  return point;
}

inline std::vector<SweepPoint> run_sweep_points(const ChannelTrace& trace,
                                                Solver solver,
                                                const SweepSpec& spec,
                                                int threads = 1) {
  const std::vector<double> grid = spec.grid();
  std::vector<SweepPoint> points(grid.size());
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < grid.size(); ++k)
      points[k] = sweep_point(trace, solver, grid[k]);
  } else {
    // Per-power tasks are independent; results land in grid order, so the
    // schedule cannot affect the output.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      while (true) {
        const std::size_t k = next.fetch_add(1);
        if (k >= grid.size()) return;
        points[k] = sweep_point(trace, solver, grid[k]);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return points;
}

inline std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream os;
  os << "power_dbm,mean_min_throughput_bits,mean_snr_db\n";
  for (const SweepPoint& p : points)
    os << io::format_double(p.power_dbm) << ','
       << io::format_double(p.mean_min_throughput) << ','
       << io::format_double(p.mean_snr_db) << '\n';
  return os.str();
}

inline int run_sweep(const std::string& scenario_path,
                     const std::string& powers, const std::string& solver_name,
                     const std::string& out_path,
                     std::optional<std::uint64_t> seed_override = {},
                     int threads = 1) {
  return detail::guarded([&] {
    const Solver solver = parse_solver(solver_name);
    const SweepSpec spec = SweepSpec::parse(powers);
    Scenario scenario = io::load_scenario(scenario_path);
    if (seed_override) scenario.seed = *seed_override;
    const ChannelTrace trace = generate_trace(scenario);
    const std::vector<SweepPoint> points =
        run_sweep_points(trace, solver, spec, threads);
    io::write_file(out_path, sweep_to_csv(points));
    return 0;
  });
}

inline int run_gainflow(const std::string& network_path,
                        const std::string& out_path) {
  return detail::guarded([&] {
    const auto [network, uncertainty] = io::load_network(network_path);
    const RobustFlowSolution solution =
        solve_robust_gainflow(network, uncertainty);
    if (solution.status == lp::SolveStatus::infeasible) {
      std::cerr << "infeasible: no flow survives the protected demand\n";
      for (const auto& [node, demand] :
           protected_demands(network, uncertainty))
        std::cerr << "  protected demand at " << node << ": "
                  << io::format_double(demand) << "\n";
      return 5;
    }
    if (solution.status == lp::SolveStatus::unbounded) {
      std::cerr << "error: flow problem is unbounded\n";
      return 1;
    }
    io::write_file(out_path, io::flows_to_csv(network, solution));
    return 0;
  });
}

}  // namespace ofdmflow::cli
