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
// Downlink channel simulation: reproducible attenuation traces
// (path loss x log-normal shadowing x Rayleigh fading) and the SNR ->
// bits-per-phase mapping used by the subcarrier assignment solvers.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ofdmflow/errors.hpp"
#include "ofdmflow/rng.hpp"

namespace ofdmflow {

/// Adaptive-modulation table: level k carries bits_per_symbol once the
/// linear SNR reaches threshold (inclusive).  Level 0 is implicitly
/// (threshold 0, bits 0).
struct RateLevel {
  double threshold = 0.0;   // linear SNR
  int bits_per_symbol = 0;
};

struct RateTable {
  std::vector<RateLevel> levels;

  void validate() const {
    if (levels.empty()) throw MalformedInput("rate table has no levels");
    if (!(levels.front().threshold > 0.0))
      throw MalformedInput("rate table threshold 1 must be positive");
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (!std::isfinite(levels[k].threshold))
        throw MalformedInput("rate table threshold not finite");
      if (levels[k].bits_per_symbol <= 0)
        throw MalformedInput("rate table bits_per_symbol must be positive");
      if (k > 0) {
        if (!(levels[k].threshold > levels[k - 1].threshold))
          throw MalformedInput("rate table thresholds must strictly increase");
        if (!(levels[k].bits_per_symbol > levels[k - 1].bits_per_symbol))
          throw MalformedInput("rate table bits must strictly increase");
      }
    }
  }
};

/// Full experiment description.  One Scenario (seed included) pins every
/// random draw, so traces regenerate bit-identically.
struct Scenario {
  int subcarriers = 0;            // N
  int terminals = 0;              // J
  int phases = 0;                 // T downlink phases
  double phase_duration = 0.0;    // seconds, metadata only
  double total_power = 0.0;       // watts, split equally over subcarriers
  double noise_power = 0.0;       // watts per subcarrier
  double cell_radius = 0.0;       // meters
  double min_distance = 0.0;      // meters
  double pathloss_exponent = 0.0;
  double shadowing_sigma = 0.0;   // dB
  int symbols_per_phase = 0;      // S
  double target_ber = 0.0;
  std::uint64_t seed = 0;
  std::optional<RateTable> rate_table;  // overrides the BER-derived table

  double power_per_subcarrier() const { return total_power / subcarriers; }

  void validate() const {
    if (subcarriers < 1) throw MalformedInput("subcarriers must be >= 1");
    if (terminals < 1) throw MalformedInput("terminals must be >= 1");
    if (phases < 1) throw MalformedInput("phases must be >= 1");
    if (!(phase_duration > 0.0))
      throw MalformedInput("phase_duration must be positive");
    if (!(total_power > 0.0)) throw MalformedInput("total_power must be positive");
    if (!(noise_power > 0.0)) throw MalformedInput("noise_power must be positive");
    if (!(min_distance > 0.0))
      throw MalformedInput("min_distance must be positive");
    if (!(min_distance < cell_radius))
      throw MalformedInput("min_distance must be smaller than cell_radius");
    if (!(pathloss_exponent >= 1.0))
      throw MalformedInput("pathloss_exponent must be >= 1");
    if (!(shadowing_sigma >= 0.0))
      throw MalformedInput("shadowing_sigma must be nonnegative");
    if (symbols_per_phase < 1)
      throw MalformedInput("symbols_per_phase must be >= 1");
    if (!(target_ber > 0.0 && target_ber < 0.5))
      throw MalformedInput("target_ber must lie in (0, 0.5)");
    if (rate_table) rate_table->validate();
  }

  /// The table actually used: the explicit override when present,
  /// otherwise the BER-derived default (BPSK/QPSK/16-QAM/64-QAM).
  RateTable effective_rate_table() const;
};

/// Attenuation samples a[n][j][t], one per subcarrier/terminal/phase,
/// plus the terminal distances and the generating Scenario.
struct ChannelTrace {
  Scenario scenario;
  std::vector<double> distances;    // per terminal, meters
  std::vector<double> attenuation;  // layout: ((t * N) + n) * J + j

  double at(int n, int j, int t) const {
    const int N = scenario.subcarriers;
    const int J = scenario.terminals;
    if (n < 0 || n >= N || j < 0 || j >= J || t < 0 || t >= scenario.phases)
      throw IndexError("trace index out of range");
    return attenuation[(static_cast<std::size_t>(t) * N + n) * J + j];
  }
};

/// Instant SNR as a linear ratio.
inline double snr(double power_per_subcarrier, double attenuation,
                  double noise_power) {
  if (!(power_per_subcarrier > 0.0) || !(attenuation > 0.0) ||
      !(noise_power > 0.0))
    throw DomainError("snr requires positive power, attenuation and noise");
  return power_per_subcarrier * attenuation / noise_power;
}

/// Distance-normalized power-law path loss; equals 1 at min_distance.
inline double path_loss(double distance, double min_distance,
                        double pathloss_exponent) {
  return std::pow(min_distance / distance, pathloss_exponent);
}

/// Area-uniform placement radius: max(d0, R * sqrt(u)) for u in [0, 1).
inline double placement_radius(double u, double min_distance,
                               double cell_radius) {
  return std::max(min_distance, cell_radius * std::sqrt(u));
}

/// Draws quasi-static terminal positions, area-uniform over the disc.
inline std::vector<double> place_terminals(const Scenario& scenario,
                                           const CounterRng& rng) {
  scenario.validate();
  std::vector<double> d(scenario.terminals);
  for (int j = 0; j < scenario.terminals; ++j) {
    const double u = rng.uniform(CounterRng::Stream::placement, 0, j, 0);
    d[j] = placement_radius(u, scenario.min_distance, scenario.cell_radius);
  }
  return d;
}

/// Generates the full attenuation trace.  Every sample is a pure function
/// of (seed, indices), so the result is independent of thread count.
inline ChannelTrace generate_trace(const Scenario& scenario, int threads = 1) {
  scenario.validate();
  const CounterRng rng(scenario.seed);
  ChannelTrace trace;
  trace.scenario = scenario;
  trace.distances = place_terminals(scenario, rng);

  const int N = scenario.subcarriers;
  const int J = scenario.terminals;
  const int T = scenario.phases;
  std::vector<double> slow(J);  // path loss x shadowing, fixed per terminal
  for (int j = 0; j < J; ++j) {
    const double shadow_db =
        scenario.shadowing_sigma *
        rng.normal(CounterRng::Stream::shadowing_u1,
                   CounterRng::Stream::shadowing_u2, 0, j, 0);
    slow[j] = path_loss(trace.distances[j], scenario.min_distance,
                        scenario.pathloss_exponent) *
              std::pow(10.0, shadow_db / 10.0);
  }

  trace.attenuation.resize(static_cast<std::size_t>(N) * J * T);
  auto fill_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int j = static_cast<int>(idx % J);
      const int n = static_cast<int>((idx / J) % N);
      const int t = static_cast<int>(idx / (static_cast<std::size_t>(J) * N));
      const double fading =
          rng.exponential(CounterRng::Stream::fading, n, j, t);
      trace.attenuation[idx] = slow[j] * fading;
    }
  };

  const std::size_t total = trace.attenuation.size();
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(total)));
  if (workers == 1) {
    fill_range(0, total);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(fill_range, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }
  return trace;
}

/// Inverts the exponential M-QAM BER approximation
/// BER ~ 0.2 * exp(-1.6 * SNR / (2^b - 1)) into per-level SNR thresholds.
inline RateTable rate_table_from_ber(double target_ber,
                                     const std::vector<int>& levels = {1, 2, 4,
                                                                       6}) {
  if (!(target_ber > 0.0 && target_ber < 0.2))
    throw DomainError("target_ber must lie in (0, 0.2)");
  if (levels.empty()) throw DomainError("rate table needs at least one level");
  RateTable table;
  const double margin = std::log(0.2 / target_ber) / 1.6;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] <= 0 || (k > 0 && levels[k] <= levels[k - 1]))
      throw DomainError("bits-per-symbol levels must strictly increase");
    table.levels.push_back(
        RateLevel{(std::pow(2.0, levels[k]) - 1.0) * margin, levels[k]});
  }
  table.validate();
  return table;
}

inline RateTable Scenario::effective_rate_table() const {
  if (rate_table) return *rate_table;
  return rate_table_from_ber(target_ber);
}

/// Achievable bits per downlink phase: S * b_k for the largest level with
/// threshold <= snr (inclusive), 0 below the first threshold.
inline std::int64_t rate_from_snr(double snr_value, const RateTable& table,
                                  int symbols_per_phase) {
  if (!(snr_value >= 0.0)) throw DomainError("snr must be nonnegative");
  int bits = 0;
  for (const RateLevel& level : table.levels) {
    if (snr_value >= level.threshold)
      bits = level.bits_per_symbol;
    else
      break;
  }
  return static_cast<std::int64_t>(symbols_per_phase) * bits;
}

}  // namespace ofdmflow
