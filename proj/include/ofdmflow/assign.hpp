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
// Max-min throughput subcarrier assignment under equal per-subcarrier
// power: each subcarrier goes to at most one terminal, the objective
// maximizes the smallest per-terminal bits-per-phase total.  Besides the
// MILP route this module carries the exhaustive-enumeration oracle and
// the channel-state-oblivious round-robin baseline.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ofdmflow/channel.hpp"
#include "ofdmflow/errors.hpp"
#include "ofdmflow/lp.hpp"

namespace ofdmflow {

/// Achievable bits per phase r[j][n] for terminal j on subcarrier n.
struct RateMatrix {
  int terminals = 0;    // J
  int subcarriers = 0;  // N
  std::vector<std::int64_t> rates;  // row-major, j * N + n
  std::string provenance;

  std::int64_t at(int j, int n) const {
    return rates[static_cast<std::size_t>(j) * subcarriers + n];
  }
  std::int64_t& at(int j, int n) {
    return rates[static_cast<std::size_t>(j) * subcarriers + n];
  }

  void validate() const {
    if (terminals < 1 || subcarriers < 1)
      throw MalformedProblem("rate matrix dimensions must be positive");
    if (rates.size() !=
        static_cast<std::size_t>(terminals) * subcarriers)
      throw MalformedProblem("rate matrix size mismatch");
    for (std::int64_t r : rates)
      if (r < 0) throw MalformedProblem("rates must be nonnegative");
  }
};

/// owner[n] is the 0-based terminal of subcarrier n, or -1 when the
/// subcarrier is left unassigned.
struct Assignment {
  static constexpr int kUnassigned = -1;
  std::vector<int> owner;
  std::vector<std::int64_t> throughput;  // bits per phase, per terminal
  std::int64_t epsilon = 0;              // min over terminals
};

/// Recomputes per-terminal throughput from an owner vector.
inline std::vector<std::int64_t> throughput_vector(const Assignment& assignment,
                                                   const RateMatrix& rates) {
  rates.validate();
  if (assignment.owner.size() != static_cast<std::size_t>(rates.subcarriers))
    throw IndexError("assignment length does not match subcarrier count");
  std::vector<std::int64_t> sums(rates.terminals, 0);
  for (int n = 0; n < rates.subcarriers; ++n) {
    const int j = assignment.owner[n];
    if (j == Assignment::kUnassigned) continue;
    if (j < 0 || j >= rates.terminals)
      throw IndexError("assignment owner out of range");
    sums[j] += rates.at(j, n);
  }
  return sums;
}

namespace detail {

inline Assignment finish_assignment(std::vector<int> owner,
                                    const RateMatrix& rates) {
  Assignment a;
  a.owner = std::move(owner);
  a.throughput = throughput_vector(a, rates);
  a.epsilon = *std::min_element(a.throughput.begin(), a.throughput.end());
  return a;
}

}  // namespace detail

/// Builds the max-min MILP: binaries x[n][j] in variable order
/// (x[1][1], x[1][2], ..., x[N][J]) followed by the continuous epsilon;
/// one packing row per subcarrier (sum_j x <= 1), one coverage row per
/// terminal (sum_n r[j][n] x - epsilon >= 0).  Power never appears: each
/// subcarrier carries a fixed equal share, so no power row exists.
inline lp::LpProblem build_maxmin_milp(const RateMatrix& rates) {
  rates.validate();
  const int N = rates.subcarriers;
  const int J = rates.terminals;
  lp::LpProblem p;
  p.sense = lp::Sense::maximize;
  for (int n = 0; n < N; ++n)
    for (int j = 0; j < J; ++j)
      p.add_variable(0.0, 1.0, 0.0, true,
                     "x[" + std::to_string(n + 1) + "][" +
                         std::to_string(j + 1) + "]");
  const int eps = p.add_variable(0.0, lp::kInfinity, 1.0, false, "epsilon");

  for (int n = 0; n < N; ++n) {
    std::vector<double> row(p.num_vars(), 0.0);
    for (int j = 0; j < J; ++j) row[n * J + j] = 1.0;
    p.add_row(std::move(row), lp::Relation::le, 1.0,
              "carrier[" + std::to_string(n + 1) + "]");
  }
  for (int j = 0; j < J; ++j) {
    std::vector<double> row(p.num_vars(), 0.0);
    for (int n = 0; n < N; ++n)
      row[n * J + j] = static_cast<double>(rates.at(j, n));
    row[eps] = -1.0;
    p.add_row(std::move(row), lp::Relation::ge, 0.0,
              "terminal[" + std::to_string(j + 1) + "]");
  }
  return p;
}

/// Solves the assignment MILP to proven optimality.
inline Assignment solve_maxmin(const RateMatrix& rates) {
  const lp::LpProblem milp = build_maxmin_milp(rates);
  const lp::MilpSolution sol = lp::solve_milp(milp);
  if (sol.status != lp::MilpStatus::optimal)
    throw Error("max-min assignment MILP did not reach optimality");
  const int N = rates.subcarriers;
  const int J = rates.terminals;
  std::vector<int> owner(N, Assignment::kUnassigned);
  for (int n = 0; n < N; ++n)
    for (int j = 0; j < J; ++j)
      if (sol.x[static_cast<std::size_t>(n) * J + j] > 0.5) owner[n] = j;
  return detail::finish_assignment(std::move(owner), rates);
}

/// Exhaustive enumeration of all J^N full assignments.  A subcarrier is
/// never left unassigned: rates are nonnegative, so assigning it cannot
/// lower any terminal's total.  Ties resolve to the lexicographically
/// smallest owner vector.  Guarded by N*log2(J) <= 24.
inline Assignment brute_force_maxmin(const RateMatrix& rates) {
  rates.validate();
  const int N = rates.subcarriers;
  const int J = rates.terminals;
  if (static_cast<double>(N) * std::log2(static_cast<double>(J)) > 24.0 + 1e-9)
    throw TooLarge("enumeration guard: N*log2(J) exceeds 24");

  std::vector<int> owner(N, 0);
  std::vector<std::int64_t> sums(J, 0);
  for (int n = 0; n < N; ++n) sums[0] += rates.at(0, n);

  std::vector<int> best_owner = owner;
  std::int64_t best_eps = *std::min_element(sums.begin(), sums.end());
  while (true) {
    // Odometer step over owner vectors in lexicographic order, keeping
    // per-terminal sums incremental.
    int pos = N - 1;
    while (pos >= 0 && owner[pos] == J - 1) {
      sums[J - 1] -= rates.at(J - 1, pos);
      sums[0] += rates.at(0, pos);
      owner[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    sums[owner[pos]] -= rates.at(owner[pos], pos);
    ++owner[pos];
    sums[owner[pos]] += rates.at(owner[pos], pos);

    const std::int64_t eps = *std::min_element(sums.begin(), sums.end());
    if (eps > best_eps) {
      best_eps = eps;
      best_owner = owner;
    }
  }
  return detail::finish_assignment(std::move(best_owner), rates);
}

/// Round-robin baseline, oblivious to channel state.
inline Assignment static_assignment(const RateMatrix& rates) {
  rates.validate();
  std::vector<int> owner(rates.subcarriers);
  for (int n = 0; n < rates.subcarriers; ++n) owner[n] = n % rates.terminals;
  return detail::finish_assignment(std::move(owner), rates);
}

/// Tabulates F(SNR) for one downlink phase of a trace at the given total
/// transmit power (split equally over subcarriers).
inline RateMatrix build_rate_matrix(const ChannelTrace& trace, int phase,
                                    double total_power) {
  const Scenario& sc = trace.scenario;
  if (phase < 0 || phase >= sc.phases)
    throw IndexError("phase index out of range");
  if (!(total_power > 0.0)) throw DomainError("total_power must be positive");
  const RateTable table = sc.effective_rate_table();
  const double p = total_power / sc.subcarriers;
  RateMatrix rates;
  rates.terminals = sc.terminals;
  rates.subcarriers = sc.subcarriers;
  rates.rates.resize(static_cast<std::size_t>(sc.terminals) * sc.subcarriers);
  for (int j = 0; j < sc.terminals; ++j)
    for (int n = 0; n < sc.subcarriers; ++n)
      rates.at(j, n) = rate_from_snr(
          snr(p, trace.at(n, j, phase), sc.noise_power), table,
          sc.symbols_per_phase);
  rates.provenance = "trace seed " + std::to_string(sc.seed) + ", phase " +
                     std::to_string(phase + 1) + ", power " +
                     std::to_string(total_power) + " W";
  return rates;
}

}  // namespace ofdmflow
