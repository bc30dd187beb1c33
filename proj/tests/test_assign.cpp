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

#include "ofdmflow/assign.hpp"

#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace ofdmflow;

namespace {

RateMatrix make_rates(int terminals, int subcarriers,
                      std::vector<std::int64_t> values) {
  RateMatrix r;
  r.terminals = terminals;
  r.subcarriers = subcarriers;
  r.rates = std::move(values);
  return r;
}

RateMatrix random_rates(oracles::TestRng& rng, int max_n = 6, int max_j = 3) {
  const int n = rng.uniform_int(1, max_n);
  const int j = rng.uniform_int(1, max_j);
  RateMatrix r;
  r.terminals = j;
  r.subcarriers = n;
  r.rates.resize(static_cast<std::size_t>(n) * j);
  for (auto& v : r.rates) v = rng.uniform_int(0, 12);
  return r;
}

TEST(BuildMaxminMilp, SmallestInstanceShape) {
  const RateMatrix r = make_rates(1, 1, {7});
  const lp::LpProblem p = build_maxmin_milp(r);
  EXPECT_EQ(p.num_vars(), 2u);  // one binary plus epsilon
  EXPECT_EQ(p.num_rows(), 2u);  // one packing row, one coverage row
  EXPECT_TRUE(p.integral[0]);
  EXPECT_FALSE(p.integral[1]);
  EXPECT_EQ(p.var_labels.back(), "epsilon");
}

TEST(BuildMaxminMilp, CountsFollowTheModel) {
  const RateMatrix r = make_rates(2, 2, {3, 1, 1, 3});
  const lp::LpProblem p = build_maxmin_milp(r);
  EXPECT_EQ(p.num_vars(), 5u);  // 4 binaries plus epsilon
  EXPECT_EQ(p.num_rows(), 4u);  // 2 packing, 2 coverage
  // Variable order is (x[1][1], x[1][2], ..., x[N][J], epsilon).
  EXPECT_EQ(p.var_labels[0], "x[1][1]");
  EXPECT_EQ(p.var_labels[1], "x[1][2]");
  EXPECT_EQ(p.var_labels[2], "x[2][1]");
  EXPECT_EQ(p.var_labels[3], "x[2][2]");
}

TEST(BuildMaxminMilp, NoRowReferencesTotalPower) {
  // The model has exactly two row families: packing rows with 0/1
  // coefficients on the binaries, and coverage rows with the rate values
  // and -1 on epsilon.  Nothing else enters, power in particular.
  oracles::TestRng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const RateMatrix r = random_rates(rng);
    const lp::LpProblem p = build_maxmin_milp(r);
    const std::size_t eps = p.num_vars() - 1;
    ASSERT_EQ(p.num_rows(),
              static_cast<std::size_t>(r.subcarriers) + r.terminals);
    for (int n = 0; n < r.subcarriers; ++n) {
      const lp::Row& row = p.rows[n];
      EXPECT_EQ(row.rel, lp::Relation::le);
      EXPECT_EQ(row.rhs, 1.0);
      EXPECT_EQ(row.coeffs[eps], 0.0);
      for (std::size_t v = 0; v + 1 < p.num_vars(); ++v)
        EXPECT_TRUE(row.coeffs[v] == 0.0 || row.coeffs[v] == 1.0);
    }
    for (int j = 0; j < r.terminals; ++j) {
      const lp::Row& row = p.rows[r.subcarriers + j];
      EXPECT_EQ(row.rel, lp::Relation::ge);
      EXPECT_EQ(row.rhs, 0.0);
      EXPECT_EQ(row.coeffs[eps], -1.0);
      for (int n = 0; n < r.subcarriers; ++n)
        EXPECT_EQ(row.coeffs[static_cast<std::size_t>(n) * r.terminals + j],
                  static_cast<double>(r.at(j, n)));
    }
  }
}

TEST(SolveMaxmin, SingleTerminalTakesEverything) {
  const RateMatrix r = make_rates(1, 3, {4, 0, 9});
  const Assignment a = solve_maxmin(r);
  EXPECT_EQ(a.epsilon, 13);
  EXPECT_EQ(a.throughput[0], 13);
}

// N=2, J=2, r=[[3,1],[1,3]]: the diagonal assignment is optimal with
// epsilon 3; frozen from the J^N enumeration oracle.
TEST(SolveMaxmin, DiagonalInstance) {
  const RateMatrix r = make_rates(2, 2, {3, 1, 1, 3});
  const Assignment brute = brute_force_maxmin(r);
  EXPECT_EQ(brute.epsilon, 3);
  EXPECT_EQ(brute.owner, (std::vector<int>{0, 1}));

  const Assignment milp = solve_maxmin(r);
  EXPECT_EQ(milp.epsilon, 3);
  EXPECT_EQ(milp.owner, (std::vector<int>{0, 1}));
}

TEST(SolveMaxmin, AllZeroTerminalCapsEpsilonAtZero) {
  const RateMatrix r = make_rates(2, 3, {5, 6, 7, 0, 0, 0});
  const Assignment a = solve_maxmin(r);
  EXPECT_EQ(a.epsilon, 0);
  const auto sums = throughput_vector(a, r);
  EXPECT_EQ(sums, a.throughput);
}

TEST(BruteForce, TieBreaksToLexicographicallySmallestOwner) {
  // With more terminals than subcarriers someone always ends at zero, so
  // every full assignment scores epsilon 0 and the all-first-terminal
  // vector wins the tie.
  const RateMatrix r = make_rates(2, 1, {5, 7});
  const Assignment a = brute_force_maxmin(r);
  EXPECT_EQ(a.epsilon, 0);
  EXPECT_EQ(a.owner, (std::vector<int>{0}));
}

TEST(BruteForce, SingleTerminalRowSum) {
  const RateMatrix r = make_rates(1, 3, {2, 3, 4});
  const Assignment a = brute_force_maxmin(r);
  EXPECT_EQ(a.epsilon, 9);
}

TEST(BruteForce, GuardRejectsHugeEnumerations) {
  RateMatrix r;
  r.terminals = 2;
  r.subcarriers = 25;  // 2^25 exceeds the 2^24 guard
  r.rates.assign(50, 1);
  EXPECT_THROW(brute_force_maxmin(r), TooLarge);
}

TEST(SolveMaxmin, AgreesWithBruteForceOnRandomInstances) {
  oracles::TestRng rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    const RateMatrix r = random_rates(rng);
    const Assignment milp = solve_maxmin(r);
    const Assignment brute = brute_force_maxmin(r);
    ASSERT_EQ(milp.epsilon, brute.epsilon) << "trial " << trial;
    // Feasibility of both: recomputation identity.
    EXPECT_EQ(throughput_vector(milp, r), milp.throughput);
    EXPECT_EQ(throughput_vector(brute, r), brute.throughput);
    EXPECT_EQ(*std::min_element(milp.throughput.begin(),
                                milp.throughput.end()),
              milp.epsilon);
  }
}

TEST(StaticAssignment, RoundRobinDefinition) {
  const RateMatrix r = make_rates(2, 4, {1, 1, 1, 1, 1, 1, 1, 1});
  const Assignment a = static_assignment(r);
  EXPECT_EQ(a.owner, (std::vector<int>{0, 1, 0, 1}));
}

TEST(StaticAssignment, MatchesDynamicWhenRatesAreUniform) {
  // No frequency diversity to exploit: every terminal sees the same
  // rates, so round-robin is already optimal.
  const RateMatrix r = make_rates(2, 4, {2, 2, 2, 2, 2, 2, 2, 2});
  EXPECT_EQ(static_assignment(r).epsilon, solve_maxmin(r).epsilon);
}

TEST(StaticAssignment, NeverBeatsDynamic) {
  oracles::TestRng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const RateMatrix r = random_rates(rng);
    EXPECT_LE(static_assignment(r).epsilon, solve_maxmin(r).epsilon)
        << "trial " << trial;
  }
}

TEST(ThroughputVector, EmptyAssignmentIsAllZero) {
  const RateMatrix r = make_rates(2, 3, {1, 2, 3, 4, 5, 6});
  Assignment a;
  a.owner.assign(3, Assignment::kUnassigned);
  const auto sums = throughput_vector(a, r);
  EXPECT_EQ(sums, (std::vector<std::int64_t>{0, 0}));
}

TEST(ThroughputVector, RejectsOutOfRangeOwners) {
  const RateMatrix r = make_rates(2, 2, {1, 2, 3, 4});
  Assignment a;
  a.owner = {0, 5};
  EXPECT_THROW(throughput_vector(a, r), IndexError);
  a.owner = {0};
  EXPECT_THROW(throughput_vector(a, r), IndexError);
}

TEST(ThroughputVector, RecomputationMatchesStoredValues) {
  oracles::TestRng rng(4711);
  for (int trial = 0; trial < 30; ++trial) {
    const RateMatrix r = random_rates(rng);
    Assignment a;
    a.owner.resize(r.subcarriers);
    for (int n = 0; n < r.subcarriers; ++n)
      a.owner[n] = rng.uniform_int(-1, r.terminals - 1);
    const auto sums = throughput_vector(a, r);
    a.throughput = sums;
    a.epsilon = *std::min_element(sums.begin(), sums.end());
    EXPECT_EQ(throughput_vector(a, r), a.throughput);
  }
}

TEST(Properties, PermutingSubcarriersPreservesEpsilon) {
  oracles::TestRng rng(808);
  for (int trial = 0; trial < 25; ++trial) {
    const RateMatrix r = random_rates(rng, 6, 3);
    std::vector<int> perm(r.subcarriers);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = r.subcarriers - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.uniform_int(0, i)]);

    RateMatrix permuted = r;
    for (int j = 0; j < r.terminals; ++j)
      for (int n = 0; n < r.subcarriers; ++n)
        permuted.at(j, perm[n]) = r.at(j, n);

    const Assignment base = brute_force_maxmin(r);
    const Assignment after = brute_force_maxmin(permuted);
    ASSERT_EQ(base.epsilon, after.epsilon) << "trial " << trial;

    // The permuted owner vector is optimal for the permuted instance.
    Assignment carried;
    carried.owner.assign(r.subcarriers, Assignment::kUnassigned);
    for (int n = 0; n < r.subcarriers; ++n)
      carried.owner[perm[n]] = base.owner[n];
    const auto sums = throughput_vector(carried, permuted);
    EXPECT_EQ(*std::min_element(sums.begin(), sums.end()), after.epsilon);
  }
}

TEST(Properties, ScalingRatesScalesEpsilon) {
  oracles::TestRng rng(909);
  for (int trial = 0; trial < 25; ++trial) {
    const RateMatrix r = random_rates(rng, 6, 3);
    const std::int64_t k = rng.uniform_int(2, 5);
    RateMatrix scaled = r;
    for (auto& v : scaled.rates) v *= k;

    const Assignment base = brute_force_maxmin(r);
    const Assignment big = brute_force_maxmin(scaled);
    ASSERT_EQ(big.epsilon, k * base.epsilon) << "trial " << trial;

    // The unscaled argmax stays optimal after scaling.
    const auto sums = throughput_vector(base, scaled);
    EXPECT_EQ(*std::min_element(sums.begin(), sums.end()), big.epsilon);
  }
}

TEST(Properties, MilpEpsilonIsIntegral) {
  oracles::TestRng rng(616);
  for (int trial = 0; trial < 20; ++trial) {
    const RateMatrix r = random_rates(rng);
    const lp::MilpSolution sol = lp::solve_milp(build_maxmin_milp(r));
    ASSERT_EQ(sol.status, lp::MilpStatus::optimal);
    EXPECT_NEAR(sol.objective, std::round(sol.objective), 1e-6)
        << "trial " << trial;
  }
}

TEST(RateMatrixBuild, TabulatesSnrThroughTheTable) {
  Scenario sc;
  sc.subcarriers = 3;
  sc.terminals = 2;
  sc.phases = 2;
  sc.phase_duration = 1e-3;
  sc.total_power = 3.0;  // 1 W per subcarrier
  sc.noise_power = 0.1;
  sc.cell_radius = 50.0;
  sc.min_distance = 5.0;
  sc.pathloss_exponent = 2.0;
  sc.shadowing_sigma = 4.0;
  sc.symbols_per_phase = 10;
  sc.target_ber = 1e-3;
  sc.seed = 7;
  const ChannelTrace trace = generate_trace(sc);
  const RateMatrix rates = build_rate_matrix(trace, 1, sc.total_power);
  const RateTable table = sc.effective_rate_table();
  for (int j = 0; j < sc.terminals; ++j)
    for (int n = 0; n < sc.subcarriers; ++n)
      EXPECT_EQ(rates.at(j, n),
                rate_from_snr(snr(1.0, trace.at(n, j, 1), sc.noise_power),
                              table, sc.symbols_per_phase));
  EXPECT_THROW(build_rate_matrix(trace, 2, sc.total_power), IndexError);
}

}  // namespace
