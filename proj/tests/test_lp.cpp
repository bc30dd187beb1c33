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

#include "ofdmflow/lp.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace ofdmflow;
using namespace ofdmflow::lp;

namespace {

using oracles::random_lp;

void check_optimal_certificates(const LpProblem& p, const LpSolution& s) {
  // Primal feasibility within the documented tolerance on scaled rows.
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const Row& row = p.rows[i];
    double lhs = 0.0;
    double scale = 0.0;
    for (std::size_t v = 0; v < p.num_vars(); ++v) {
      lhs += row.coeffs[v] * s.x[v];
      scale = std::max(scale, std::abs(row.coeffs[v]));
    }
    scale = scale > 0 ? scale : 1.0;
    const double resid = (lhs - row.rhs) / scale;
    if (row.rel == Relation::le) {
      EXPECT_LE(resid, 1e-7);
    } else if (row.rel == Relation::ge) {
      EXPECT_GE(resid, -1e-7);
    } else {
      EXPECT_NEAR(resid, 0.0, 1e-7);
    }

    // Complementary slackness: an inactive row has zero dual.
    EXPECT_LE(std::abs(s.duals[i] * (lhs - row.rhs)),
              1e-6 * (1.0 + std::abs(s.objective)) *
                  (1.0 + std::abs(s.duals[i])));

    // Dual sign convention.
    const double sign = p.sense == Sense::maximize ? 1.0 : -1.0;
    if (row.rel == Relation::le) {
      EXPECT_GE(sign * s.duals[i], -1e-7);
    } else if (row.rel == Relation::ge) {
      EXPECT_LE(sign * s.duals[i], 1e-7);
    }
  }
  // Strong duality.
  const double gap = std::abs(s.objective - dual_objective(p, s));
  EXPECT_LE(gap, 1e-7 * (1.0 + std::abs(s.objective)));
}

TEST(SolveLp, BoxCornerIsOptimal) {
  LpProblem p;
  p.sense = Sense::maximize;
  p.add_variable(0, 1, 1, false, "x1");
  p.add_variable(0, 1, 1, false, "x2");
  const LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_DOUBLE_EQ(s.objective, 2.0);
  EXPECT_DOUBLE_EQ(s.x[0], 1.0);
  EXPECT_DOUBLE_EQ(s.x[1], 1.0);
}

TEST(SolveLp, ContradictoryBoundsAreInfeasible) {
  LpProblem p;
  p.sense = Sense::minimize;
  p.add_variable(0, kInfinity, 1, false, "x1");
  p.add_row({1}, Relation::le, -1, "r1");
  EXPECT_EQ(solve_lp(p).status, SolveStatus::infeasible);
}

// maximize 3x+5y s.t. x <= 4, 2y <= 12, 3x+2y <= 18.  Expected values
// frozen from the basic-solution enumeration oracle: objective 36 at
// (2, 6).
TEST(SolveLp, TextbookInstanceMatchesOracle) {
  LpProblem p;
  p.sense = Sense::maximize;
  p.add_variable(0, 100, 3, false, "x");
  p.add_variable(0, 100, 5, false, "y");
  p.add_row({1, 0}, Relation::le, 4, "r1");
  p.add_row({0, 2}, Relation::le, 12, "r2");
  p.add_row({3, 2}, Relation::le, 18, "r3");

  const oracles::OracleLpResult oracle = oracles::enumerate_lp(p);
  ASSERT_TRUE(oracle.feasible);
  EXPECT_NEAR(oracle.objective, 36.0, 1e-9);

  const LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective, 36.0, 1e-9);
  EXPECT_NEAR(s.x[0], 2.0, 1e-9);
  EXPECT_NEAR(s.x[1], 6.0, 1e-9);
  check_optimal_certificates(p, s);
}

TEST(SolveLp, UnboundedRayIsDetected) {
  LpProblem p;
  p.sense = Sense::maximize;
  p.add_variable(0, kInfinity, 1, false, "x");
  p.add_row({-1}, Relation::le, 5, "r1");
  EXPECT_EQ(solve_lp(p).status, SolveStatus::unbounded);
}

TEST(SolveLp, MinimizeWithGeRowHasNonnegativeDual) {
  LpProblem p;
  p.sense = Sense::minimize;
  p.add_variable(0, 10, 2, false, "x");
  p.add_row({1}, Relation::ge, 3, "need");
  const LpSolution s = solve_lp(p);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective, 6.0, 1e-9);
  EXPECT_GE(s.duals[0], -1e-9);
  check_optimal_certificates(p, s);
}

TEST(SolveLp, RejectsMalformedProblems) {
  LpProblem empty;
  EXPECT_THROW(solve_lp(empty), MalformedProblem);

  LpProblem mismatch;
  mismatch.add_variable(0, 1, 1, false, "x");
  mismatch.add_row({1.0, 2.0}, Relation::le, 1, "r");
  EXPECT_THROW(solve_lp(mismatch), MalformedProblem);

  LpProblem nan_coeff;
  nan_coeff.add_variable(0, 1, std::numeric_limits<double>::quiet_NaN(),
                         false, "x");
  EXPECT_THROW(solve_lp(nan_coeff), MalformedProblem);

  LpProblem crossed;
  crossed.add_variable(2, 1, 1, false, "x");
  EXPECT_THROW(solve_lp(crossed), MalformedProblem);

  LpProblem unbounded_integer;
  unbounded_integer.add_variable(0, kInfinity, 1, true, "x");
  EXPECT_THROW(solve_lp(unbounded_integer), MalformedProblem);
}

TEST(SolveLp, MatchesEnumerationOracleOnRandomInstances) {
  oracles::TestRng rng(20260811);
  int optimal_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const LpProblem p = random_lp(rng);
    const LpSolution s = solve_lp(p);
    const oracles::OracleLpResult oracle = oracles::enumerate_lp(p);
    ASSERT_NE(s.status, SolveStatus::unbounded);  // bounds are finite
    ASSERT_EQ(s.status == SolveStatus::optimal, oracle.feasible)
        << "trial " << trial;
    if (s.status != SolveStatus::optimal) continue;
    ++optimal_seen;
    EXPECT_NEAR(s.objective, oracle.objective,
                1e-7 * (1.0 + std::abs(oracle.objective)))
        << "trial " << trial;
    check_optimal_certificates(p, s);
  }
  // The generator must produce a healthy mix of feasible instances.
  EXPECT_GE(optimal_seen, 30);
}

TEST(SolveLp, DeterministicAcrossRepeatSolves) {
  oracles::TestRng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const LpProblem p = random_lp(rng);
    const LpSolution a = solve_lp(p);
    const LpSolution b = solve_lp(p);
    ASSERT_EQ(a.status, b.status);
    ASSERT_EQ(a.iterations, b.iterations);
    ASSERT_EQ(a.x.size(), b.x.size());
    for (std::size_t v = 0; v < a.x.size(); ++v)
      ASSERT_EQ(a.x[v], b.x[v]);  // bit-identical
    for (std::size_t i = 0; i < a.duals.size(); ++i)
      ASSERT_EQ(a.duals[i], b.duals[i]);
    ASSERT_EQ(a.objective, b.objective);
  }
}

TEST(SolveMilp, DeterministicAcrossRepeatSolves) {
  oracles::TestRng rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    LpProblem p;
    p.sense = Sense::maximize;
    const int n = rng.uniform_int(3, 8);
    for (int v = 0; v < n; ++v)
      p.add_variable(0, 1, rng.uniform_int(-5, 5), true,
                     "b" + std::to_string(v));
    std::vector<double> coeffs(n);
    for (int v = 0; v < n; ++v) coeffs[v] = rng.uniform_int(1, 4);
    p.add_row(std::move(coeffs), Relation::le, rng.uniform_int(2, 10), "cap");
    const MilpSolution a = solve_milp(p);
    const MilpSolution b = solve_milp(p);
    ASSERT_EQ(a.status, b.status);
    ASSERT_EQ(a.nodes_explored, b.nodes_explored);
    ASSERT_EQ(a.objective, b.objective);
    ASSERT_EQ(a.best_bound, b.best_bound);
    ASSERT_EQ(a.x, b.x);
  }
}

TEST(SolveMilp, IntegralRelaxationMatchesLpExactly) {
  LpProblem p;
  p.sense = Sense::maximize;
  p.add_variable(0, 1, 2, true, "x1");
  p.add_variable(0, 1, 1, true, "x2");
  p.add_row({1, 1}, Relation::le, 1, "assign");
  const LpSolution lp_sol = solve_lp(p);
  const MilpSolution milp_sol = solve_milp(p);
  ASSERT_EQ(milp_sol.status, MilpStatus::optimal);
  EXPECT_EQ(milp_sol.objective, lp_sol.objective);
  ASSERT_EQ(milp_sol.x.size(), lp_sol.x.size());
  for (std::size_t v = 0; v < lp_sol.x.size(); ++v)
    EXPECT_EQ(milp_sol.x[v], lp_sol.x[v]);
  EXPECT_EQ(milp_sol.nodes_explored, 1);
}

// maximize 5a+4b over binaries with 3a+4b <= 4.  Frozen from the
// exhaustive enumeration of the 4 binary points: objective 5 at (1, 0).
TEST(SolveMilp, KnapsackMatchesEnumeration) {
  LpProblem p;
  p.sense = Sense::maximize;
  p.add_variable(0, 1, 5, true, "a");
  p.add_variable(0, 1, 4, true, "b");
  p.add_row({3, 4}, Relation::le, 4, "cap");

  const oracles::OracleLpResult oracle = oracles::enumerate_binary(p);
  ASSERT_TRUE(oracle.feasible);
  EXPECT_DOUBLE_EQ(oracle.objective, 5.0);

  const MilpSolution s = solve_milp(p);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_NEAR(s.objective, 5.0, 1e-9);
  EXPECT_NEAR(s.x[0], 1.0, 1e-6);
  EXPECT_NEAR(s.x[1], 0.0, 1e-6);
}

TEST(SolveMilp, BoundsExcludingAllIntegersAreInfeasible) {
  LpProblem p;
  p.sense = Sense::maximize;
  p.add_variable(0.2, 0.8, 1, true, "z");
  EXPECT_EQ(solve_milp(p).status, MilpStatus::infeasible);
}

TEST(SolveMilp, RequiresFlaggedVariables) {
  LpProblem p;
  p.sense = Sense::maximize;
  p.add_variable(0, 1, 1, false, "x");
  EXPECT_THROW(solve_milp(p), MalformedProblem);
}

TEST(SolveMilp, MatchesBinaryEnumerationOnRandomInstances) {
  oracles::TestRng rng(555);
  int optimal_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    LpProblem p;
    p.sense = rng.uniform() < 0.5 ? Sense::maximize : Sense::minimize;
    const int n = rng.uniform_int(2, 10);
    const int m = rng.uniform_int(1, 5);
    for (int v = 0; v < n; ++v)
      p.add_variable(0, 1, rng.uniform_int(-6, 6), true,
                     "b" + std::to_string(v));
    for (int i = 0; i < m; ++i) {
      std::vector<double> coeffs(n);
      for (int v = 0; v < n; ++v)
        coeffs[v] = rng.uniform() < 0.3 ? 0.0 : rng.uniform_int(-4, 4);
      const int rel = rng.uniform_int(0, 3);
      p.add_row(std::move(coeffs),
                rel == 0 ? Relation::ge : Relation::le,
                rng.uniform_int(-2, 8), "r" + std::to_string(i));
    }
    const MilpSolution s = solve_milp(p);
    const oracles::OracleLpResult oracle = oracles::enumerate_binary(p);
    ASSERT_EQ(s.status == MilpStatus::optimal, oracle.feasible)
        << "trial " << trial;
    if (s.status != MilpStatus::optimal) continue;
    ++optimal_seen;
    // Integer data: the objective must match the enumeration exactly.
    EXPECT_EQ(std::llround(s.objective), std::llround(oracle.objective))
        << "trial " << trial;
    EXPECT_NEAR(s.objective, oracle.objective, 1e-6);
    for (std::size_t v = 0; v < p.num_vars(); ++v)
      EXPECT_NEAR(s.x[v], std::round(s.x[v]), kIntegralityTol);
    // Bound consistency with the sense.
    if (p.sense == Sense::maximize)
      EXPECT_LE(s.objective, s.best_bound + 1e-9);
    else
      EXPECT_GE(s.objective, s.best_bound - 1e-9);
  }
  EXPECT_GE(optimal_seen, 20);
}

TEST(DumpLp, ProducesDocumentedShape) {
  LpProblem p;
  p.sense = Sense::maximize;
  p.add_variable(0, 1, 3, true, "x");
  p.add_variable(0, kInfinity, 5, false, "y");
  p.add_row({1, 2}, Relation::le, 4, "r1");
  const std::string text = dump_lp(p);
  EXPECT_NE(text.find("maximize"), std::string::npos);
  EXPECT_NE(text.find("subject to"), std::string::npos);
  EXPECT_NE(text.find("r1:"), std::string::npos);
  EXPECT_NE(text.find("bounds"), std::string::npos);
  EXPECT_NE(text.find("integers"), std::string::npos);
}

TEST(IterationBudget, NeverTrippedInThisSuite) {
  EXPECT_EQ(lp::iteration_limit_hits().load(), 0);
}

}  // namespace
