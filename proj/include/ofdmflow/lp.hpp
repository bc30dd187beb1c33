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
// Dense linear-program and small mixed-integer-program solver.
//
// solve_lp() runs a two-phase revised simplex on the bounded-variable
// standard form: rows become equalities through slack columns, Phase 1
// minimizes the sum of artificial variables, Phase 2 optimizes the real
// objective.  Pricing is Dantzig with an automatic switch to Bland's rule
// once the degenerate-pivot count passes 3*(rows+cols), which guarantees
// termination.  The basis inverse is kept explicitly and refactorized
// periodically.  All tolerances are fixed so results are reproducible:
// two solves of the same problem return bit-identical solutions.
//
// solve_milp() wraps solve_lp() in best-bound branch-and-bound, branching
// on the most fractional flagged variable (ties to the lowest index).

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ofdmflow/errors.hpp"

namespace ofdmflow::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Fixed solver tolerances.  Not configurable, so test expectations on
/// objective values and duals stay stable.
inline constexpr double kPivotTol = 1e-9;       // smallest usable pivot
inline constexpr double kFeasTol = 1e-7;        // row feasibility, scaled rows
inline constexpr double kDualTol = 1e-9;        // reduced-cost optimality
inline constexpr double kIntegralityTol = 1e-6; // MILP integrality
inline constexpr double kDegenerateStep = 1e-10;
inline constexpr long long kNodeCap = 1'000'000;

enum class Sense { maximize, minimize };
enum class Relation { le, eq, ge };
enum class SolveStatus { optimal, infeasible, unbounded };
enum class MilpStatus { optimal, infeasible, unbounded, node_limit };

struct Row {
  std::vector<double> coeffs;  // one per variable
  Relation rel = Relation::le;
  double rhs = 0.0;
  std::string label;
};

/// Dense LP/MILP in natural (row) form.  Lower bounds are finite;
/// upper bounds may be +infinity.  Integrality-flagged variables must
/// have finite bounds on both sides.
struct LpProblem {
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integral;
  std::vector<std::string> var_labels;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  /// Appends a variable and returns its index.
  int add_variable(double lower_bound, double upper_bound, double obj_coeff,
                   bool is_integral, std::string label) {
    objective.push_back(obj_coeff);
    lower.push_back(lower_bound);
    upper.push_back(upper_bound);
    integral.push_back(is_integral);
    var_labels.push_back(std::move(label));
    return static_cast<int>(objective.size()) - 1;
  }

  void add_row(std::vector<double> coeffs, Relation rel, double rhs,
               std::string label) {
    rows.push_back(Row{std::move(coeffs), rel, rhs, std::move(label)});
  }

  /// Rejects malformed input before any solving happens.
  void validate() const {
    const std::size_t n = num_vars();
    if (n == 0) throw MalformedProblem("problem has no variables");
    if (lower.size() != n || upper.size() != n || integral.size() != n ||
        var_labels.size() != n) {
      throw MalformedProblem("variable metadata arrays disagree in length");
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!std::isfinite(objective[v]))
        throw MalformedProblem("non-finite objective coefficient for " +
                               var_labels[v]);
      if (!std::isfinite(lower[v]))
        throw MalformedProblem("non-finite lower bound for " + var_labels[v]);
      if (std::isnan(upper[v]) || upper[v] == -kInfinity)
        throw MalformedProblem("invalid upper bound for " + var_labels[v]);
      if (lower[v] > upper[v])
        throw MalformedProblem("lower bound exceeds upper bound for " +
                               var_labels[v]);
      if (integral[v] && !(std::isfinite(upper[v])))
        throw MalformedProblem("integrality-flagged variable " +
                               var_labels[v] + " lacks finite bounds");
    }
    for (const Row& row : rows) {
      if (row.coeffs.size() != n)
        throw MalformedProblem("row '" + row.label +
                               "' coefficient count mismatch");
      for (double a : row.coeffs)
        if (!std::isfinite(a))
          throw MalformedProblem("non-finite coefficient in row '" +
                                 row.label + "'");
      if (!std::isfinite(row.rhs))
        throw MalformedProblem("non-finite rhs in row '" + row.label + "'");
    }
  }
};

struct LpSolution {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<double> x;      // primal values, empty unless optimal
  double objective = 0.0;
  std::vector<double> duals;  // one per row, empty unless optimal
  long long iterations = 0;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  long long nodes_explored = 0;
  double best_bound = 0.0;
};

/// Counts IterationLimit throws process-wide; the test suites assert it
/// stays at zero.
inline std::atomic<long long>& iteration_limit_hits() {
  static std::atomic<long long> hits{0};
  return hits;
}

namespace detail {

enum VarState : std::int8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

class SimplexSolver {
 public:
  explicit SimplexSolver(const LpProblem& p) : user_(p) { build(); }

  LpSolution run() {
    LpSolution out;
    if (!artificials_.empty()) {
      if (!run_phase(phase1_cost_)) throw Error("phase 1 reported unbounded");
      double infeas = 0.0;
      for (int a : artificials_) infeas += x_[a];
      if (infeas > kFeasTol) {
        out.status = SolveStatus::infeasible;
        out.iterations = iterations_;
        return out;
      }
      // Pin artificials at zero; they may stay basic but can no longer move.
      for (int a : artificials_) {
        up_[a] = 0.0;
        if (state_[a] != kBasic) x_[a] = 0.0;
      }
      refactorize();
      recompute_basics();
    }
    if (!run_phase(phase2_cost_)) {
      out.status = SolveStatus::unbounded;
      out.iterations = iterations_;
      return out;
    }
    out.status = SolveStatus::optimal;
    out.iterations = iterations_;
    out.x.assign(x_.begin(), x_.begin() + n_struct_);
    out.objective = 0.0;
    for (int v = 0; v < n_struct_; ++v)
      out.objective += user_.objective[v] * x_[v];
    // Duals in the user's sign convention: for a maximization, y >= 0 on
    // <=-rows, y <= 0 on >=-rows, free on =-rows.
    const std::vector<double> y = multipliers(phase2_cost_);
    const double sign = user_.sense == Sense::maximize ? -1.0 : 1.0;
    out.duals.resize(m_);
    for (int i = 0; i < m_; ++i) out.duals[i] = sign * y[i] / row_scale_[i];
    return out;
  }

 private:
  void build() {
    user_.validate();
    m_ = static_cast<int>(user_.num_rows());
    n_struct_ = static_cast<int>(user_.num_vars());
    const double obj_sign = user_.sense == Sense::maximize ? -1.0 : 1.0;

    row_scale_.assign(m_, 1.0);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (double a : user_.rows[i].coeffs) s = std::max(s, std::abs(a));
      row_scale_[i] = s > 0.0 ? s : 1.0;
    }

    cols_.clear();
    lo_.clear();
    up_.clear();
    phase2_cost_.clear();
    for (int v = 0; v < n_struct_; ++v) {
      std::vector<double> col(m_);
      for (int i = 0; i < m_; ++i)
        col[i] = user_.rows[i].coeffs[v] / row_scale_[i];
      cols_.push_back(std::move(col));
      lo_.push_back(user_.lower[v]);
      up_.push_back(user_.upper[v]);
      phase2_cost_.push_back(obj_sign * user_.objective[v]);
    }
    rhs_.resize(m_);
    for (int i = 0; i < m_; ++i) rhs_[i] = user_.rows[i].rhs / row_scale_[i];

    // Slack column per inequality row: +1 for <=, -1 for >=, bounds [0, inf).
    std::vector<int> slack_of_row(m_, -1);
    for (int i = 0; i < m_; ++i) {
      if (user_.rows[i].rel == Relation::eq) continue;
      std::vector<double> col(m_, 0.0);
      col[i] = user_.rows[i].rel == Relation::le ? 1.0 : -1.0;
      slack_of_row[i] = static_cast<int>(cols_.size());
      cols_.push_back(std::move(col));
      lo_.push_back(0.0);
      up_.push_back(kInfinity);
      phase2_cost_.push_back(0.0);
    }

    // Initial point: structurals at their (finite) lower bound, slacks 0.
    x_.assign(cols_.size(), 0.0);
    state_.assign(cols_.size(), kAtLower);
    for (int v = 0; v < n_struct_; ++v) x_[v] = lo_[v];

    std::vector<double> resid = rhs_;
    for (std::size_t v = 0; v < cols_.size(); ++v) {
      if (x_[v] == 0.0) continue;
      for (int i = 0; i < m_; ++i) resid[i] -= cols_[v][i] * x_[v];
    }

    // Crash basis: the slack absorbs the residual when its sign allows,
    // otherwise an artificial column does.
    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      const int s = slack_of_row[i];
      if (s >= 0) {
        const double sval = cols_[s][i] > 0 ? resid[i] : -resid[i];
        if (sval >= 0.0) {
          basis_[i] = s;
          x_[s] = sval;
          state_[s] = kBasic;
          continue;
        }
      }
      std::vector<double> col(m_, 0.0);
      col[i] = resid[i] >= 0.0 ? 1.0 : -1.0;
      const int a = static_cast<int>(cols_.size());
      cols_.push_back(std::move(col));
      lo_.push_back(0.0);
      up_.push_back(kInfinity);
      phase2_cost_.push_back(0.0);
      x_.push_back(std::abs(resid[i]));
      state_.push_back(kBasic);
      artificials_.push_back(a);
      basis_[i] = a;
    }
    phase1_cost_.assign(cols_.size(), 0.0);
    for (int a : artificials_) phase1_cost_[a] = 1.0;
    phase2_cost_.resize(cols_.size(), 0.0);

    iteration_cap_ = 50LL * (m_ + n_struct_ + 1);
    degenerate_cap_ = 3LL * (m_ + n_struct_);
    refactorize();
  }

  // y = c_B^T * Binv
  std::vector<double> multipliers(const std::vector<double>& cost) const {
    std::vector<double> y(m_, 0.0);
    for (int k = 0; k < m_; ++k) {
      const double cb = cost[basis_[k]];
      if (cb == 0.0) continue;
      const double* row = &binv_[static_cast<std::size_t>(k) * m_];
      for (int i = 0; i < m_; ++i) y[i] += cb * row[i];
    }
    return y;
  }

  // Gauss-Jordan inversion of the basis matrix with partial pivoting.
  void refactorize() {
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    if (m_ == 0) return;
    std::vector<double> work(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int k = 0; k < m_; ++k)
      for (int i = 0; i < m_; ++i)
        work[static_cast<std::size_t>(i) * m_ + k] = cols_[basis_[k]][i];
    for (int i = 0; i < m_; ++i) binv_[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      double best = std::abs(work[static_cast<std::size_t>(col) * m_ + col]);
      for (int i = col + 1; i < m_; ++i) {
        const double v = std::abs(work[static_cast<std::size_t>(i) * m_ + col]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-12) throw Error("singular basis during refactorization");
      if (piv != col) {
        for (int j = 0; j < m_; ++j) {
          std::swap(work[static_cast<std::size_t>(piv) * m_ + j],
                    work[static_cast<std::size_t>(col) * m_ + j]);
          std::swap(binv_[static_cast<std::size_t>(piv) * m_ + j],
                    binv_[static_cast<std::size_t>(col) * m_ + j]);
        }
      }
      const double d = work[static_cast<std::size_t>(col) * m_ + col];
      for (int j = 0; j < m_; ++j) {
        work[static_cast<std::size_t>(col) * m_ + j] /= d;
        binv_[static_cast<std::size_t>(col) * m_ + j] /= d;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == col) continue;
        const double f = work[static_cast<std::size_t>(i) * m_ + col];
        if (f == 0.0) continue;
        for (int j = 0; j < m_; ++j) {
          work[static_cast<std::size_t>(i) * m_ + j] -=
              f * work[static_cast<std::size_t>(col) * m_ + j];
          binv_[static_cast<std::size_t>(i) * m_ + j] -=
              f * binv_[static_cast<std::size_t>(col) * m_ + j];
        }
      }
    }
    pivots_since_refactor_ = 0;
  }

  // x_B = Binv * (b - N x_N)
  void recompute_basics() {
    std::vector<double> r = rhs_;
    for (std::size_t v = 0; v < cols_.size(); ++v) {
      if (state_[v] == kBasic || x_[v] == 0.0) continue;
      for (int i = 0; i < m_; ++i) r[i] -= cols_[v][i] * x_[v];
    }
    for (int k = 0; k < m_; ++k) {
      double acc = 0.0;
      const double* row = &binv_[static_cast<std::size_t>(k) * m_];
      for (int i = 0; i < m_; ++i) acc += row[i] * r[i];
      x_[basis_[k]] = acc;
    }
  }

  // One simplex phase; returns false on an unbounded ray.
  bool run_phase(const std::vector<double>& cost) {
    while (true) {
      if (iterations_ >= iteration_cap_) {
        iteration_limit_hits().fetch_add(1, std::memory_order_relaxed);
        throw IterationLimit("simplex iteration cap exceeded (" +
                             std::to_string(iteration_cap_) + ")");
      }
      const std::vector<double> y = multipliers(cost);

      int enter = -1;
      double best_score = kDualTol;
      for (std::size_t v = 0; v < cols_.size(); ++v) {
        if (state_[v] == kBasic) continue;
        if (lo_[v] == up_[v]) continue;  // fixed, never enters
        double d = cost[v];
        for (int i = 0; i < m_; ++i) {
          const double a = cols_[v][i];
          if (a != 0.0) d -= y[i] * a;
        }
        const bool eligible = state_[v] == kAtLower ? d < -kDualTol
                                                    : d > kDualTol;
        if (!eligible) continue;
        if (bland_) {
          enter = static_cast<int>(v);
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          enter = static_cast<int>(v);
        }
      }
      if (enter < 0) return true;  // phase optimal

      // FTRAN: w = Binv * A_enter
      std::vector<double> w(m_, 0.0);
      for (int k = 0; k < m_; ++k) {
        double acc = 0.0;
        const double* row = &binv_[static_cast<std::size_t>(k) * m_];
        const double* col = cols_[enter].data();
        for (int i = 0; i < m_; ++i) acc += row[i] * col[i];
        w[k] = acc;
      }
      const double dir = state_[enter] == kAtLower ? 1.0 : -1.0;

      // Ratio test: smallest step over blocking basics and the entering
      // variable's own bound flip.
      double t_min = kInfinity;
      for (int k = 0; k < m_; ++k) {
        const double wk = dir * w[k];
        const int bv = basis_[k];
        double t;
        if (wk > kPivotTol) {
          t = (x_[bv] - lo_[bv]) / wk;
        } else if (wk < -kPivotTol && up_[bv] < kInfinity) {
          t = (x_[bv] - up_[bv]) / wk;
        } else {
          continue;
        }
        t_min = std::min(t_min, std::max(t, 0.0));
      }
      const double t_flip = up_[enter] - lo_[enter];
      if (t_flip <= t_min) {
        if (t_flip == kInfinity) return false;  // unbounded ray
        // Bound flip, no basis change.
        x_[enter] += dir * t_flip;
        for (int k = 0; k < m_; ++k) x_[basis_[k]] -= dir * t_flip * w[k];
        state_[enter] = state_[enter] == kAtLower ? kAtUpper : kAtLower;
        ++iterations_;
        continue;
      }
      if (t_min == kInfinity) return false;  // unbounded ray

      const double tie = 1e-9 * (1.0 + std::abs(t_min));
      int leave = -1;
      double leave_w = -1.0;
      for (int k = 0; k < m_; ++k) {
        const double wk = dir * w[k];
        const int bv = basis_[k];
        double t;
        if (wk > kPivotTol) {
          t = (x_[bv] - lo_[bv]) / wk;
        } else if (wk < -kPivotTol && up_[bv] < kInfinity) {
          t = (x_[bv] - up_[bv]) / wk;
        } else {
          continue;
        }
        if (std::max(t, 0.0) > t_min + tie) continue;
        if (leave < 0) {
          leave = k;
          leave_w = std::abs(w[k]);
          continue;
        }
        if (bland_) {
          if (bv < basis_[leave]) {
            leave = k;
            leave_w = std::abs(w[k]);
          }
        } else if (std::abs(w[k]) > leave_w) {
          leave = k;
          leave_w = std::abs(w[k]);
        }
      }

      const double step = std::max(t_min, 0.0);
      x_[enter] += dir * step;
      for (int k = 0; k < m_; ++k) x_[basis_[k]] -= dir * step * w[k];

      const int leaving_var = basis_[leave];
      const double wl = dir * w[leave];
      x_[leaving_var] = wl > 0 ? lo_[leaving_var] : up_[leaving_var];
      state_[leaving_var] = wl > 0 ? kAtLower : kAtUpper;
      basis_[leave] = enter;
      state_[enter] = kBasic;
      pivot_update(leave, w);
      ++iterations_;

      if (step <= kDegenerateStep && !bland_) {
        if (++degenerate_pivots_ > degenerate_cap_) bland_ = true;
      }
      if (++pivots_since_refactor_ >= 64) {
        refactorize();
        recompute_basics();
      }
    }
  }

  // Product-form update of the explicit inverse after a pivot in row r.
  void pivot_update(int r, const std::vector<double>& w) {
    const double piv = w[r];
    double* prow = &binv_[static_cast<std::size_t>(r) * m_];
    for (int j = 0; j < m_; ++j) prow[j] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || w[i] == 0.0) continue;
      double* irow = &binv_[static_cast<std::size_t>(i) * m_];
      const double f = w[i];
      for (int j = 0; j < m_; ++j) irow[j] -= f * prow[j];
    }
  }

  const LpProblem& user_;
  int m_ = 0;
  int n_struct_ = 0;
  std::vector<std::vector<double>> cols_;
  std::vector<double> lo_, up_;
  std::vector<double> rhs_;
  std::vector<double> row_scale_;
  std::vector<double> phase1_cost_, phase2_cost_;
  std::vector<int> artificials_;
  std::vector<int> basis_;
  std::vector<std::int8_t> state_;
  std::vector<double> x_;
  std::vector<double> binv_;
  long long iterations_ = 0;
  long long iteration_cap_ = 0;
  long long degenerate_pivots_ = 0;
  long long degenerate_cap_ = 0;
  int pivots_since_refactor_ = 0;
  bool bland_ = false;
};

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& problem) {
  detail::SimplexSolver solver(problem);
  return solver.run();
}

/// Evaluates the dual objective from the dual side alone (row duals plus
/// bound multipliers recovered from reduced costs).  At an optimum it
/// matches the primal objective; the gap is the strong-duality check.
inline double dual_objective(const LpProblem& problem,
                             const LpSolution& solution) {
  if (solution.status != SolveStatus::optimal)
    throw DomainError("dual_objective requires an optimal solution");
  const std::size_t n = problem.num_vars();
  double value = 0.0;
  for (std::size_t i = 0; i < problem.rows.size(); ++i)
    value += solution.duals[i] * problem.rows[i].rhs;
  for (std::size_t v = 0; v < n; ++v) {
    double d = problem.objective[v];
    double scale = 1.0 + std::abs(problem.objective[v]);
    for (std::size_t i = 0; i < problem.rows.size(); ++i) {
      const double a = problem.rows[i].coeffs[v];
      d -= solution.duals[i] * a;
      scale += std::abs(solution.duals[i] * a);
    }
    if (std::abs(d) <= 1e-9 * scale) continue;
    const bool take_upper =
        (problem.sense == Sense::maximize) == (d > 0.0);
    value += d * (take_upper ? problem.upper[v] : problem.lower[v]);
  }
  return value;
}

namespace detail {

struct BnbNode {
  std::vector<double> lower, upper;
  double bound;  // parent LP objective
  long long id;
};

}  // namespace detail

inline MilpSolution solve_milp(const LpProblem& problem) {
  problem.validate();
  const std::size_t n = problem.num_vars();
  bool any_flagged = false;
  for (std::size_t v = 0; v < n; ++v) any_flagged = any_flagged || problem.integral[v];
  if (!any_flagged)
    throw MalformedProblem("solve_milp requires integrality-flagged variables");

  const bool maximize = problem.sense == Sense::maximize;
  const double worst =
      maximize ? -kInfinity : kInfinity;
  auto better = [maximize](double a, double b) {
    return maximize ? a > b : a < b;
  };

  // Best-bound node selection; ties pop the oldest node, so the search
  // order is a pure function of the input.
  auto node_order = [maximize](const detail::BnbNode& a,
                               const detail::BnbNode& b) {
    if (a.bound != b.bound) return maximize ? a.bound < b.bound : a.bound > b.bound;
    return a.id > b.id;
  };
  std::priority_queue<detail::BnbNode, std::vector<detail::BnbNode>,
                      decltype(node_order)>
      open(node_order);

  long long next_id = 0;
  open.push(detail::BnbNode{problem.lower, problem.upper,
                            maximize ? kInfinity : -kInfinity, next_id++});

  MilpSolution out;
  bool have_incumbent = false;
  double incumbent_obj = worst;
  std::vector<double> incumbent_x;
  long long explored = 0;
  bool hit_node_cap = false;
  bool hit_unbounded = false;

  LpProblem node_problem = problem;

  while (!open.empty()) {
    if (explored >= kNodeCap) {
      hit_node_cap = true;
      break;
    }
    detail::BnbNode node = open.top();
    open.pop();
    if (have_incumbent) {
      const double margin = 1e-9 * (1.0 + std::abs(incumbent_obj));
      if (!better(node.bound, incumbent_obj + (maximize ? margin : -margin)))
        continue;
    }
    node_problem.lower = std::move(node.lower);
    node_problem.upper = std::move(node.upper);
    const LpSolution relax = solve_lp(node_problem);
    ++explored;
    if (relax.status == SolveStatus::infeasible) continue;
    if (relax.status == SolveStatus::unbounded) {
      hit_unbounded = true;
      break;
    }
    if (have_incumbent) {
      const double margin = 1e-9 * (1.0 + std::abs(incumbent_obj));
      if (!better(relax.objective, incumbent_obj + (maximize ? margin : -margin)))
        continue;
    }

    // Most fractional flagged variable, ties to the lowest index.
    int branch_var = -1;
    double branch_frac = kIntegralityTol;
    for (std::size_t v = 0; v < n; ++v) {
      if (!problem.integral[v]) continue;
      const double val = relax.x[v];
      const double frac = std::abs(val - std::round(val));
      if (frac > branch_frac) {
        branch_frac = frac;
        branch_var = static_cast<int>(v);
      }
    }
    if (branch_var < 0) {
      // Integral: candidate incumbent.
      if (!have_incumbent || better(relax.objective, incumbent_obj)) {
        have_incumbent = true;
        incumbent_obj = relax.objective;
        incumbent_x = relax.x;
      }
      continue;
    }

    const double val = relax.x[branch_var];
    detail::BnbNode down{node_problem.lower, node_problem.upper,
                         relax.objective, next_id++};
    down.upper[branch_var] = std::floor(val);
    if (down.lower[branch_var] <= down.upper[branch_var]) open.push(std::move(down));
    detail::BnbNode upn{node_problem.lower, node_problem.upper,
                        relax.objective, next_id++};
    upn.lower[branch_var] = std::ceil(val);
    if (upn.lower[branch_var] <= upn.upper[branch_var]) open.push(std::move(upn));
  }

  out.nodes_explored = explored;
  if (hit_unbounded) {
    out.status = MilpStatus::unbounded;
    out.best_bound = maximize ? kInfinity : -kInfinity;
    return out;
  }
  if (hit_node_cap) {
    out.status = MilpStatus::node_limit;
    double bound = have_incumbent ? incumbent_obj : worst;
    while (!open.empty()) {
      bound = better(open.top().bound, bound) ? open.top().bound : bound;
      open.pop();
    }
    out.best_bound = bound;
    if (have_incumbent) {
      out.x = std::move(incumbent_x);
      out.objective = incumbent_obj;
    }
    return out;
  }
  if (!have_incumbent) {
    out.status = MilpStatus::infeasible;
    return out;
  }
  out.status = MilpStatus::optimal;
  out.x = std::move(incumbent_x);
  out.objective = incumbent_obj;
  out.best_bound = incumbent_obj;
  return out;
}

namespace detail {

inline void append_term(std::ostream& os, double coeff, const std::string& name,
                        bool& first) {
  if (coeff == 0.0) return;
  if (first) {
    if (coeff < 0) os << "- ";
    first = false;
  } else {
    os << (coeff < 0 ? " - " : " + ");
  }
  const double mag = std::abs(coeff);
  if (mag != 1.0) os << mag << " ";
  os << name;
}

}  // namespace detail

/// Human-readable LP-text dump for debugging; grammar documented in the
/// README, not bit-critical.
inline std::string dump_lp(const LpProblem& p) {
  std::ostringstream os;
  os << (p.sense == Sense::maximize ? "maximize" : "minimize") << "\n  obj:";
  bool first = true;
  os << " ";
  for (std::size_t v = 0; v < p.num_vars(); ++v)
    detail::append_term(os, p.objective[v], p.var_labels[v], first);
  if (first) os << "0";
  os << "\nsubject to\n";
  for (const Row& row : p.rows) {
    os << "  " << (row.label.empty() ? "r" : row.label) << ": ";
    bool f = true;
    for (std::size_t v = 0; v < p.num_vars(); ++v)
      detail::append_term(os, row.coeffs[v], p.var_labels[v], f);
    if (f) os << "0";
    switch (row.rel) {
      case Relation::le: os << " <= "; break;
      case Relation::eq: os << " = "; break;
      case Relation::ge: os << " >= "; break;
    }
    os << row.rhs << "\n";
  }
  os << "bounds\n";
  for (std::size_t v = 0; v < p.num_vars(); ++v) {
    os << "  " << p.lower[v] << " <= " << p.var_labels[v] << " <= ";
    if (p.upper[v] == kInfinity)
      os << "inf";
    else
      os << p.upper[v];
    os << "\n";
  }
  bool any = false;
  for (std::size_t v = 0; v < p.num_vars(); ++v) any = any || p.integral[v];
  if (any) {
    os << "integers\n ";
    for (std::size_t v = 0; v < p.num_vars(); ++v)
      if (p.integral[v]) os << " " << p.var_labels[v];
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

}  // namespace ofdmflow::lp
