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
// Generalized min-cost network flow with arc gains (a unit entering arc a
// delivers gain_a units at its head), and its robust counterpart under
// uncertain demand.
//
// Demand uncertainty is moved into the coefficient matrix before
// robustification: each uncertain node gets a unit-flow artificial arc
// from a super node, whose gain coefficient carries the node's balance.
// A deviation of the balance is then literally a deviation of that gain
// coefficient, which the budget-of-uncertainty counterpart protects
// row by row.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ofdmflow/errors.hpp"
#include "ofdmflow/lp.hpp"

namespace ofdmflow {

struct GainNode {
  std::string id;
  double balance = 0.0;  // supply > 0, demand < 0, transshipment 0
  // Demand rows are written as >= (free disposal).  The transform sets
  // this for uncertain nodes whose balance moved into an artificial arc,
  // so the row keeps its demand form after the balance becomes 0.
  bool demand_form = false;

  bool is_demand_row() const { return balance < 0.0 || demand_form; }
};

struct GainArc {
  std::string tail;
  std::string head;
  double capacity = 0.0;
  double gain = 1.0;
  double cost = 0.0;
  bool artificial = false;   // created by the demand->gain transform
  double flow_lower = 0.0;   // 1 for artificial arcs (fixed unit flow)
};

struct GainNetwork {
  std::vector<GainNode> nodes;
  std::vector<GainArc> arcs;

  int node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].id == id) return static_cast<int>(i);
    return -1;
  }

  void validate() const {
    std::set<std::string> seen;
    for (const GainNode& node : nodes) {
      if (node.id.empty()) throw MalformedProblem("node id must be nonempty");
      if (!seen.insert(node.id).second)
        throw MalformedProblem("duplicate node id '" + node.id + "'");
      if (!std::isfinite(node.balance))
        throw MalformedProblem("non-finite balance at node '" + node.id + "'");
    }
    for (const GainArc& arc : arcs) {
      if (node_index(arc.tail) < 0 || node_index(arc.head) < 0)
        throw MalformedProblem("arc endpoint not in node set: " + arc.tail +
                               "->" + arc.head);
      if (arc.tail == arc.head)
        throw MalformedProblem("self-loop arc at '" + arc.tail + "'");
      if (!std::isfinite(arc.capacity) || arc.capacity < 0.0)
        throw MalformedProblem("arc capacity must be finite and >= 0");
      if (!std::isfinite(arc.gain) || !std::isfinite(arc.cost))
        throw MalformedProblem("arc gain and cost must be finite");
      if (!arc.artificial && !(arc.gain > 0.0))
        throw MalformedProblem("real arcs need positive gain: " + arc.tail +
                               "->" + arc.head);
      if (arc.artificial &&
          (arc.flow_lower != arc.capacity || arc.capacity != 1.0))
        throw MalformedProblem("artificial arcs carry fixed unit flow");
      if (!arc.artificial && arc.flow_lower != 0.0)
        throw MalformedProblem("real arcs have zero flow lower bound");
    }
  }
};

/// Uncertain demand: node i's balance deviates by up to `deviation`
/// against it, protected with a per-row budget gamma in [0, 1] (each row
/// holds exactly one uncertain coefficient after the transform; a
/// fractional budget protects a fractional deviation).
struct DemandUncertainty {
  struct Entry {
    std::string node;
    double deviation = 0.0;
    double gamma = 1.0;
  };
  std::vector<Entry> entries;

  void validate() const {
    std::set<std::string> seen;
    for (const Entry& e : entries) {
      if (!seen.insert(e.node).second)
        throw MalformedProblem("duplicate uncertain node '" + e.node + "'");
      if (!(e.deviation >= 0.0) || !std::isfinite(e.deviation))
        throw MalformedProblem("deviation must be finite and >= 0");
      if (!(e.gamma >= 0.0 && e.gamma <= 1.0))
        throw MalformedProblem("gamma must lie in [0, 1]");
    }
  }
};

/// One uncertain coefficient in the flow LP: row `row` (node row), flow
/// variable `var` (artificial arc), magnitude `deviation`, budget `gamma`.
struct UncertainGain {
  std::string node;
  int row = 0;
  int var = 0;
  double nominal = 0.0;
  double deviation = 0.0;
  double gamma = 0.0;
};

struct TransformResult {
  GainNetwork network;
  std::vector<UncertainGain> gains;
};

struct ProtectionInfo {
  std::string node;
  double z = 0.0;
  double p = 0.0;
};

struct RobustFlowSolution {
  lp::SolveStatus status = lp::SolveStatus::infeasible;
  std::vector<double> flows;  // original (non-artificial) arcs, input order
  double objective = 0.0;
  std::vector<double> artificial_flows;     // diagnostics
  std::vector<ProtectionInfo> protection;   // diagnostics
};

/// Cost-minimizing generalized-flow LP.  One flow variable per arc with
/// bounds [flow_lower, capacity].  Supply and transshipment nodes get
/// exact conservation (out - gain*in = balance); demand nodes get the
/// free-disposal form (gain*in - out >= -balance), which keeps the rows
/// robustifiable.  Row r corresponds to nodes[r], variable v to arcs[v].
inline lp::LpProblem build_gainflow_lp(const GainNetwork& network) {
  network.validate();
  lp::LpProblem p;
  p.sense = lp::Sense::minimize;
  for (std::size_t a = 0; a < network.arcs.size(); ++a) {
    const GainArc& arc = network.arcs[a];
    p.add_variable(arc.flow_lower, arc.capacity, arc.cost, false,
                   "flow[" + std::to_string(a) + ":" + arc.tail + "->" +
                       arc.head + "]");
  }
  for (const GainNode& node : network.nodes) {
    std::vector<double> row(network.arcs.size(), 0.0);
    const double sign = node.is_demand_row() ? -1.0 : 1.0;
    for (std::size_t a = 0; a < network.arcs.size(); ++a) {
      const GainArc& arc = network.arcs[a];
      if (arc.tail == node.id) row[a] += sign;
      if (arc.head == node.id) row[a] -= sign * arc.gain;
    }
    if (node.is_demand_row())
      p.add_row(std::move(row), lp::Relation::ge, -node.balance,
                "node[" + node.id + "]");
    else
      p.add_row(std::move(row), lp::Relation::eq, node.balance,
                "node[" + node.id + "]");
  }
  return p;
}

/// Rewrites uncertain node balances as uncertain gain coefficients.
/// A super node feeds every uncertain node through a unit-flow artificial
/// arc whose gain equals the node's nominal balance; the node's own
/// balance becomes 0 while its row keeps its original sense.  The nominal
/// LP of the transformed network has the same optimal objective as the
/// original's.  A zero nominal balance with positive deviation is valid:
/// artificial arcs are exempt from the positive-gain rule.
inline TransformResult transform_demand_to_gain(
    const GainNetwork& network, const DemandUncertainty& uncertainty) {
  network.validate();
  uncertainty.validate();
  TransformResult result;
  result.network = network;
  if (uncertainty.entries.empty()) return result;

  std::string super_id = "sigma";
  while (result.network.node_index(super_id) >= 0) super_id += "_";
  result.network.nodes.push_back(
      GainNode{super_id, static_cast<double>(uncertainty.entries.size()),
               false});

  for (const DemandUncertainty::Entry& entry : uncertainty.entries) {
    const int i = result.network.node_index(entry.node);
    if (i < 0)
      throw MalformedProblem("uncertain node '" + entry.node +
                             "' not in network");
    GainNode& node = result.network.nodes[i];
    const double nominal_balance = node.balance;
    if (nominal_balance <= 0.0) node.demand_form = true;
    node.balance = 0.0;

    GainArc arc;
    arc.tail = super_id;
    arc.head = entry.node;
    arc.capacity = 1.0;
    arc.flow_lower = 1.0;
    arc.gain = nominal_balance;  // row coefficient reproduces the balance
    arc.cost = 0.0;
    arc.artificial = true;
    const int var = static_cast<int>(result.network.arcs.size());
    result.network.arcs.push_back(arc);

    result.gains.push_back(UncertainGain{
        entry.node, i, var, std::abs(nominal_balance), entry.deviation,
        entry.gamma});
  }
  return result;
}

/// Budget-of-uncertainty robust counterpart.  For each row i carrying
/// uncertain coefficients J_i with budget Gamma_i: adds z_i >= 0 and
/// p_{i,v} >= 0, the protection rows z_i + p_{i,v} >= delta_{i,v} * x_v
/// (all uncertain variables are nonnegative flows), and tightens row i by
/// Gamma_i * z_i + sum_v p_{i,v} on its binding side.  Equality rows may
/// not carry uncertainty; relax them first.
inline lp::LpProblem robust_counterpart(
    const lp::LpProblem& problem, const std::vector<UncertainGain>& uncertain,
    const std::map<int, double>& gamma_by_row) {
  problem.validate();
  lp::LpProblem out = problem;

  std::map<int, std::vector<const UncertainGain*>> by_row;
  for (const UncertainGain& u : uncertain) {
    if (u.row < 0 || u.row >= static_cast<int>(problem.rows.size()))
      throw MalformedProblem("uncertain row index out of range");
    if (u.var < 0 || u.var >= static_cast<int>(problem.num_vars()))
      throw MalformedProblem("uncertain variable index out of range");
    if (problem.lower[u.var] < 0.0)
      throw MalformedProblem(
          "uncertain variables must have nonnegative lower bounds");
    if (problem.rows[u.row].rel == lp::Relation::eq)
      throw EqualityUnderUncertainty("row '" + problem.rows[u.row].label +
                                     "' is an equality under uncertainty");
    if (!(u.deviation >= 0.0))
      throw MalformedProblem("deviation must be nonnegative");
    by_row[u.row].push_back(&u);
  }

  for (const auto& [row, entries] : by_row) {
    const auto it = gamma_by_row.find(row);
    if (it == gamma_by_row.end())
      throw MalformedProblem("missing budget for uncertain row " +
                             std::to_string(row));
    const double gamma = it->second;
    if (!(gamma >= 0.0 && gamma <= static_cast<double>(entries.size())))
      throw MalformedProblem("budget out of [0, K] for row " +
                             std::to_string(row));

    const std::string row_label = out.rows[row].label;
    const int z = out.add_variable(0.0, lp::kInfinity, 0.0, false,
                                   "z[" + row_label + "]");
    for (lp::Row& r : out.rows) r.coeffs.resize(out.num_vars(), 0.0);

    std::vector<int> p_vars;
    for (const UncertainGain* u : entries) {
      const int pv = out.add_variable(
          0.0, lp::kInfinity, 0.0, false,
          "p[" + row_label + "][" + out.var_labels[u->var] + "]");
      for (lp::Row& r : out.rows) r.coeffs.resize(out.num_vars(), 0.0);
      p_vars.push_back(pv);
      std::vector<double> prot(out.num_vars(), 0.0);
      prot[z] = 1.0;
      prot[pv] = 1.0;
      prot[u->var] = -u->deviation;
      out.add_row(std::move(prot), lp::Relation::ge, 0.0,
                  "protect[" + row_label + "][" + out.var_labels[u->var] +
                      "]");
    }

    // Tighten the binding side of the protected row.
    const double side = out.rows[row].rel == lp::Relation::ge ? -1.0 : 1.0;
    out.rows[row].coeffs[z] = side * gamma;
    for (int pv : p_vars) out.rows[row].coeffs[pv] = side;
  }
  return out;
}

/// Direct adversarial feasibility check, independent of the dualized
/// counterpart: per row, up to Gamma_i uncertain coefficients (fractional
/// last one) move against the flow vector; reports the worst violated row.
struct WorstCaseReport {
  bool robust_feasible = true;
  std::string row_label;
  double violation = 0.0;
};

inline WorstCaseReport worst_case_oracle(const GainNetwork& network,
                                         const DemandUncertainty& uncertainty,
                                         const std::vector<double>& flows) {
  const TransformResult tr = transform_demand_to_gain(network, uncertainty);
  const lp::LpProblem problem = build_gainflow_lp(tr.network);

  if (flows.size() != network.arcs.size())
    throw DomainError("flow vector length does not match arc count");
  std::vector<double> x(flows);
  x.resize(tr.network.arcs.size(), 1.0);  // artificial arcs carry unit flow
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] < problem.lower[v] - 1e-9 || x[v] > problem.upper[v] + 1e-9)
      throw DomainError("flow outside arc bounds on " + problem.var_labels[v]);
  }

  std::map<int, std::vector<const UncertainGain*>> by_row;
  for (const UncertainGain& u : tr.gains) by_row[u.row].push_back(&u);

  WorstCaseReport report;
  for (std::size_t i = 0; i < problem.rows.size(); ++i) {
    const lp::Row& row = problem.rows[i];
    double lhs = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) lhs += row.coeffs[v] * x[v];

    double adversarial = 0.0;
    const auto it = by_row.find(static_cast<int>(i));
    if (it != by_row.end()) {
      // Candidate degradations delta_v * x_v, largest first; ties keep
      // the lower variable index.
      std::vector<std::pair<double, int>> cand;
      for (const UncertainGain* u : it->second)
        cand.emplace_back(u->deviation * x[u->var], u->var);
      std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      double budget = it->second.front()->gamma;
      for (const auto& [value, var] : cand) {
        if (budget <= 0.0) break;
        adversarial += std::min(1.0, budget) * value;
        budget -= 1.0;
      }
    }

    double violation = 0.0;
    switch (row.rel) {
      case lp::Relation::ge:
        violation = row.rhs - (lhs - adversarial);
        break;
      case lp::Relation::le:
        violation = (lhs + adversarial) - row.rhs;
        break;
      case lp::Relation::eq:
        violation = std::abs(lhs - row.rhs);
        break;
    }
    if (violation > report.violation) {
      report.violation = violation;
      report.row_label = row.label;
    }
  }
  report.robust_feasible = report.violation <= 1e-7;
  return report;
}

/// End-to-end composition: transform, build, robustify, solve.  Flows are
/// reported on the original arcs; artificial-arc flows and protection
/// variables surface as diagnostics.
inline RobustFlowSolution solve_robust_gainflow(
    const GainNetwork& network, const DemandUncertainty& uncertainty) {
  const TransformResult tr = transform_demand_to_gain(network, uncertainty);
  const lp::LpProblem nominal = build_gainflow_lp(tr.network);

  std::map<int, double> gamma_by_row;
  for (const UncertainGain& u : tr.gains) gamma_by_row[u.row] = u.gamma;
  const lp::LpProblem robust =
      robust_counterpart(nominal, tr.gains, gamma_by_row);
  const lp::LpSolution sol = lp::solve_lp(robust);

  RobustFlowSolution out;
  out.status = sol.status;
  if (sol.status != lp::SolveStatus::optimal) return out;

  out.objective = sol.objective;
  out.flows.resize(network.arcs.size());
  for (std::size_t a = 0; a < network.arcs.size(); ++a)
    out.flows[a] = std::clamp(sol.x[a], network.arcs[a].flow_lower,
                              network.arcs[a].capacity);
  for (std::size_t a = network.arcs.size(); a < tr.network.arcs.size(); ++a)
    out.artificial_flows.push_back(sol.x[a]);

  // z/p variables were appended per uncertain row, in ascending row order,
  // as (z, p) pairs; recover them for diagnostics.
  std::size_t v = nominal.num_vars();
  std::map<int, const UncertainGain*> by_row;
  for (const UncertainGain& u : tr.gains) by_row[u.row] = &u;
  for (const auto& [row, u] : by_row) {
    ProtectionInfo info;
    info.node = u->node;
    info.z = sol.x[v++];
    info.p = sol.x[v++];
    out.protection.push_back(info);
  }
  return out;
}

/// Worst-case demand each uncertain node must survive at its budget;
/// printed as the diagnostic when the protected problem is infeasible.
inline std::vector<std::pair<std::string, double>> protected_demands(
    const GainNetwork& network, const DemandUncertainty& uncertainty) {
  std::vector<std::pair<std::string, double>> out;
  for (const DemandUncertainty::Entry& e : uncertainty.entries) {
    const int i = network.node_index(e.node);
    if (i < 0) continue;
    const double magnitude =
        std::abs(network.nodes[i].balance) + e.gamma * e.deviation;
    out.emplace_back(e.node, magnitude);
  }
  return out;
}

}  // namespace ofdmflow
