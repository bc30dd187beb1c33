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
// File formats: JSON scenario and network inputs (strict: unknown keys
// are hard errors that name the key), CSV trace/assignment/flow outputs.
// Floating-point values are printed as shortest round-trip decimals, so
// a written file re-reads to bit-identical values.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ofdmflow/assign.hpp"
#include "ofdmflow/channel.hpp"
#include "ofdmflow/errors.hpp"
#include "ofdmflow/gainflow.hpp"

namespace ofdmflow::io {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failure on '" + path + "'");
}

namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::string& what,
                         const std::vector<std::string>& required,
                         const std::vector<std::string>& optional = {}) {
  if (!obj.is_object()) throw MalformedInput(what + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const std::string& k : required) known = known || k == key;
    for (const std::string& k : optional) known = known || k == key;
    if (!known)
      throw MalformedInput("unknown key \"" + key + "\" in " + what);
  }
  for (const std::string& k : required)
    if (!obj.contains(k))
      throw MalformedInput("missing key \"" + k + "\" in " + what);
}

inline double number_at(const json& obj, const std::string& key,
                        const std::string& what) {
  const json& v = obj.at(key);
  if (!v.is_number())
    throw MalformedInput("key \"" + key + "\" in " + what +
                         " must be a number");
  return v.get<double>();
}

inline int int_at(const json& obj, const std::string& key,
                  const std::string& what) {
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw MalformedInput("key \"" + key + "\" in " + what +
                         " must be an integer");
  return v.get<int>();
}

}  // namespace detail

/// Scenario JSON: exactly the Scenario fields in snake_case, plus an
/// optional "rate_table" override of {"threshold_db", "bits_per_symbol"}
/// levels.  Unknown keys are a hard error.
inline Scenario parse_scenario_json(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("scenario is not valid JSON: ") +
                         e.what());
  }
  detail::require_keys(
      doc, "scenario",
      {"subcarriers", "terminals", "phases", "phase_duration", "total_power",
       "noise_power", "cell_radius", "min_distance", "pathloss_exponent",
       "shadowing_sigma", "symbols_per_phase", "target_ber", "seed"},
      {"rate_table"});

  Scenario sc;
  sc.subcarriers = detail::int_at(doc, "subcarriers", "scenario");
  sc.terminals = detail::int_at(doc, "terminals", "scenario");
  sc.phases = detail::int_at(doc, "phases", "scenario");
  sc.phase_duration = detail::number_at(doc, "phase_duration", "scenario");
  sc.total_power = detail::number_at(doc, "total_power", "scenario");
  sc.noise_power = detail::number_at(doc, "noise_power", "scenario");
  sc.cell_radius = detail::number_at(doc, "cell_radius", "scenario");
  sc.min_distance = detail::number_at(doc, "min_distance", "scenario");
  sc.pathloss_exponent =
      detail::number_at(doc, "pathloss_exponent", "scenario");
  sc.shadowing_sigma = detail::number_at(doc, "shadowing_sigma", "scenario");
  sc.symbols_per_phase = detail::int_at(doc, "symbols_per_phase", "scenario");
  sc.target_ber = detail::number_at(doc, "target_ber", "scenario");
  if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
    throw MalformedInput("key \"seed\" in scenario must be an integer");
  if (doc.at("seed").is_number_integer() && doc.at("seed").get<std::int64_t>() < 0)
    throw MalformedInput("key \"seed\" in scenario must be nonnegative");
  sc.seed = doc.at("seed").get<std::uint64_t>();

  if (doc.contains("rate_table")) {
    const json& levels = doc.at("rate_table");
    if (!levels.is_array())
      throw MalformedInput("key \"rate_table\" in scenario must be an array");
    RateTable table;
    for (const json& level : levels) {
      detail::require_keys(level, "rate_table level",
                           {"threshold_db", "bits_per_symbol"});
      const double db = detail::number_at(level, "threshold_db", "rate_table");
      table.levels.push_back(
          RateLevel{std::pow(10.0, db / 10.0),
                    detail::int_at(level, "bits_per_symbol", "rate_table")});
    }
    table.validate();
    sc.rate_table = std::move(table);
  }
  sc.validate();
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  return parse_scenario_json(read_file(path));
}

/// Trace CSV: header `phase,subcarrier,terminal,attenuation`, 1-based
/// indices, rows sorted by (phase, subcarrier, terminal).
inline std::string trace_to_csv(const ChannelTrace& trace) {
  std::ostringstream os;
  os << "phase,subcarrier,terminal,attenuation\n";
  const Scenario& sc = trace.scenario;
  for (int t = 0; t < sc.phases; ++t)
    for (int n = 0; n < sc.subcarriers; ++n)
      for (int j = 0; j < sc.terminals; ++j)
        os << (t + 1) << ',' << (n + 1) << ',' << (j + 1) << ','
           << format_double(trace.at(n, j, t)) << '\n';
  return os.str();
}

/// Reads a trace CSV back against its scenario; every (phase, subcarrier,
/// terminal) triple must appear exactly once and match the dimensions.
inline ChannelTrace parse_trace_csv(const std::string& text,
                                    const Scenario& scenario) {
  scenario.validate();
  ChannelTrace trace;
  trace.scenario = scenario;
  trace.distances.assign(scenario.terminals, 0.0);  // not stored in the CSV
  const std::size_t total = static_cast<std::size_t>(scenario.subcarriers) *
                            scenario.terminals * scenario.phases;
  trace.attenuation.assign(total, -1.0);

  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "phase,subcarrier,terminal,attenuation")
    throw MalformedInput("trace CSV header mismatch");
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int t, n, j;
    char c1, c2, c3;
    std::istringstream row(line);
    double a;
    if (!(row >> t >> c1 >> n >> c2 >> j >> c3 >> a) || c1 != ',' ||
        c2 != ',' || c3 != ',')
      throw MalformedInput("bad trace CSV row: " + line);
    if (t < 1 || t > scenario.phases || n < 1 || n > scenario.subcarriers ||
        j < 1 || j > scenario.terminals)
      throw MalformedInput("trace row out of scenario dimensions: " + line);
    const std::size_t idx =
        (static_cast<std::size_t>(t - 1) * scenario.subcarriers + (n - 1)) *
            scenario.terminals +
        (j - 1);
    if (trace.attenuation[idx] >= 0.0)
      throw MalformedInput("duplicate trace row: " + line);
    if (!(a > 0.0) || !std::isfinite(a))
      throw MalformedInput("attenuation must be positive and finite: " + line);
    trace.attenuation[idx] = a;
    ++count;
  }
  if (count != total)
    throw MalformedInput("trace has " + std::to_string(count) +
                         " rows, scenario requires " + std::to_string(total));
  return trace;
}

/// Assignment CSV: header `subcarrier,owner` with owner 0 = unassigned,
/// then a `# epsilon=<int>` trailer.
inline std::string assignment_to_csv(const Assignment& assignment) {
  std::ostringstream os;
  os << "subcarrier,owner\n";
  for (std::size_t n = 0; n < assignment.owner.size(); ++n)
    os << (n + 1) << ',' << (assignment.owner[n] + 1) << '\n';
  os << "# epsilon=" << assignment.epsilon << '\n';
  return os.str();
}

struct AssignmentCsv {
  std::vector<int> owner;  // 0-based, kUnassigned for none
  std::int64_t epsilon = 0;
};

inline AssignmentCsv parse_assignment_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "subcarrier,owner")
    throw MalformedInput("assignment CSV header mismatch");
  AssignmentCsv out;
  bool saw_epsilon = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# epsilon=", 0) == 0) {
      out.epsilon = std::stoll(line.substr(10));
      saw_epsilon = true;
      continue;
    }
    std::istringstream row(line);
    int n, owner;
    char c;
    if (!(row >> n >> c >> owner) || c != ',')
      throw MalformedInput("bad assignment CSV row: " + line);
    if (n != static_cast<int>(out.owner.size()) + 1)
      throw MalformedInput("assignment rows out of order at: " + line);
    out.owner.push_back(owner - 1);
  }
  if (!saw_epsilon) throw MalformedInput("assignment CSV missing epsilon trailer");
  return out;
}

/// Network JSON: {"nodes": [{"id", "balance"}...],
///                "arcs": [{"tail","head","capacity","gain","cost"}...],
///                "uncertain": [{"node","deviation","gamma"}...]}.
inline std::pair<GainNetwork, DemandUncertainty> parse_network_json(
    const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("network is not valid JSON: ") +
                         e.what());
  }
  detail::require_keys(doc, "network", {"nodes", "arcs"}, {"uncertain"});
  GainNetwork network;
  for (const json& node : doc.at("nodes")) {
    detail::require_keys(node, "node", {"id", "balance"});
    if (!node.at("id").is_string())
      throw MalformedInput("node \"id\" must be a string");
    network.nodes.push_back(GainNode{node.at("id").get<std::string>(),
                                     detail::number_at(node, "balance", "node"),
                                     false});
  }
  for (const json& arc : doc.at("arcs")) {
    detail::require_keys(arc, "arc", {"tail", "head", "capacity", "gain",
                                      "cost"});
    GainArc a;
    a.tail = arc.at("tail").get<std::string>();
    a.head = arc.at("head").get<std::string>();
    a.capacity = detail::number_at(arc, "capacity", "arc");
    a.gain = detail::number_at(arc, "gain", "arc");
    a.cost = detail::number_at(arc, "cost", "arc");
    network.arcs.push_back(std::move(a));
  }
  DemandUncertainty uncertainty;
  if (doc.contains("uncertain")) {
    for (const json& u : doc.at("uncertain")) {
      detail::require_keys(u, "uncertain entry", {"node", "deviation",
                                                  "gamma"});
      uncertainty.entries.push_back(DemandUncertainty::Entry{
          u.at("node").get<std::string>(),
          detail::number_at(u, "deviation", "uncertain entry"),
          detail::number_at(u, "gamma", "uncertain entry")});
    }
  }
  try {
    network.validate();
    uncertainty.validate();
    for (const DemandUncertainty::Entry& e : uncertainty.entries)
      if (network.node_index(e.node) < 0)
        throw MalformedProblem("uncertain node '" + e.node +
                               "' not in network");
  } catch (const MalformedProblem& e) {
    throw MalformedInput(e.what());
  }
  return {std::move(network), std::move(uncertainty)};
}

inline std::pair<GainNetwork, DemandUncertainty> load_network(
    const std::string& path) {
  return parse_network_json(read_file(path));
}

/// Flows CSV: `tail,head,flow,cost` per original arc (cost is the incurred
/// cost, flow times unit cost) plus a `# objective=<float>` trailer.
inline std::string flows_to_csv(const GainNetwork& network,
                                const RobustFlowSolution& solution) {
  std::ostringstream os;
  os << "tail,head,flow,cost\n";
  for (std::size_t a = 0; a < network.arcs.size(); ++a) {
    const GainArc& arc = network.arcs[a];
    os << arc.tail << ',' << arc.head << ',' << format_double(solution.flows[a])
       << ',' << format_double(solution.flows[a] * arc.cost) << '\n';
  }
  os << "# objective=" << format_double(solution.objective) << '\n';
  return os.str();
}

}  // namespace ofdmflow::io
