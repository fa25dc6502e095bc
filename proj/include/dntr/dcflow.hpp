#pragma once

// DC power flow on a fixed radial topology. Each component is a tree rooted
// at its substation, so flows follow from accumulating subtree load toward
// the root, and angles from walking back down with P = base * dtheta / x.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dntr/disjoint_set.hpp"
#include "dntr/netmodel.hpp"

namespace dntr {

class TopologyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FlowSolution {
  std::vector<double> angles;      // rad, per bus
  std::vector<double> line_flows;  // MW per line, from->to positive; 0 on open lines
  LineMask closed;
  std::vector<double> injections;        // MW per substation, Network::substations() order
  std::vector<std::size_t> component_of;  // per bus
};

inline FlowSolution solve_flows(const Network& net, const LineMask& closed, std::span<const double> loads) {
  const auto nb = net.num_buses();
  if (closed.size() != net.num_lines()) throw std::invalid_argument("solve_flows: mask size mismatch");
  if (loads.size() != nb) throw std::invalid_argument("solve_flows: load vector size mismatch");
  for (std::size_t n = 0; n < nb; ++n)
    if (!(loads[n] >= 0.0)) throw std::invalid_argument("solve_flows: negative load at bus " + std::to_string(net.buses[n].id));

  DisjointSet dsu(nb);
  for (std::size_t n = 0; n < nb; ++n)
    if (net.buses[n].is_substation) dsu.mark_substation(n);

  struct Arc {
    std::size_t to;
    std::size_t line;
  };
  std::vector<std::vector<Arc>> adj(nb);
  for (std::size_t i = 0; i < net.num_lines(); ++i) {
    if (!closed[i]) continue;
    const auto& line = net.lines[i];
    if (dsu.would_break_radiality(line.from, line.to))
      throw TopologyError("topology is not a forest: line '" + line.id + "' closes a cycle or joins substations");
    dsu.unite(line.from, line.to);
    adj[line.from].push_back({line.to, i});
    adj[line.to].push_back({line.from, i});
  }

  FlowSolution sol;
  sol.angles.assign(nb, 0.0);
  sol.line_flows.assign(net.num_lines(), 0.0);
  sol.closed = closed;
  const auto subs = net.substations();
  sol.injections.assign(subs.size(), 0.0);
  constexpr auto unset = static_cast<std::size_t>(-1);
  sol.component_of.assign(nb, unset);

  std::vector<std::size_t> order;
  order.reserve(nb);
  std::vector<std::size_t> parent_line(nb, unset);
  std::vector<std::size_t> parent_bus(nb, unset);

  auto traverse = [&](std::size_t root, std::size_t component) {
    const auto begin = order.size();
    sol.component_of[root] = component;
    order.push_back(root);
    for (std::size_t head = begin; head < order.size(); ++head) {
      const auto u = order[head];
      for (const auto& arc : adj[u]) {
        if (sol.component_of[arc.to] != unset) continue;
        sol.component_of[arc.to] = component;
        parent_bus[arc.to] = u;
        parent_line[arc.to] = arc.line;
        order.push_back(arc.to);
      }
    }
    return begin;
  };

  for (std::size_t s = 0; s < subs.size(); ++s) traverse(subs[s], s);

  // Islands without a substation may only exist when they carry no load.
  std::size_t next_component = subs.size();
  for (std::size_t n = 0; n < nb; ++n) {
    if (sol.component_of[n] != unset) continue;
    const auto begin = traverse(n, next_component++);
    for (std::size_t k = begin; k < order.size(); ++k)
      if (loads[order[k]] > 0.0)
        throw TopologyError("bus " + std::to_string(net.buses[order[k]].id) +
                            " has load but its component has no substation");
  }

  std::vector<double> subtree(loads.begin(), loads.end());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto u = *it;
    if (parent_bus[u] == unset) continue;
    subtree[parent_bus[u]] += subtree[u];
    const auto& line = net.lines[parent_line[u]];
    sol.line_flows[parent_line[u]] = (line.from == parent_bus[u]) ? subtree[u] : -subtree[u];
  }
  for (const auto u : order) {
    if (parent_bus[u] == unset) continue;
    const auto& line = net.lines[parent_line[u]];
    const double toward_child = (line.from == parent_bus[u]) ? sol.line_flows[parent_line[u]]
                                                             : -sol.line_flows[parent_line[u]];
    sol.angles[u] = sol.angles[parent_bus[u]] - toward_child * line.reactance / net.base_mva;
  }
  for (std::size_t s = 0; s < subs.size(); ++s) sol.injections[s] = subtree[subs[s]];
  return sol;
}

struct LimitViolation {
  std::size_t line;
  std::string line_id;
  double flow;
  double rating;
  double percent;
};

/// Closed lines whose |flow| exceeds rating by more than `tolerance` MW.
inline std::vector<LimitViolation> check_limits(const Network& net, const FlowSolution& sol, double tolerance = 0.0) {
  std::vector<LimitViolation> out;
  for (std::size_t i = 0; i < net.num_lines(); ++i) {
    if (!sol.closed[i]) continue;
    const auto& line = net.lines[i];
    const double mag = std::abs(sol.line_flows[i]);
    if (mag > line.rating + tolerance) out.push_back({i, line.id, sol.line_flows[i], line.rating, 100.0 * mag / line.rating});
  }
  return out;
}

inline std::vector<double> loading_percent(const Network& net, const FlowSolution& sol) {
  std::vector<double> out(net.num_lines(), 0.0);
  for (std::size_t i = 0; i < net.num_lines(); ++i)
    if (sol.closed[i]) out[i] = 100.0 * std::abs(sol.line_flows[i]) / net.lines[i].rating;
  return out;
}

}  // namespace dntr
