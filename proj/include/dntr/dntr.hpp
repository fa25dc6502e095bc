#pragma once

// Day-ahead topology reconfiguration: per-hour switching MILP, its
// branch-and-bound solver, an exhaustive enumeration oracle and the
// day-level driver.
//
// Model for one hour (flows from->to positive, P = base * dtheta / x):
//   min  sum_i C_i P_i
//   s.t. P_i(n) - sum_{from=n} P + sum_{to=n} P = d_n          every bus
//        -rating_k <= P_k <= rating_k                          fixed lines
//        -J_l rating_l <= P_l <= J_l rating_l                  switchable lines
//        P_k = base (theta_from - theta_to) / x_k              fixed lines
//        |P_l - base (theta_from - theta_to) / x_l| <= M (1 - J_l)
//        sum_l J_l = N_n - N_s - N_NFL
//        P_i >= 0, theta in [angle_lo, angle_hi], theta_substation = 0

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dntr/dcflow.hpp"
#include "dntr/disjoint_set.hpp"
#include "dntr/lpcore.hpp"
#include "dntr/netmodel.hpp"

namespace dntr {

inline constexpr double kDefaultEpsilon = 1e-5;

struct DayProblem {
  Network net;
  std::size_t horizon = 24;
  std::vector<std::vector<double>> loads;   // [hour][bus], MW
  std::vector<std::vector<double>> prices;  // [hour][substation], per MWh

  void check() const {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    if (loads.size() < horizon) throw std::invalid_argument("load profile shorter than horizon");
    if (prices.size() < horizon) throw std::invalid_argument("price profile shorter than horizon");
    const auto ns = net.num_substations();
    for (std::size_t t = 0; t < horizon; ++t) {
      if (loads[t].size() != net.num_buses())
        throw std::invalid_argument("hour " + std::to_string(t + 1) + ": expected one load per bus");
      if (prices[t].size() != ns)
        throw std::invalid_argument("hour " + std::to_string(t + 1) + ": expected one price per substation");
      for (double d : loads[t])
        if (!(d >= 0.0)) throw std::invalid_argument("hour " + std::to_string(t + 1) + ": negative load");
      for (double c : prices[t])
        if (!std::isfinite(c)) throw std::invalid_argument("hour " + std::to_string(t + 1) + ": non-finite price");
    }
  }
};

/// Replaces exactly-zero loads by epsilon so that every bus must be served,
/// which lets the closed-line count rule out cycles.
inline std::vector<double> apply_epsilon_loads(std::span<const double> loads, double epsilon = kDefaultEpsilon) {
  std::vector<double> out(loads.begin(), loads.end());
  for (auto& d : out) {
    if (!(d >= 0.0)) throw std::invalid_argument("apply_epsilon_loads: negative load");
    if (d == 0.0) d = epsilon;
  }
  return out;
}

/// Smallest constant that makes the switched flow law vacuous when the line
/// is open, plus the line rating as slack for the flow term.
inline double big_m(const Line& line, double angle_lo, double angle_hi, double base_mva = 1.0) {
  if (!(line.reactance > 0.0)) throw std::invalid_argument("big_m: non-positive reactance");
  if (!(angle_lo < angle_hi)) throw std::invalid_argument("big_m: angle_lo must be below angle_hi");
  return base_mva * (angle_hi - angle_lo) / line.reactance + line.rating;
}

struct ModelOptions {
  double angle_lo = -0.6;
  double angle_hi = 0.6;
};

/// Column layout of one hour inside a switching model.
struct HourBlock {
  std::size_t hour = 0;
  std::vector<double> loads;
  std::vector<double> prices;
  std::size_t closed_target = 0;           // flexible lines closed in every radial hour
  std::vector<std::size_t> status_col;     // per flexible line, Network::flexible_lines() order
  std::vector<std::size_t> injection_col;  // per substation
  std::vector<std::size_t> angle_col;      // per bus
  std::vector<std::size_t> flow_col;       // per line
};

/// LP relaxation of the switching MILP (J in [0, 1]) plus its column maps.
/// A single-hour model has one block; the monolithic horizon model has one
/// block per hour and no coupling rows between them.
struct HourModel {
  Network net;
  ModelOptions options;
  lp::LinearProgram lp;
  std::vector<HourBlock> blocks;

  std::size_t closed_target() const { return blocks.front().closed_target; }
  const std::vector<std::size_t>& status_columns() const { return blocks.front().status_col; }
};

namespace detail {

inline void append_hour_block(HourModel& model, std::size_t hour, std::span<const double> loads,
                              std::span<const double> prices) {
  const auto& net = model.net;
  const auto& opt = model.options;
  auto& prog = model.lp;
  if (loads.size() != net.num_buses()) throw std::invalid_argument("build_hour_model: one load per bus required");
  const auto subs = net.substations();
  if (prices.size() != subs.size()) throw std::invalid_argument("build_hour_model: one price per substation required");
  if (!(opt.angle_lo < opt.angle_hi)) throw std::invalid_argument("build_hour_model: empty angle range");

  HourBlock block;
  block.hour = hour;
  block.loads.assign(loads.begin(), loads.end());
  block.prices.assign(prices.begin(), prices.end());
  block.closed_target = required_closed_flexible_count(net);

  std::vector<std::size_t> substation_slot(net.num_buses(), Network::npos);
  for (std::size_t s = 0; s < subs.size(); ++s) {
    substation_slot[subs[s]] = s;
    block.injection_col.push_back(prog.add_variable(prices[s], 0.0, lp::kInfinity));
  }
  for (std::size_t n = 0; n < net.num_buses(); ++n) {
    const bool ref = net.buses[n].is_substation;
    block.angle_col.push_back(prog.add_variable(0.0, ref ? 0.0 : opt.angle_lo, ref ? 0.0 : opt.angle_hi));
  }
  for (const auto& line : net.lines) {
    if (line.flexible)
      block.flow_col.push_back(prog.add_variable(0.0, -lp::kInfinity, lp::kInfinity));
    else
      block.flow_col.push_back(prog.add_variable(0.0, -line.rating, line.rating));
  }
  for (const auto& line : net.lines)
    if (line.flexible) block.status_col.push_back(prog.add_variable(0.0, 0.0, 1.0));

  // Nodal balance.
  std::vector<std::vector<lp::Term>> balance(net.num_buses());
  for (std::size_t n = 0; n < net.num_buses(); ++n)
    if (substation_slot[n] != Network::npos) balance[n].push_back({block.injection_col[substation_slot[n]], 1.0});
  for (std::size_t i = 0; i < net.num_lines(); ++i) {
    balance[net.lines[i].from].push_back({block.flow_col[i], -1.0});
    balance[net.lines[i].to].push_back({block.flow_col[i], 1.0});
  }
  for (std::size_t n = 0; n < net.num_buses(); ++n) prog.add_row(std::move(balance[n]), lp::Sense::Equal, loads[n]);

  std::size_t k = 0;
  for (std::size_t i = 0; i < net.num_lines(); ++i) {
    const auto& line = net.lines[i];
    const double g = net.base_mva / line.reactance;
    const auto pf = block.flow_col[i];
    const auto tf = block.angle_col[line.from];
    const auto tt = block.angle_col[line.to];
    if (!line.flexible) {
      prog.add_row({{pf, 1.0}, {tf, -g}, {tt, g}}, lp::Sense::Equal, 0.0);
      continue;
    }
    const auto j = block.status_col[k++];
    prog.add_row({{pf, 1.0}, {j, -line.rating}}, lp::Sense::LessEqual, 0.0);
    prog.add_row({{pf, -1.0}, {j, -line.rating}}, lp::Sense::LessEqual, 0.0);
    const double m = big_m(line, opt.angle_lo, opt.angle_hi, net.base_mva);
    prog.add_row({{pf, 1.0}, {tf, -g}, {tt, g}, {j, m}}, lp::Sense::LessEqual, m);
    prog.add_row({{pf, -1.0}, {tf, g}, {tt, -g}, {j, m}}, lp::Sense::LessEqual, m);
  }

  if (!block.status_col.empty()) {
    std::vector<lp::Term> count;
    for (auto c : block.status_col) count.push_back({c, 1.0});
    prog.add_row(std::move(count), lp::Sense::Equal, static_cast<double>(block.closed_target));
  }
  model.blocks.push_back(std::move(block));
}

}  // namespace detail

/// Builds the single-hour switching model. Loads should already have zero
/// entries replaced by apply_epsilon_loads.
inline HourModel build_hour_model(const Network& net, std::span<const double> loads, std::span<const double> prices,
                                  const ModelOptions& opts = {}, std::size_t hour = 0) {
  HourModel model{net, opts, {}, {}};
  detail::append_hour_block(model, hour, loads, prices);
  return model;
}

/// One block per hour of the horizon, epsilon applied to zero loads.
inline HourModel build_horizon_model(const DayProblem& problem, const ModelOptions& opts = {},
                                     double epsilon = kDefaultEpsilon) {
  problem.check();
  HourModel model{problem.net, opts, {}, {}};
  for (std::size_t t = 0; t < problem.horizon; ++t)
    detail::append_hour_block(model, t, apply_epsilon_loads(problem.loads[t], epsilon), problem.prices[t]);
  return model;
}

// ---------------------------------------------------------------------------
// Solutions

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t lp_solves = 0;
  std::size_t lp_iterations = 0;
  double max_lp_flow_mismatch = 0.0;  // MW, LP flows vs tree flows on accepted incumbents
};

struct HourSolution {
  std::size_t hour = 0;
  std::vector<std::uint8_t> statuses;  // per flexible line
  std::vector<double> injections;      // per substation, MW
  std::vector<double> angles;          // per bus, rad
  std::vector<double> flows;           // per line, MW
  double cost = 0.0;
  SearchStats stats;
};

struct DaySolution {
  std::vector<HourSolution> hours;
  double total_cost = 0.0;
};

class InfeasibleHourError : public std::runtime_error {
public:
  InfeasibleHourError(std::size_t hour, const std::string& what,
                      std::vector<std::optional<HourSolution>> partial = {})
      : std::runtime_error(what), hour_(hour), partial_(std::move(partial)) {}
  std::size_t hour() const { return hour_; }
  const std::vector<std::optional<HourSolution>>& partial() const { return partial_; }

private:
  std::size_t hour_;
  std::vector<std::optional<HourSolution>> partial_;
};

class SolverLimitError : public std::runtime_error {
public:
  SolverLimitError(std::size_t hour, const std::string& what) : std::runtime_error(what), hour_(hour) {}
  std::size_t hour() const { return hour_; }

private:
  std::size_t hour_;
};

/// Exact physics of one fixed topology: tree flows, thermal limits and angle
/// bounds. Empty if the topology is not radial or violates a limit.
inline std::optional<HourSolution> evaluate_topology(const Network& net, std::span<const std::uint8_t> statuses,
                                                     std::span<const double> loads, std::span<const double> prices,
                                                     const ModelOptions& opts = {}) {
  const auto mask = net.closed_mask(statuses);
  if (!is_spanning_forest(net, mask)) return std::nullopt;
  FlowSolution flow;
  try {
    flow = solve_flows(net, mask, loads);
  } catch (const TopologyError&) {
    return std::nullopt;
  }
  if (!check_limits(net, flow, 1e-9).empty()) return std::nullopt;
  for (double a : flow.angles)
    if (a < opts.angle_lo - 1e-12 || a > opts.angle_hi + 1e-12) return std::nullopt;
  HourSolution sol;
  sol.statuses.assign(statuses.begin(), statuses.end());
  sol.injections = flow.injections;
  sol.angles = flow.angles;
  sol.flows = flow.line_flows;
  for (std::size_t s = 0; s < prices.size(); ++s) sol.cost += prices[s] * sol.injections[s];
  return sol;
}

/// Greedy radial topology: substations in ascending price order grab every
/// bus they can reach through switchable lines. Statuses per flexible line.
inline std::vector<std::uint8_t> greedy_topology(const Network& net, std::span<const double> prices) {
  const auto subs = net.substations();
  const auto flex = net.flexible_lines();
  DisjointSet dsu(net.num_buses());
  for (auto s : subs) dsu.mark_substation(s);
  for (const auto& line : net.lines)
    if (!line.flexible) dsu.unite(line.from, line.to);

  std::vector<std::size_t> order(subs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return prices[a] < prices[b]; });

  std::vector<std::uint8_t> statuses(flex.size(), 0);
  for (auto s : order) {
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t k = 0; k < flex.size(); ++k) {
        if (statuses[k]) continue;
        const auto& line = net.lines[flex[k]];
        const bool from_in = dsu.connected(line.from, subs[s]);
        const bool to_in = dsu.connected(line.to, subs[s]);
        if (from_in == to_in) continue;
        const auto other = from_in ? line.to : line.from;
        if (dsu.has_substation(other)) continue;
        dsu.unite(line.from, line.to);
        statuses[k] = 1;
        grew = true;
      }
    }
  }
  return statuses;
}

struct SolverOptions {
  double gap = 1e-6;  // relative optimality gap
  double integrality_tol = 1e-6;
  std::size_t node_limit = 2'000'000;
  lp::SimplexOptions lp;
  bool greedy_seed = true;
  std::vector<std::uint8_t> warm_start;  // candidate statuses for the first block
};

namespace detail {

/// Propagates switching fixings of one block: forced-open lines that would
/// break radiality, the exact closed count, and components that can only be
/// energized through a single remaining line. Returns false if the block
/// cannot be completed radially.
inline bool propagate_block(const Network& net, const std::vector<std::size_t>& flex, std::size_t target,
                            std::span<std::int8_t> fix) {
  for (;;) {
    DisjointSet dsu(net.num_buses());
    for (std::size_t n = 0; n < net.num_buses(); ++n)
      if (net.buses[n].is_substation) dsu.mark_substation(n);
    for (const auto& line : net.lines)
      if (!line.flexible) dsu.unite(line.from, line.to);

    std::size_t closed = 0;
    for (std::size_t k = 0; k < flex.size(); ++k) {
      if (fix[k] != 1) continue;
      const auto& line = net.lines[flex[k]];
      if (dsu.would_break_radiality(line.from, line.to)) return false;
      dsu.unite(line.from, line.to);
      ++closed;
    }
    if (closed > target) return false;

    bool changed = false;
    std::size_t undecided = 0;
    for (std::size_t k = 0; k < flex.size(); ++k) {
      if (fix[k] != -1) continue;
      const auto& line = net.lines[flex[k]];
      if (dsu.would_break_radiality(line.from, line.to)) {
        fix[k] = 0;
        changed = true;
      } else {
        ++undecided;
      }
    }
    if (closed + undecided < target) return false;
    if (undecided > 0 && closed == target) {
      for (auto& f : fix)
        if (f == -1) f = 0;
      changed = true;
    } else if (undecided > 0 && closed + undecided == target) {
      for (auto& f : fix)
        if (f == -1) f = 1;
      changed = true;
    }

    if (!changed) {
      // Components without a substation need at least one more line.
      std::vector<std::size_t> exits(net.num_buses(), 0), last_exit(net.num_buses(), 0);
      for (std::size_t k = 0; k < flex.size(); ++k) {
        if (fix[k] != -1) continue;
        const auto& line = net.lines[flex[k]];
        for (auto root : {dsu.find(line.from), dsu.find(line.to)}) {
          if (dsu.has_substation(root)) continue;
          ++exits[root];
          last_exit[root] = k;
        }
      }
      for (std::size_t n = 0; n < net.num_buses(); ++n) {
        if (dsu.find(n) != n || dsu.has_substation(n)) continue;
        if (exits[n] == 0) return false;
        if (exits[n] == 1 && fix[last_exit[n]] == -1) {
          fix[last_exit[n]] = 1;
          changed = true;
        }
      }
    }
    if (!changed) return true;
  }
}

struct Incumbent {
  bool found = false;
  std::vector<HourSolution> hours;  // one per block, valid when found
};

/// Best-bound search over the status columns of every block. Blocks share no
/// rows, so each keeps its own incumbent and bound: a block whose relaxation
/// cannot beat its incumbent is never branched on again.
class BranchAndBound {
public:
  BranchAndBound(const HourModel& model, const SolverOptions& opts)
      : model_(model), opts_(opts), flex_(model.net.flexible_lines()) {
    for (const auto& b : model.blocks) {
      offset_.push_back(total_);
      total_ += b.status_col.size();
    }
    best_.assign(model.blocks.size(), std::nullopt);
  }

  Incumbent run(SearchStats& stats) {
    seed();
    const auto nb = model_.blocks.size();
    struct Node {
      double bound;
      std::size_t seq;
      std::vector<std::int8_t> fix;
      std::vector<double> block_bound;
    };
    auto worse = [](const Node& a, const Node& b) {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.seq > b.seq;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
    std::size_t seq = 0;
    const double none = -std::numeric_limits<double>::infinity();
    open.push({none, seq++, std::vector<std::int8_t>(total_, -1), std::vector<double>(nb, none)});

    lp::LinearProgram prog = model_.lp;
    std::vector<std::uint8_t> active(nb);
    std::set<std::vector<std::int8_t>> seen;
    while (!open.empty()) {
      Node node = open.top();
      open.pop();
      if (!any_active(node.block_bound, active)) continue;
      // Fixings of blocks that cannot improve are irrelevant, so nodes that
      // agree on the remaining blocks span the same search space.
      std::vector<std::int8_t> key(node.fix);
      for (std::size_t b = 0; b < nb; ++b)
        if (!active[b])
          std::fill_n(key.begin() + static_cast<std::ptrdiff_t>(offset_[b]), model_.blocks[b].status_col.size(), 2);
      if (nb > 1 && !seen.insert(std::move(key)).second) continue;
      if (++stats.nodes > opts_.node_limit)
        throw SolverLimitError(model_.blocks.front().hour, "branch-and-bound node limit exceeded");

      if (!propagate(node.fix)) continue;
      if (std::none_of(node.fix.begin(), node.fix.end(), [](std::int8_t f) { return f == -1; })) {
        for (std::size_t b = 0; b < nb; ++b)
          if (active[b]) offer(b, node.fix, nullptr, stats);
        continue;
      }

      for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t k = 0; k < model_.blocks[b].status_col.size(); ++k) {
          const auto col = model_.blocks[b].status_col[k];
          const auto f = node.fix[offset_[b] + k];
          prog.lower[col] = f == 1 ? 1.0 : 0.0;
          prog.upper[col] = f == 0 ? 0.0 : 1.0;
        }
      lp::LpOutcome relax;
      try {
        relax = lp::solve_lp(prog, opts_.lp);
      } catch (const lp::IterationLimitExceeded& e) {
        throw SolverLimitError(model_.blocks.front().hour, e.what());
      }
      ++stats.lp_solves;
      stats.lp_iterations += relax.iterations;
      if (relax.status == lp::Status::Infeasible) continue;
      if (relax.status == lp::Status::Unbounded)
        throw std::logic_error("switching relaxation is unbounded; prices must keep injections bounded");

      std::vector<double> block_bound(nb);
      for (std::size_t b = 0; b < nb; ++b) {
        const auto& block = model_.blocks[b];
        double v = 0.0;
        for (std::size_t s = 0; s < block.injection_col.size(); ++s)
          v += block.prices[s] * relax.values[block.injection_col[s]];
        block_bound[b] = std::max(v, node.block_bound[b]);
      }
      if (!any_active(block_bound, active)) continue;

      std::size_t branch = Network::npos, split = Network::npos;
      double most = opts_.integrality_tol;
      for (std::size_t b = 0; b < nb; ++b) {
        if (!active[b]) continue;
        const auto& block = model_.blocks[b];
        bool fractional = false;
        for (std::size_t k = 0; k < block.status_col.size(); ++k) {
          const double v = relax.values[block.status_col[k]];
          const double frac = std::min(v, 1.0 - v);
          if (frac <= opts_.integrality_tol) continue;
          fractional = true;
          // Branch inside the first fractional block only.
          if (branch == Network::npos || branch >= offset_[b]) {
            if (frac > most) {
              most = frac;
              branch = offset_[b] + k;
            }
          }
        }
        if (fractional) continue;
        std::vector<std::int8_t> rounded(node.fix);
        for (std::size_t k = 0; k < block.status_col.size(); ++k)
          rounded[offset_[b] + k] = relax.values[block.status_col[k]] > 0.5 ? 1 : 0;
        if (offer(b, rounded, &relax.values, stats)) {
          block_bound[b] = std::max(block_bound[b], best_[b]->cost);
          continue;
        }
        // Integral relaxation that is not physically radial: split explicitly.
        if (split == Network::npos)
          for (std::size_t k = 0; k < block.status_col.size(); ++k)
            if (node.fix[offset_[b] + k] == -1) {
              split = offset_[b] + k;
              break;
            }
      }
      if (branch == Network::npos) branch = split;
      if (branch == Network::npos || !any_active(block_bound, active)) continue;

      const double bound = std::accumulate(block_bound.begin(), block_bound.end(), 0.0);
      for (std::int8_t value : {std::int8_t{1}, std::int8_t{0}}) {
        auto child = node.fix;
        child[branch] = value;
        open.push({bound, seq++, std::move(child), block_bound});
      }
    }

    Incumbent out;
    out.found = std::all_of(best_.begin(), best_.end(), [](const auto& h) { return h.has_value(); });
    if (out.found)
      for (auto& h : best_) out.hours.push_back(std::move(*h));
    return out;
  }

private:
  bool can_improve(std::size_t b, double bound) const {
    if (!best_[b]) return true;
    const double c = best_[b]->cost;
    return bound < c - opts_.gap * std::max(1.0, std::abs(c));
  }

  bool any_active(const std::vector<double>& block_bound, std::vector<std::uint8_t>& active) const {
    bool any = false;
    for (std::size_t b = 0; b < block_bound.size(); ++b) {
      active[b] = can_improve(b, block_bound[b]) ? 1 : 0;
      any = any || active[b];
    }
    return any;
  }

  bool propagate(std::vector<std::int8_t>& fix) const {
    for (std::size_t b = 0; b < model_.blocks.size(); ++b) {
      std::span<std::int8_t> slice(fix.data() + offset_[b], model_.blocks[b].status_col.size());
      if (!propagate_block(model_.net, flex_, model_.blocks[b].closed_target, slice)) return false;
    }
    return true;
  }

  bool offer(std::size_t b, const std::vector<std::int8_t>& fix, const std::vector<double>* lp_values,
             SearchStats& stats) {
    const auto& block = model_.blocks[b];
    std::vector<std::uint8_t> statuses(block.status_col.size());
    for (std::size_t k = 0; k < statuses.size(); ++k) statuses[k] = fix[offset_[b] + k] == 1 ? 1 : 0;
    auto sol = evaluate_topology(model_.net, statuses, block.loads, block.prices, model_.options);
    if (!sol) return false;
    sol->hour = block.hour;
    if (lp_values) {
      for (std::size_t i = 0; i < sol->flows.size(); ++i) {
        const double diff = std::abs((*lp_values)[block.flow_col[i]] - sol->flows[i]);
        stats.max_lp_flow_mismatch = std::max(stats.max_lp_flow_mismatch, diff);
      }
    }
    if (!best_[b] || sol->cost < best_[b]->cost) best_[b] = std::move(*sol);
    return true;
  }

  void seed() {
    SearchStats ignored;
    for (std::size_t b = 0; b < model_.blocks.size(); ++b) {
      const auto& block = model_.blocks[b];
      auto try_statuses = [&](const std::vector<std::uint8_t>& statuses) {
        std::vector<std::int8_t> fix(total_, 0);
        for (std::size_t k = 0; k < statuses.size(); ++k) fix[offset_[b] + k] = statuses[k] ? 1 : 0;
        offer(b, fix, nullptr, ignored);
      };
      if (b == 0 && !opts_.warm_start.empty() && opts_.warm_start.size() == block.status_col.size())
        try_statuses(opts_.warm_start);
      if (opts_.greedy_seed) try_statuses(greedy_topology(model_.net, block.prices));
    }
  }

  const HourModel& model_;
  SolverOptions opts_;
  std::vector<std::size_t> flex_;
  std::vector<std::size_t> offset_;
  std::size_t total_ = 0;
  std::vector<std::optional<HourSolution>> best_;
};

}  // namespace detail

/// Solves every block of the model to optimality within the gap and returns
/// one solution per block.
inline std::vector<HourSolution> solve_model(const HourModel& model, const SolverOptions& opts = {}) {
  if (model.blocks.empty()) throw std::invalid_argument("solve_model: model has no hours");
  SearchStats stats;
  detail::BranchAndBound bnb(model, opts);
  auto best = bnb.run(stats);
  if (!best.found)
    throw InfeasibleHourError(model.blocks.front().hour,
                              "hour " + std::to_string(model.blocks.front().hour + 1) +
                                  ": no radial topology serves the load within line ratings");
  for (auto& h : best.hours) h.stats = stats;
  return std::move(best.hours);
}

inline HourSolution solve_hour(const HourModel& model, const SolverOptions& opts = {}) {
  if (model.blocks.size() != 1) throw std::invalid_argument("solve_hour: expected a single-hour model");
  return std::move(solve_model(model, opts).front());
}

class EnumerationCapError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive oracle: every flexible subset of the required size, filtered
/// to radial topologies, evaluated by tree power flow.
inline HourSolution enumerate_hour(const Network& net, std::span<const double> loads, std::span<const double> prices,
                                   const ModelOptions& opts = {}, std::size_t cap = 15) {
  const auto nfl = net.num_flexible();
  if (nfl > cap)
    throw EnumerationCapError("enumerate_hour: " + std::to_string(nfl) + " flexible lines exceed cap " +
                              std::to_string(cap));
  const auto target = required_closed_flexible_count(net);
  std::optional<HourSolution> best;
  std::size_t evaluated = 0;
  std::vector<std::uint8_t> statuses(nfl, 0);
  std::fill(statuses.begin(), statuses.begin() + static_cast<std::ptrdiff_t>(target), 1);
  // prev_permutation walks subsets from 11..100.. down to ..0011 deterministically.
  do {
    ++evaluated;
    auto sol = evaluate_topology(net, statuses, loads, prices, opts);
    if (sol && (!best || sol->cost < best->cost)) best = std::move(sol);
  } while (std::prev_permutation(statuses.begin(), statuses.end()));
  if (!best) throw InfeasibleHourError(0, "enumerate_hour: no feasible topology");
  best->stats.nodes = evaluated;
  return std::move(*best);
}

// ---------------------------------------------------------------------------
// Day driver

struct DayOptions {
  ModelOptions model;
  SolverOptions solver;
  double epsilon = kDefaultEpsilon;
  std::size_t jobs = 1;
  bool warm_start = true;   // seed each hour with the previous hour's topology (sequential only)
  bool monolithic = false;  // one model for the whole horizon
};

inline double sum_costs(const std::vector<HourSolution>& hours) {
  double total = 0.0;
  for (const auto& h : hours) total += h.cost;
  return total;
}

inline DaySolution solve_day(const DayProblem& problem, const DayOptions& opts = {}) {
  problem.check();
  DaySolution day;
  if (opts.monolithic) {
    const auto model = build_horizon_model(problem, opts.model, opts.epsilon);
    day.hours = solve_model(model, opts.solver);
    day.total_cost = sum_costs(day.hours);
    return day;
  }

  const auto T = problem.horizon;
  std::vector<std::optional<HourSolution>> results(T);
  std::vector<std::exception_ptr> errors(T);

  auto solve_one = [&](std::size_t t, const std::vector<std::uint8_t>& seed) {
    try {
      const auto loads = apply_epsilon_loads(problem.loads[t], opts.epsilon);
      const auto model = build_hour_model(problem.net, loads, problem.prices[t], opts.model, t);
      auto sopts = opts.solver;
      sopts.warm_start = seed;
      results[t] = solve_hour(model, sopts);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  if (opts.jobs <= 1) {
    std::vector<std::uint8_t> previous;
    for (std::size_t t = 0; t < T; ++t) {
      solve_one(t, opts.warm_start ? previous : std::vector<std::uint8_t>{});
      if (results[t]) previous = results[t]->statuses;
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(opts.jobs, T); ++w)
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < T; t = next++) solve_one(t, {});
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t t = 0; t < T; ++t) {
    if (!errors[t]) continue;
    try {
      std::rethrow_exception(errors[t]);
    } catch (const InfeasibleHourError&) {
      throw InfeasibleHourError(t, "hour " + std::to_string(t + 1) +
                                       ": no radial topology serves the load within line ratings",
                                results);
    } catch (const SolverLimitError& e) {
      throw SolverLimitError(t, "hour " + std::to_string(t + 1) + ": " + e.what());
    }
  }
  for (auto& r : results) day.hours.push_back(std::move(*r));
  day.total_cost = sum_costs(day.hours);
  return day;
}

}  // namespace dntr
