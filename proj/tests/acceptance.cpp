// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "dntr/dntr.hpp"
#include "dntr/fixtures.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
namespace fx = dntr::fixtures;
using namespace dntr;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void criterion(const char* name, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s %-26s %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

DayProblem case_problem(int c, bool uncongested = false) {
  fx::FixtureSpec spec;
  spec.case_id = c;
  spec.uncongested = uncongested;
  return fx::make_day_problem(spec);
}

// Solutions shared between criteria.
std::map<int, DaySolution> solved;

const DaySolution& solve_case(int c) {
  auto it = solved.find(c);
  if (it == solved.end()) it = solved.emplace(c, solve_day(case_problem(c))).first;
  return it->second;
}

Verdict oracle_equivalence() {
  Verdict v;
  std::string detail;
  for (int c = 1; c <= 3; ++c) {
    const auto p = case_problem(c);
    const double bnb = solve_case(c).total_cost;
    double brute = 0.0;
    for (std::size_t t = 0; t < p.horizon; ++t)
      brute += enumerate_hour(p.net, apply_epsilon_loads(p.loads[t]), p.prices[t]).cost;
    if (!rel_close(bnb, brute, 1e-6)) v.fail(fmt("case %.0f: bnb %.6f vs enumeration %.6f", c, bnb, brute));
    detail += fmt("case %.0f %.6f=%.6f ", c, bnb, brute);
  }
  if (v.pass) v.detail = detail;
  return v;
}

Verdict flexibility_monotonicity() {
  Verdict v;
  double cost[5];
  for (int c = 1; c <= 4; ++c) cost[c] = solve_case(c).total_cost;
  std::string detail = fmt("costs %.4f %.4f %.4f", cost[1], cost[2], cost[3]) + fmt(" %.4f; reductions vs case 1:", cost[4]);
  for (int c = 2; c <= 4; ++c) {
    if (cost[c] > cost[c - 1] + 1e-6) v.fail(fmt("case %.0f cost %.6f exceeds case %.0f cost %.6f", c, cost[c], c - 1, cost[c - 1]));
    detail += fmt(" %.2f%%", 100.0 * (cost[1] - cost[c]) / cost[1]);
  }
  if (v.pass) v.detail = detail;
  return v;
}

Verdict load_monotonicity() {
  Verdict v;
  const auto base = case_problem(1);
  const double c10 = solve_case(1).total_cost;
  const double c11 = solve_day(fx::scale_loads(base, 1.1)).total_cost;
  const double c12 = solve_day(fx::scale_loads(base, 1.2)).total_cost;
  if (!(c10 < c11 && c11 < c12)) v.fail(fmt("not strictly increasing: %.6f %.6f %.6f", c10, c11, c12));
  if (c11 < 1.1 * c10 - 1e-6) v.fail(fmt("cost(1.1D) %.6f below 1.1 cost(D) %.6f", c11, 1.1 * c10));
  if (c12 < 1.2 * c10 - 1e-6) v.fail(fmt("cost(1.2D) %.6f below 1.2 cost(D) %.6f", c12, 1.2 * c10));
  if (v.pass) v.detail = fmt("%.4f < %.4f < %.4f", c10, c11, c12) + fmt("; ratios %.5f %.5f", c11 / c10, c12 / c10);
  return v;
}

Verdict physics() {
  Verdict v;
  std::mt19937_64 rng(2024);
  double worst_flow = 0, worst_balance = 0, worst_law = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto f = oracle::random_forest(rng, 100);
    const auto sol = solve_flows(f.net, f.closed, f.loads);
    const auto dense = oracle::dense_dc_flow(f.net, f.closed, f.loads);
    for (std::size_t i = 0; i < f.net.num_lines(); ++i) {
      worst_flow = std::max(worst_flow, std::abs(sol.line_flows[i] - dense.flows[i]));
      if (!f.closed[i]) continue;
      const auto& line = f.net.lines[i];
      const double law = f.net.base_mva * (sol.angles[line.from] - sol.angles[line.to]) / line.reactance;
      worst_law = std::max(worst_law, std::abs(sol.line_flows[i] - law));
    }
    const double total = std::accumulate(f.loads.begin(), f.loads.end(), 0.0);
    const double injected = std::accumulate(sol.injections.begin(), sol.injections.end(), 0.0);
    worst_balance = std::max(worst_balance, std::abs(injected - total) / std::max(1.0, total));
  }
  if (worst_flow > 1e-9) v.fail(fmt("flow mismatch %.3g MW", worst_flow));
  if (worst_balance > 1e-9) v.fail(fmt("balance mismatch %.3g", worst_balance));
  if (worst_law > 1e-9) v.fail(fmt("flow-law residual %.3g MW", worst_law));
  if (v.pass)
    v.detail = fmt("1000 forests; max |flow-dense| %.2g, balance %.2g, law residual %.2g", worst_flow, worst_balance, worst_law);
  return v;
}

void check_hour(Verdict& v, const Network& net, const ModelOptions& mopts, const HourSolution& h, const std::string& tag,
                double& worst_tight) {
  const auto mask = net.closed_mask(h.statuses);
  if (!is_spanning_forest(net, mask)) v.fail(tag + ": not a spanning forest");
  const auto closed = static_cast<std::size_t>(std::count(h.statuses.begin(), h.statuses.end(), 1));
  if (closed != required_closed_flexible_count(net)) v.fail(tag + ": wrong closed-line count");
  for (std::size_t i = 0; i < net.num_lines(); ++i) {
    const auto& line = net.lines[i];
    if (std::abs(h.flows[i]) > line.rating + 1e-9) v.fail(tag + ": thermal limit exceeded on " + line.id);
    if (!mask[i]) {
      if (h.flows[i] != 0.0) v.fail(tag + ": open line " + line.id + " carries flow");
      continue;
    }
    const double law = net.base_mva * (h.angles[line.from] - h.angles[line.to]) / line.reactance;
    worst_tight = std::max(worst_tight, std::abs(h.flows[i] - law));
  }
  for (double a : h.angles)
    if (a < mopts.angle_lo - 1e-12 || a > mopts.angle_hi + 1e-12) v.fail(tag + ": angle out of range");
  worst_tight = std::max(worst_tight, h.stats.max_lp_flow_mismatch);
}

Verdict milp_feasibility() {
  Verdict v;
  double worst = 0.0;
  std::size_t hours = 0;
  for (int c = 1; c <= 4; ++c) {
    const auto p = case_problem(c);
    for (const auto& h : solve_case(c).hours) {
      check_hour(v, p.net, {}, h, fmt("case %.0f hour %.0f", c, static_cast<double>(h.hour + 1)), worst);
      ++hours;
    }
  }
  if (worst > 1e-6) v.fail(fmt("flow law slack %.3g MW on a closed line", worst));
  if (v.pass) v.detail = std::to_string(hours) + " hourly solutions; max closed-line flow-law residual " + fmt("%.2g MW", worst);
  return v;
}

Verdict lp_correctness() {
  Verdict v;
  std::mt19937_64 rng(99);
  std::size_t counts[3] = {0, 0, 0};
  for (int k = 0; k < 500; ++k) {
    const auto prog = oracle::random_lp(rng);
    const auto got = lp::solve_lp(prog);
    const auto want = oracle::brute_force_lp(prog);
    if (got.status != want.status) {
      v.fail("LP " + std::to_string(k) + ": status disagrees with enumeration");
      continue;
    }
    if (want.status == lp::Status::Optimal) {
      ++counts[0];
      if (!rel_close(got.objective, want.objective, 1e-6))
        v.fail("LP " + std::to_string(k) + fmt(": objective %.9g vs %.9g", got.objective, want.objective));
    } else {
      ++counts[want.status == lp::Status::Infeasible ? 1 : 2];
    }
  }
  if (v.pass)
    v.detail = fmt("500 LPs agree (%.0f optimal, %.0f infeasible, %.0f unbounded)", static_cast<double>(counts[0]),
                   static_cast<double>(counts[1]), static_cast<double>(counts[2]));
  return v;
}

Verdict decomposition() {
  Verdict v;
  DayOptions mono;
  mono.monolithic = true;
  const double whole = solve_day(case_problem(1), mono).total_cost;
  const double split = solve_case(1).total_cost;
  if (!rel_close(whole, split, 1e-6)) v.fail(fmt("monolithic %.6f vs per-hour %.6f", whole, split));
  else v.detail = fmt("monolithic %.6f, per-hour %.6f", whole, split);
  return v;
}

// Largest load substation s can serve over every radial limit-feasible topology.
double max_served(const Network& net, std::span<const double> loads, std::span<const double> prices, std::size_t s) {
  std::vector<std::uint8_t> statuses(net.num_flexible(), 0);
  double best = 0.0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << statuses.size()); ++m) {
    for (std::size_t k = 0; k < statuses.size(); ++k) statuses[k] = (m >> k) & 1;
    if (const auto sol = evaluate_topology(net, statuses, loads, prices)) best = std::max(best, sol->injections[s]);
  }
  return best;
}

Verdict behavioral() {
  Verdict v;
  const auto p = case_problem(1, true);
  std::string detail;
  for (std::size_t hour : {12u, 7u}) {
    const auto t = hour - 1;
    const auto loads = apply_epsilon_loads(p.loads[t]);
    const auto& prices = p.prices[t];
    const auto cheapest =
        static_cast<std::size_t>(std::min_element(prices.begin(), prices.end()) - prices.begin());
    const auto sol = solve_hour(build_hour_model(p.net, loads, prices));
    const double sub2 = sol.injections[1];
    const double most2 = max_served(p.net, loads, prices, 1);
    const double most_cheap = max_served(p.net, loads, prices, cheapest);
    detail += fmt("hour %.0f: substation 2 serves %.4f of %.4f MW max", static_cast<double>(hour), sub2, most2) +
              fmt(", cheapest substation %.0f serves %.4f of %.4f; ", static_cast<double>(cheapest + 1),
                  sol.injections[cheapest], most_cheap);
    if (hour == 12) {
      if (cheapest != 1) v.fail("hour 12: substation 2 is not the cheapest");
      if (std::abs(sub2 - most2) > 1e-6) v.fail(fmt("hour 12: substation 2 serves %.6f of %.6f MW", sub2, most2));
    } else {
      if (cheapest == 1) v.fail("hour 7: substation 2 is the cheapest");
      if (!(sub2 < most2 - 1e-3)) v.fail(fmt("hour 7: substation 2 still serves %.6f of %.6f MW", sub2, most2));
      if (std::abs(sol.injections[cheapest] - most_cheap) > 1e-6) v.fail("hour 7: cheapest substation not maximal");
    }
  }
  if (v.pass) v.detail = detail.substr(0, detail.size() - 2);
  return v;
}

int sh(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_timing(const std::string& summary) {
  std::istringstream in(summary);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("solve_time_s:", 0) != 0) out += line + "\n";
  return out;
}

Verdict end_to_end() {
  Verdict v;
  const std::string exe = DNTR_CLI_PATH;
  std::random_device rd;
  const auto dir = fs::temp_directory_path() / ("dntr_e2e_" + std::to_string(rd()));
  fs::create_directories(dir);
  const auto d = dir.string();
  const auto quiet = " > /dev/null";

  const auto start = std::chrono::steady_clock::now();
  int rc = sh(exe + " generate --case 4 -o " + d + "/case4" + quiet);
  if (rc != 0) v.fail("generate exit " + std::to_string(rc));
  rc = sh(exe + " validate -n " + d + "/case4/network.json -l " + d + "/case4/loads.csv" + quiet);
  if (rc != 0) v.fail("validate exit " + std::to_string(rc));
  for (const char* run : {"run1", "run2"}) {
    rc = sh(exe + " solve -n " + d + "/case4/network.json -l " + d + "/case4/loads.csv -p " + d +
            "/case4/prices.csv -o " + d + "/" + run + quiet);
    if (rc != 0) v.fail(std::string(run) + " solve exit " + std::to_string(rc));
  }
  rc = sh(exe + " report " + d + "/run1 " + d + "/run2 -o " + d + "/report" + quiet);
  if (rc != 0) v.fail("report exit " + std::to_string(rc));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t compared = 0;
  for (const char* file : {"schedule.csv", "cost.csv", "loading.csv", "network.json", "summary.txt"}) {
    auto a = slurp(dir / "run1" / file), b = slurp(dir / "run2" / file);
    if (std::string(file) == "summary.txt") {
      a = without_timing(a);
      b = without_timing(b);
    }
    if (a.empty() || a != b) v.fail(std::string(file) + " differs between runs");
    ++compared;
  }
  const auto comparison = slurp(dir / "report/comparison.csv");
  if (comparison.find("run1,40,") == std::string::npos) v.fail("comparison.csv missing run1");
  if (secs >= 60.0) v.fail(fmt("pipeline took %.1f s", secs));
  if (v.pass)
    v.detail = fmt("exit 0 throughout, %.0f files byte-identical, %.1f s including two solves",
                   static_cast<double>(compared), secs);
  std::error_code ec;
  fs::remove_all(dir, ec);
  return v;
}

}  // namespace

int main() {
  criterion("oracle-equivalence", oracle_equivalence);
  criterion("flexibility-monotonicity", flexibility_monotonicity);
  criterion("load-monotonicity", load_monotonicity);
  criterion("physics", physics);
  criterion("milp-feasibility", milp_feasibility);
  criterion("lp-correctness", lp_correctness);
  criterion("decomposition", decomposition);
  criterion("behavioral", behavioral);
  criterion("end-to-end", end_to_end);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
