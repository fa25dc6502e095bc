#pragma once

// Command-line front end: validate / generate / solve / report.
//
// Exit codes: 0 ok, 1 validation or usage, 2 I/O or parse failure,
// 3 infeasible hour, 4 solver limit.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dntr/dcflow.hpp"
#include "dntr/dntr.hpp"
#include "dntr/fixtures.hpp"
#include "dntr/netmodel.hpp"

namespace dntr::cli {

enum ExitCode : int { Ok = 0, Invalid = 1, Io = 2, Infeasible = 3, Limit = 4 };

class CliError : public std::runtime_error {
public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

private:
  int code_;
};

// ---------------------------------------------------------------------------
// CSV

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw CliError(Io, "unterminated quote in CSV line");
  out.push_back(std::move(field));
  return out;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string fixed6(double v) {
  if (v == 0.0) v = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

/// Micro-unit integer rendered with six decimals.
inline std::string micro_to_string(long long micro) {
  const bool neg = micro < 0;
  const unsigned long long mag = neg ? 0ULL - static_cast<unsigned long long>(micro) : static_cast<unsigned long long>(micro);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%llu.%06llu", neg ? "-" : "", mag / 1000000ULL, mag % 1000000ULL);
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(Io, "cannot write " + path.string());
  out << text;
  if (!out) throw CliError(Io, "write failed for " + path.string());
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline CsvTable read_csv(const std::filesystem::path& path) {
  const auto text = read_file(path);
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size())
      throw CliError(Io, path.string() + ":" + std::to_string(number) + ": expected " +
                             std::to_string(table.header.size()) + " fields, found " + std::to_string(fields.size()));
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw CliError(Io, path.string() + ": empty CSV file");
  return table;
}

inline double parse_number(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) throw CliError(Io, where + ": not a number: '" + s + "'");
  return v;
}

/// Hour-indexed profile with one column per listed bus id. Rows must be
/// numbered 1..T in order; columns may appear in any order but must cover
/// `ids` exactly.
inline std::vector<std::vector<double>> read_profile(const std::filesystem::path& path, const std::vector<int>& ids,
                                                     const char* what) {
  const auto table = read_csv(path);
  if (table.header.front() != "hour") throw CliError(Io, path.string() + ": first column must be 'hour'");
  std::map<int, std::size_t> slot;
  for (std::size_t k = 0; k < ids.size(); ++k) slot[ids[k]] = k;
  std::vector<std::size_t> column_slot;
  std::vector<bool> covered(ids.size(), false);
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    const auto id = static_cast<int>(parse_number(table.header[c], path.string() + " header"));
    const auto it = slot.find(id);
    if (it == slot.end())
      throw CliError(Invalid, path.string() + ": column " + table.header[c] + " is not a " + what + " of the network");
    if (covered[it->second]) throw CliError(Invalid, path.string() + ": duplicate column " + table.header[c]);
    covered[it->second] = true;
    column_slot.push_back(it->second);
  }
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (!covered[k]) throw CliError(Invalid, path.string() + ": missing column for " + what + " " + std::to_string(ids[k]));
  if (table.rows.empty()) throw CliError(Invalid, path.string() + ": no hourly rows");

  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path.string() + " row " + std::to_string(r + 1);
    if (parse_number(row[0], where) != static_cast<double>(r + 1))
      throw CliError(Invalid, where + ": hours must be numbered 1, 2, ... in order");
    std::vector<double> values(ids.size());
    for (std::size_t c = 1; c < row.size(); ++c) values[column_slot[c - 1]] = parse_number(row[c], where);
    out.push_back(std::move(values));
  }
  return out;
}

inline std::string write_profile(const std::vector<int>& ids, const std::vector<std::vector<double>>& rows) {
  std::string s = "hour";
  for (int id : ids) s += "," + std::to_string(id);
  s += "\n";
  for (std::size_t t = 0; t < rows.size(); ++t) {
    s += std::to_string(t + 1);
    for (double v : rows[t]) s += "," + fixed6(v);
    s += "\n";
  }
  return s;
}

inline std::vector<int> bus_ids(const Network& net) {
  std::vector<int> ids;
  for (const auto& b : net.buses) ids.push_back(b.id);
  return ids;
}

inline std::vector<int> substation_ids(const Network& net) {
  std::vector<int> ids;
  for (auto s : net.substations()) ids.push_back(net.buses[s].id);
  return ids;
}

inline Network load_network(const std::filesystem::path& path) {
  const auto text = read_file(path);
  try {
    return parse_network(text);
  } catch (const NetworkError& e) {
    throw CliError(Io, path.string() + ": " + e.what());
  }
}

inline void print_report(const ValidationReport& report, std::ostream& out) {
  for (const auto& f : report.errors) out << "error [" << finding_name(f.code) << "] " << f.message << "\n";
  for (const auto& f : report.warnings) out << "warning [" << finding_name(f.code) << "] " << f.message << "\n";
  out << report.errors.size() << " errors, " << report.warnings.size() << " warnings\n";
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_validate(const std::string& network_path, const std::string& loads_path, std::ostream& out) {
  const auto net = load_network(network_path);
  auto report = validate(net);
  if (!loads_path.empty() && report.ok()) add_zero_load_warnings(report, net, read_profile(loads_path, bus_ids(net), "bus"));
  print_report(report, out);
  return report.ok() ? Ok : Invalid;
}

struct GenerateConfig {
  int case_id = 1;
  std::uint64_t seed = 1;
  std::string price_shape = "reference";
  bool uncongested = false;
  double scale = 1.0;
  std::string out_dir;
};

inline int cmd_generate(const GenerateConfig& cfg, std::ostream& out) {
  fixtures::FixtureSpec spec;
  spec.case_id = cfg.case_id;
  spec.seed = cfg.seed;
  spec.uncongested = cfg.uncongested;
  try {
    spec.check();
  } catch (const std::invalid_argument& e) {
    throw CliError(Invalid, e.what());
  }
  if (cfg.price_shape != "reference" && cfg.price_shape != "random")
    throw CliError(Invalid, "price shape must be 'reference' or 'random'");
  if (!(cfg.scale > 0.0)) throw CliError(Invalid, "load scale must be positive");
  const auto shape = cfg.price_shape == "reference" ? fixtures::PriceShape::Reference : fixtures::PriceShape::Random;
  const auto problem = fixtures::scale_loads(fixtures::make_day_problem(spec, shape), cfg.scale);

  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError(Io, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "network.json", serialize_network(problem.net));
  write_file(dir / "loads.csv", write_profile(bus_ids(problem.net), problem.loads));
  write_file(dir / "prices.csv", write_profile(substation_ids(problem.net), problem.prices));
  out << "case " << cfg.case_id << ": " << problem.net.num_buses() << " buses, " << problem.net.num_lines()
      << " lines, " << problem.net.num_flexible() << " flexible -> " << dir.string() << "\n";
  return Ok;
}

struct RunConfig {
  std::string network_path;
  std::string loads_path;
  std::string prices_path;
  std::size_t horizon = 0;  // 0: every row of the profiles
  double epsilon = kDefaultEpsilon;
  double angle_lo = -0.6;
  double angle_hi = 0.6;
  double gap = 1e-6;
  double scale = 1.0;
  std::size_t jobs = 1;
  std::size_t node_limit = 2'000'000;
  bool timing = true;
  std::string out_dir;

  void check() const {
    if (!(epsilon > 0.0)) throw CliError(Invalid, "epsilon must be positive");
    if (!(gap > 0.0)) throw CliError(Invalid, "gap must be positive");
    if (!(scale > 0.0)) throw CliError(Invalid, "load scale must be positive");
    if (!(angle_lo < angle_hi)) throw CliError(Invalid, "angle-lo must be below angle-hi");
    if (jobs < 1) throw CliError(Invalid, "jobs must be at least 1");
    if (node_limit < 1) throw CliError(Invalid, "node limit must be at least 1");
  }
};

inline DayProblem load_problem(const RunConfig& cfg) {
  DayProblem p;
  p.net = load_network(cfg.network_path);
  const auto report = validate(p.net);
  if (!report.ok()) {
    std::ostringstream ss;
    print_report(report, ss);
    throw CliError(Invalid, "invalid network " + cfg.network_path + "\n" + ss.str());
  }
  p.loads = read_profile(cfg.loads_path, bus_ids(p.net), "bus");
  p.prices = read_profile(cfg.prices_path, substation_ids(p.net), "substation");
  const auto rows = std::min(p.loads.size(), p.prices.size());
  p.horizon = cfg.horizon == 0 ? rows : cfg.horizon;
  if (p.horizon > rows)
    throw CliError(Invalid, "horizon " + std::to_string(p.horizon) + " exceeds the " + std::to_string(rows) +
                                " hours in the profiles");
  p.loads.resize(p.horizon);
  p.prices.resize(p.horizon);
  for (auto& hour : p.loads)
    for (auto& d : hour) d *= cfg.scale;
  try {
    p.check();
  } catch (const std::invalid_argument& e) {
    throw CliError(Invalid, e.what());
  }
  return p;
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.check();
  const auto problem = load_problem(cfg);
  const auto& net = problem.net;

  DayOptions opts;
  opts.model.angle_lo = cfg.angle_lo;
  opts.model.angle_hi = cfg.angle_hi;
  opts.solver.gap = cfg.gap;
  opts.solver.node_limit = cfg.node_limit;
  opts.epsilon = cfg.epsilon;
  opts.jobs = cfg.jobs;

  const auto start = std::chrono::steady_clock::now();
  DaySolution day;
  try {
    day = solve_day(problem, opts);
  } catch (const InfeasibleHourError& e) {
    err << "infeasible: " << e.what() << "\n";
    return Infeasible;
  } catch (const SolverLimitError& e) {
    err << "solver limit: " << e.what() << "\n";
    return Limit;
  } catch (const NetworkError& e) {
    throw CliError(Invalid, e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto flex = net.flexible_lines();
  std::string schedule = "hour";
  for (auto i : flex) schedule += "," + csv_field(net.lines[i].id);
  schedule += "\n";
  std::string cost = "hour,cost\n";
  std::string loading = "hour";
  for (const auto& line : net.lines) loading += "," + csv_field(line.id);
  loading += "\n";

  long long total_micro = 0;
  SearchStats stats;
  for (const auto& h : day.hours) {
    const auto hour = std::to_string(h.hour + 1);
    if (!flex.empty()) {
      schedule += hour;
      for (auto s : h.statuses) schedule += s ? ",1" : ",0";
      schedule += "\n";
    }

    const long long micro = std::llround(h.cost * 1e6);
    total_micro += micro;
    cost += hour + "," + micro_to_string(micro) + "\n";

    loading += hour;
    for (std::size_t i = 0; i < net.num_lines(); ++i)
      loading += "," + fixed6(100.0 * std::abs(h.flows[i]) / net.lines[i].rating);
    loading += "\n";

    stats.nodes += h.stats.nodes;
    stats.lp_solves += h.stats.lp_solves;
    stats.lp_iterations += h.stats.lp_iterations;
  }
  cost += "total," + micro_to_string(total_micro) + "\n";

  std::string summary;
  summary += "total_cost: " + micro_to_string(total_micro) + "\n";
  summary += "hours: " + std::to_string(day.hours.size()) + "\n";
  summary += "buses: " + std::to_string(net.num_buses()) + "\n";
  summary += "lines: " + std::to_string(net.num_lines()) + "\n";
  summary += "flexible_lines: " + std::to_string(flex.size()) + "\n";
  summary += "load_scale: " + fixed6(cfg.scale) + "\n";
  summary += "bnb_nodes: " + std::to_string(stats.nodes) + "\n";
  summary += "lp_solves: " + std::to_string(stats.lp_solves) + "\n";
  summary += "lp_iterations: " + std::to_string(stats.lp_iterations) + "\n";
  if (cfg.timing) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", seconds);
    summary += std::string("solve_time_s: ") + buf + "\n";
  }

  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError(Io, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "schedule.csv", schedule);
  write_file(dir / "cost.csv", cost);
  write_file(dir / "loading.csv", loading);
  write_file(dir / "summary.txt", summary);
  write_file(dir / "network.json", serialize_network(net));
  out << "total cost " << micro_to_string(total_micro) << " over " << day.hours.size() << " hours -> "
      << dir.string() << "\n";
  return Ok;
}

struct RunResult {
  std::string name;
  Network net;
  std::size_t flexible = 0;
  long long total_micro = 0;
};

inline RunResult load_run(const std::filesystem::path& dir) {
  RunResult run;
  run.name = dir.string();
  run.net = load_network(dir / "network.json");
  run.flexible = run.net.num_flexible();

  const auto cost = read_csv(dir / "cost.csv");
  bool found = false;
  for (const auto& row : cost.rows)
    if (row.front() == "total") {
      run.total_micro = std::llround(parse_number(row.at(1), (dir / "cost.csv").string()) * 1e6);
      found = true;
    }
  if (!found) throw CliError(Io, (dir / "cost.csv").string() + ": no total row");

  // Every scheduled hour must be radial on the run's own network.
  const auto schedule = read_csv(dir / "schedule.csv");
  const auto flex = run.net.flexible_lines();
  if (schedule.header.size() != flex.size() + 1)
    throw CliError(Invalid, (dir / "schedule.csv").string() + ": columns do not match the flexible lines");
  for (std::size_t k = 0; k < flex.size(); ++k)
    if (schedule.header[k + 1] != run.net.lines[flex[k]].id)
      throw CliError(Invalid, (dir / "schedule.csv").string() + ": unexpected column " + schedule.header[k + 1]);
  for (const auto& row : schedule.rows) {
    std::vector<std::uint8_t> statuses;
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k] != "0" && row[k] != "1")
        throw CliError(Invalid, (dir / "schedule.csv").string() + ": status must be 0 or 1");
      statuses.push_back(row[k] == "1" ? 1 : 0);
    }
    if (!is_spanning_forest(run.net, run.net.closed_mask(statuses)))
      throw CliError(Invalid, (dir / "schedule.csv").string() + ": hour " + row.front() + " is not radial");
  }
  return run;
}

inline bool same_buses(const Network& a, const Network& b) {
  return a.buses == b.buses && a.base_mva == b.base_mva;
}

inline int cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_dir, std::ostream& out) {
  if (run_dirs.empty()) throw CliError(Invalid, "report needs at least one run directory");
  std::vector<RunResult> runs;
  for (const auto& d : run_dirs) runs.push_back(load_run(d));
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (!same_buses(runs[r].net, runs.front().net))
      throw CliError(Invalid, "run " + runs[r].name + " uses a different bus set than " + runs.front().name);

  std::string csv = "run,flexible_lines,total_cost,delta_pct\n";
  const double first = static_cast<double>(runs.front().total_micro);
  for (const auto& run : runs) {
    const double delta = first == 0.0 ? 0.0 : 100.0 * (static_cast<double>(run.total_micro) - first) / first;
    const auto line = csv_field(std::filesystem::path(run.name).filename().string()) + "," +
                      std::to_string(run.flexible) + "," + micro_to_string(run.total_micro) + "," + fixed6(delta);
    csv += line + "\n";
    out << line << "\n";
  }
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError(Io, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "comparison.csv", csv);
  return Ok;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Day-ahead topology reconfiguration for radial distribution networks"};
  app.require_subcommand(1);

  std::string network, loads, prices;
  auto* validate_cmd = app.add_subcommand("validate", "check a network file (and optionally a load profile)");
  validate_cmd->add_option("-n,--network", network, "network JSON")->required()->envname("DNTR_NETWORK");
  validate_cmd->add_option("-l,--loads", loads, "load profile CSV")->envname("DNTR_LOADS");

  GenerateConfig gen;
  auto* generate_cmd = app.add_subcommand("generate", "write a three-feeder test case");
  generate_cmd->add_option("-c,--case", gen.case_id, "case 1-4")->check(CLI::Range(1, 4));
  generate_cmd->add_option("-s,--seed", gen.seed, "seed")->envname("DNTR_SEED");
  generate_cmd->add_option("--price-shape", gen.price_shape, "reference or random")
      ->check(CLI::IsMember({"reference", "random"}));
  generate_cmd->add_flag("--uncongested", gen.uncongested, "set every rating very high");
  generate_cmd->add_option("--scale", gen.scale, "load scale factor");
  generate_cmd->add_option("-o,--out", gen.out_dir, "output directory")->required()->envname("DNTR_OUT");

  RunConfig cfg;
  auto* solve_cmd = app.add_subcommand("solve", "optimize the switching schedule");
  solve_cmd->add_option("-n,--network", cfg.network_path, "network JSON")->required()->envname("DNTR_NETWORK");
  solve_cmd->add_option("-l,--loads", cfg.loads_path, "load profile CSV")->required()->envname("DNTR_LOADS");
  solve_cmd->add_option("-p,--prices", cfg.prices_path, "price profile CSV")->required()->envname("DNTR_PRICES");
  solve_cmd->add_option("-o,--out", cfg.out_dir, "output directory")->required()->envname("DNTR_OUT");
  solve_cmd->add_option("--horizon", cfg.horizon, "hours to solve (0: all)")->envname("DNTR_HORIZON");
  solve_cmd->add_option("--epsilon", cfg.epsilon, "MW used for zero loads")->envname("DNTR_EPSILON");
  solve_cmd->add_option("--angle-lo", cfg.angle_lo, "lower angle bound, rad")->envname("DNTR_ANGLE_LO");
  solve_cmd->add_option("--angle-hi", cfg.angle_hi, "upper angle bound, rad")->envname("DNTR_ANGLE_HI");
  solve_cmd->add_option("--gap", cfg.gap, "relative optimality gap")->envname("DNTR_GAP");
  solve_cmd->add_option("--scale", cfg.scale, "load scale factor")->envname("DNTR_SCALE");
  solve_cmd->add_option("-j,--jobs", cfg.jobs, "hours solved in parallel")->envname("DNTR_JOBS");
  solve_cmd->add_option("--node-limit", cfg.node_limit, "branch-and-bound nodes per hour")
      ->envname("DNTR_NODE_LIMIT");
  bool no_timing = false;
  solve_cmd->add_flag("--no-timing", no_timing, "leave solve time out of summary.txt");

  std::vector<std::string> run_dirs;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "compare finished solve runs");
  report_cmd->add_option("runs", run_dirs, "solve output directories")->required();
  report_cmd->add_option("-o,--out", report_out, "output directory")->required()->envname("DNTR_OUT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? Ok : Invalid;
  }

  try {
    if (*validate_cmd) return cmd_validate(network, loads, out);
    if (*generate_cmd) return cmd_generate(gen, out);
    if (*solve_cmd) {
      cfg.timing = !no_timing;
      return cmd_solve(cfg, out, err);
    }
    if (*report_cmd) return cmd_report(run_dirs, report_out, out);
  } catch (const CliError& e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const NetworkError& e) {
    err << "error: " << e.what() << "\n";
    return Invalid;
  }
  return Invalid;
}

}  // namespace dntr::cli
