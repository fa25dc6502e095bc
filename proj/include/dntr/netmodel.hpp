#pragma once

// Network data model: buses, switchable and fixed lines, the JSON network
// file format, structural validation and radiality checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "dntr/disjoint_set.hpp"

namespace dntr {

struct Bus {
  int id = 0;  // external id as written in the network file
  std::string name;
  bool is_substation = false;

  bool operator==(const Bus&) const = default;
};

struct Line {
  std::string id;
  std::size_t from = 0;  // internal 0-based bus index
  std::size_t to = 0;
  double reactance = 0.0;  // per unit on the network MVA base
  double rating = 0.0;     // MW
  bool flexible = false;

  bool operator==(const Line&) const = default;
};

/// Closed/open state per line, indexed like Network::lines.
using LineMask = std::vector<std::uint8_t>;

struct Network {
  double base_mva = 100.0;
  std::vector<Bus> buses;  // position is the internal bus index
  std::vector<Line> lines;

  bool operator==(const Network&) const = default;

  std::size_t num_buses() const { return buses.size(); }
  std::size_t num_lines() const { return lines.size(); }

  std::size_t num_substations() const {
    return static_cast<std::size_t>(
        std::count_if(buses.begin(), buses.end(), [](const Bus& b) { return b.is_substation; }));
  }

  std::size_t num_flexible() const {
    return static_cast<std::size_t>(
        std::count_if(lines.begin(), lines.end(), [](const Line& l) { return l.flexible; }));
  }

  std::size_t num_non_flexible() const { return num_lines() - num_flexible(); }

  /// Substation bus indices in bus order; this order defines price columns.
  std::vector<std::size_t> substations() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < buses.size(); ++i)
      if (buses[i].is_substation) out.push_back(i);
    return out;
  }

  /// Flexible line indices in line order; this order defines status columns.
  std::vector<std::size_t> flexible_lines() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (lines[i].flexible) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> non_flexible_lines() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (!lines[i].flexible) out.push_back(i);
    return out;
  }

  /// Index of the line with the given id, or npos.
  std::size_t find_line(std::string_view id) const {
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (lines[i].id == id) return i;
    return npos;
  }

  /// Mask with every non-flexible line closed and flexible lines set from
  /// `statuses` (one entry per flexible line, in flexible_lines() order).
  LineMask closed_mask(std::span<const std::uint8_t> statuses) const {
    LineMask mask(lines.size(), 0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].flexible) {
        if (k >= statuses.size()) throw std::invalid_argument("closed_mask: too few flexible statuses");
        mask[i] = statuses[k++] ? 1 : 0;
      } else {
        mask[i] = 1;
      }
    }
    if (k != statuses.size()) throw std::invalid_argument("closed_mask: too many flexible statuses");
    return mask;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// ---------------------------------------------------------------------------
// Errors

enum class NetworkErrorCode {
  Syntax,
  UnknownKey,
  MissingKey,
  WrongType,
  UnknownBus,
  DuplicateId,
  NonContiguousIds,
  SelfLoop,
  NonPositiveReactance,
  NonPositiveRating,
  NonPositiveBase,
  UnknownLine,
  Structural,
};

class NetworkError : public std::runtime_error {
public:
  NetworkError(NetworkErrorCode code, std::string entity, const std::string& message,
               std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(message),
        code_(code),
        entity_(std::move(entity)),
        line_(line),
        column_(column) {}

  NetworkErrorCode code() const { return code_; }
  const std::string& entity() const { return entity_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  NetworkErrorCode code_;
  std::string entity_;
  std::size_t line_;
  std::size_t column_;
};

// ---------------------------------------------------------------------------
// Network file format

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw NetworkError(NetworkErrorCode::UnknownKey, where, "unknown key '" + key + "' in " + where);
  }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw NetworkError(NetworkErrorCode::MissingKey, where,
                       std::string("missing key '") + key + "' in " + where);
  return *it;
}

inline double require_number(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number())
    throw NetworkError(NetworkErrorCode::WrongType, where, std::string("'") + key + "' must be a number in " + where);
  return v.get<double>();
}

inline bool require_bool(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_boolean())
    throw NetworkError(NetworkErrorCode::WrongType, where, std::string("'") + key + "' must be a boolean in " + where);
  return v.get<bool>();
}

inline int require_bus_id(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number_integer())
    throw NetworkError(NetworkErrorCode::WrongType, where,
                       std::string("'") + key + "' must be an integer bus id in " + where);
  return v.get<int>();
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const auto end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// Parses the JSON network format. Bus ids must be contiguous from 0 or 1;
/// lines refer to buses by external id and are stored by internal index.
inline Network parse_network(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    throw NetworkError(NetworkErrorCode::Syntax, "", "syntax error at line " + std::to_string(line) + ", column " +
                                                         std::to_string(col) + ": " + e.what(),
                       line, col);
  }
  if (!doc.is_object()) throw NetworkError(NetworkErrorCode::WrongType, "", "network file must be a JSON object");
  detail::reject_unknown_keys(doc, {"base_mva", "buses", "lines"}, "network");

  Network net;
  net.base_mva = detail::require_number(doc, "base_mva", "network");
  if (!(net.base_mva > 0.0))
    throw NetworkError(NetworkErrorCode::NonPositiveBase, "", "base_mva must be positive");

  const auto& buses = detail::require(doc, "buses", "network");
  const auto& lines = detail::require(doc, "lines", "network");
  if (!buses.is_array()) throw NetworkError(NetworkErrorCode::WrongType, "", "'buses' must be an array");
  if (!lines.is_array()) throw NetworkError(NetworkErrorCode::WrongType, "", "'lines' must be an array");

  std::map<int, Bus> by_id;
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const auto& b = buses[i];
    const std::string where = "buses[" + std::to_string(i) + "]";
    if (!b.is_object()) throw NetworkError(NetworkErrorCode::WrongType, where, where + " must be an object");
    detail::reject_unknown_keys(b, {"id", "name", "substation"}, where);
    Bus bus;
    bus.id = detail::require_bus_id(b, "id", where);
    if (auto it = b.find("name"); it != b.end()) {
      if (!it->is_string()) throw NetworkError(NetworkErrorCode::WrongType, where, "'name' must be a string");
      bus.name = it->get<std::string>();
    }
    bus.is_substation = detail::require_bool(b, "substation", where);
    if (!by_id.emplace(bus.id, bus).second)
      throw NetworkError(NetworkErrorCode::DuplicateId, std::to_string(bus.id),
                         "duplicate bus id " + std::to_string(bus.id));
  }
  if (by_id.empty()) throw NetworkError(NetworkErrorCode::Structural, "", "network has no buses");

  const int base = by_id.begin()->first;
  if (base != 0 && base != 1)
    throw NetworkError(NetworkErrorCode::NonContiguousIds, std::to_string(base), "bus ids must start at 0 or 1");
  if (by_id.rbegin()->first - base + 1 != static_cast<int>(by_id.size()))
    throw NetworkError(NetworkErrorCode::NonContiguousIds, "", "bus ids must be contiguous");
  for (auto& [id, bus] : by_id) net.buses.push_back(bus);

  auto bus_index = [&](int id, const std::string& line_id) -> std::size_t {
    if (!by_id.count(id))
      throw NetworkError(NetworkErrorCode::UnknownBus, line_id,
                         "line '" + line_id + "' references unknown bus " + std::to_string(id));
    return static_cast<std::size_t>(id - base);
  };

  std::set<std::string> line_ids;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    const std::string where = "lines[" + std::to_string(i) + "]";
    if (!l.is_object()) throw NetworkError(NetworkErrorCode::WrongType, where, where + " must be an object");
    detail::reject_unknown_keys(l, {"id", "from", "to", "x", "rating_mw", "flexible"}, where);
    Line line;
    const auto& id = detail::require(l, "id", where);
    if (id.is_string())
      line.id = id.get<std::string>();
    else if (id.is_number_integer())
      line.id = std::to_string(id.get<long long>());
    else
      throw NetworkError(NetworkErrorCode::WrongType, where, "line 'id' must be a string or integer");
    if (!line_ids.insert(line.id).second)
      throw NetworkError(NetworkErrorCode::DuplicateId, line.id, "duplicate line id '" + line.id + "'");
    line.from = bus_index(detail::require_bus_id(l, "from", where), line.id);
    line.to = bus_index(detail::require_bus_id(l, "to", where), line.id);
    if (line.from == line.to)
      throw NetworkError(NetworkErrorCode::SelfLoop, line.id, "line '" + line.id + "' connects a bus to itself");
    line.reactance = detail::require_number(l, "x", where);
    line.rating = detail::require_number(l, "rating_mw", where);
    line.flexible = detail::require_bool(l, "flexible", where);
    if (!(line.reactance > 0.0))
      throw NetworkError(NetworkErrorCode::NonPositiveReactance, line.id,
                         "line '" + line.id + "' has non-positive reactance");
    if (!(line.rating > 0.0))
      throw NetworkError(NetworkErrorCode::NonPositiveRating, line.id,
                         "line '" + line.id + "' has non-positive rating");
    net.lines.push_back(std::move(line));
  }
  return net;
}

inline std::string serialize_network(const Network& net) {
  nlohmann::ordered_json doc;
  doc["base_mva"] = net.base_mva;
  auto buses = nlohmann::ordered_json::array();
  for (const auto& b : net.buses) {
    nlohmann::ordered_json jb;
    jb["id"] = b.id;
    jb["name"] = b.name;
    jb["substation"] = b.is_substation;
    buses.push_back(std::move(jb));
  }
  auto lines = nlohmann::ordered_json::array();
  for (const auto& l : net.lines) {
    nlohmann::ordered_json jl;
    jl["id"] = l.id;
    jl["from"] = net.buses.at(l.from).id;
    jl["to"] = net.buses.at(l.to).id;
    jl["x"] = l.reactance;
    jl["rating_mw"] = l.rating;
    jl["flexible"] = l.flexible;
    lines.push_back(std::move(jl));
  }
  doc["buses"] = std::move(buses);
  doc["lines"] = std::move(lines);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Topology

/// Number of flexible lines that any radial hour must close:
/// N_n - N_s - N_NFL. Throws a Structural error when outside [0, N_FL].
inline std::size_t required_closed_flexible_count(const Network& net) {
  const auto nn = static_cast<long long>(net.num_buses());
  const auto ns = static_cast<long long>(net.num_substations());
  const auto nnfl = static_cast<long long>(net.num_non_flexible());
  const auto nfl = static_cast<long long>(net.num_flexible());
  const long long k = nn - ns - nnfl;
  if (k < 0 || k > nfl)
    throw NetworkError(NetworkErrorCode::Structural, "",
                       "radial topology needs " + std::to_string(k) + " closed flexible lines but " +
                           std::to_string(nfl) + " are available");
  return static_cast<std::size_t>(k);
}

/// True iff the closed lines form a forest in which every bus reaches exactly
/// one substation. Every non-flexible line must be in the closed set.
inline bool is_spanning_forest(const Network& net, const LineMask& closed) {
  if (closed.size() != net.num_lines()) throw std::invalid_argument("is_spanning_forest: mask size mismatch");
  DisjointSet dsu(net.num_buses());
  for (std::size_t i = 0; i < net.num_buses(); ++i)
    if (net.buses[i].is_substation) dsu.mark_substation(i);
  for (std::size_t i = 0; i < net.num_lines(); ++i) {
    const auto& line = net.lines[i];
    if (!closed[i]) {
      if (!line.flexible) return false;
      continue;
    }
    if (dsu.would_break_radiality(line.from, line.to)) return false;
    dsu.unite(line.from, line.to);
  }
  for (std::size_t i = 0; i < net.num_buses(); ++i)
    if (!dsu.has_substation(i)) return false;
  return true;
}

inline bool is_spanning_forest(const Network& net, std::span<const std::string> closed_ids) {
  LineMask mask(net.num_lines(), 0);
  for (const auto& id : closed_ids) {
    const auto idx = net.find_line(id);
    if (idx == Network::npos)
      throw NetworkError(NetworkErrorCode::UnknownLine, id, "unknown line id '" + id + "'");
    mask[idx] = 1;
  }
  return is_spanning_forest(net, mask);
}

// ---------------------------------------------------------------------------
// Validation

enum class FindingCode {
  NoSubstation,
  BadEndpoint,
  SelfLoop,
  NonPositiveReactance,
  NonPositiveRating,
  DuplicateLineId,
  UnreachableBus,
  NonFlexibleCycle,
  NonFlexibleSubstationPath,
  ClosedCountOutOfRange,
  ZeroLoad,
};

inline const char* finding_name(FindingCode code) {
  switch (code) {
    case FindingCode::NoSubstation: return "no substation";
    case FindingCode::BadEndpoint: return "bad endpoint";
    case FindingCode::SelfLoop: return "self loop";
    case FindingCode::NonPositiveReactance: return "non-positive reactance";
    case FindingCode::NonPositiveRating: return "non-positive rating";
    case FindingCode::DuplicateLineId: return "duplicate line id";
    case FindingCode::UnreachableBus: return "unreachable bus";
    case FindingCode::NonFlexibleCycle: return "non-flexible cycle";
    case FindingCode::NonFlexibleSubstationPath: return "non-flexible substation path";
    case FindingCode::ClosedCountOutOfRange: return "closed count out of range";
    case FindingCode::ZeroLoad: return "zero load";
  }
  return "unknown";
}

struct Finding {
  FindingCode code;
  std::string message;
  std::string entity;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;

  bool ok() const { return errors.empty(); }

  bool has_error(FindingCode code) const {
    return std::any_of(errors.begin(), errors.end(), [code](const Finding& f) { return f.code == code; });
  }
};

/// Structural checks: referential sanity, positive parameters, and the
/// existence of a radial spanning forest containing every non-flexible line.
inline ValidationReport validate(const Network& net) {
  ValidationReport report;
  auto error = [&](FindingCode code, std::string entity, std::string msg) {
    report.errors.push_back({code, std::move(msg), std::move(entity)});
  };

  if (net.num_substations() == 0) error(FindingCode::NoSubstation, "", "network has no substation bus");

  bool endpoints_ok = true;
  std::set<std::string> ids;
  for (const auto& line : net.lines) {
    if (!ids.insert(line.id).second) error(FindingCode::DuplicateLineId, line.id, "duplicate line id '" + line.id + "'");
    if (line.from >= net.num_buses() || line.to >= net.num_buses()) {
      error(FindingCode::BadEndpoint, line.id, "line '" + line.id + "' references a missing bus");
      endpoints_ok = false;
      continue;
    }
    if (line.from == line.to) error(FindingCode::SelfLoop, line.id, "line '" + line.id + "' is a self loop");
    if (!(line.reactance > 0.0))
      error(FindingCode::NonPositiveReactance, line.id, "line '" + line.id + "' has non-positive reactance");
    if (!(line.rating > 0.0))
      error(FindingCode::NonPositiveRating, line.id, "line '" + line.id + "' has non-positive rating");
  }
  if (!endpoints_ok) return report;

  // Non-flexible lines are always closed: they must already be radial.
  DisjointSet fixed(net.num_buses());
  for (std::size_t i = 0; i < net.num_buses(); ++i)
    if (net.buses[i].is_substation) fixed.mark_substation(i);
  for (const auto& line : net.lines) {
    if (line.flexible || line.from == line.to) continue;
    if (fixed.connected(line.from, line.to)) {
      error(FindingCode::NonFlexibleCycle, line.id, "non-flexible line '" + line.id + "' closes a cycle");
      continue;
    }
    if (fixed.has_substation(line.from) && fixed.has_substation(line.to)) {
      error(FindingCode::NonFlexibleSubstationPath, line.id,
            "non-flexible line '" + line.id + "' joins two substations");
    }
    fixed.unite(line.from, line.to);
  }

  // Reachability over all lines from any substation.
  std::vector<std::vector<std::size_t>> adj(net.num_buses());
  for (const auto& line : net.lines) {
    adj[line.from].push_back(line.to);
    adj[line.to].push_back(line.from);
  }
  std::vector<bool> seen(net.num_buses(), false);
  std::queue<std::size_t> frontier;
  for (std::size_t i = 0; i < net.num_buses(); ++i)
    if (net.buses[i].is_substation) {
      seen[i] = true;
      frontier.push(i);
    }
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
  }
  for (std::size_t i = 0; i < net.num_buses(); ++i)
    if (!seen[i] && net.num_substations() > 0)
      error(FindingCode::UnreachableBus, std::to_string(net.buses[i].id),
            "unreachable bus " + std::to_string(net.buses[i].id) + ": no path to any substation");

  const long long k = static_cast<long long>(net.num_buses()) - static_cast<long long>(net.num_substations()) -
                      static_cast<long long>(net.num_non_flexible());
  if (k < 0 || k > static_cast<long long>(net.num_flexible()))
    error(FindingCode::ClosedCountOutOfRange, "",
          "required closed flexible count " + std::to_string(k) + " is outside [0, " +
              std::to_string(net.num_flexible()) + "]");
  return report;
}

/// Adds one warning per bus that has zero load in some hour; such loads are
/// replaced by a small epsilon before optimization.
inline void add_zero_load_warnings(ValidationReport& report, const Network& net,
                                   const std::vector<std::vector<double>>& loads) {
  for (std::size_t n = 0; n < net.num_buses(); ++n) {
    std::size_t zero_hours = 0;
    for (const auto& hour : loads)
      if (n < hour.size() && hour[n] == 0.0) ++zero_hours;
    if (zero_hours > 0)
      report.warnings.push_back({FindingCode::ZeroLoad,
                                 "bus " + std::to_string(net.buses[n].id) + " has zero load in " +
                                     std::to_string(zero_hours) + " hour(s)",
                                 std::to_string(net.buses[n].id)});
  }
}

}  // namespace dntr
