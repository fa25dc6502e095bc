#pragma once

// Synthetic test family: three radial 13-bus feeders (each rooted at its own
// substation) joined by normally-open tie lines. The four cases enable an
// increasing, nested set of switchable lines.
//
// Local numbering inside a feeder (bus 1 is the substation):
//   1-2, 2-3, 3-4, 2-5, 5-6, 2-7, 7-8, 7-9, 9-10, 7-11, 11-12, 12-13
// Global bus id = feeder * feeder_buses + local, so the substation exits are
// L(1,2), L(14,15) and L(27,28) for the default size.
//
// Tie lines (local endpoints) and the cases that add them:
//   case 1: f1.6 - f2.6   with L(5,6), L(18,19)
//           f1.10 - f3.12 with L(9,10), L(37,38)
//   case 2: f2.10 - f3.10 with L(22,23), L(35,36)
//   case 3: f1.13 - f3.4  with L(12,13), L(29,30)
//   case 4: every line switchable
// Tie endpoints are approximations of the published drawings.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dntr/dntr.hpp"
#include "dntr/netmodel.hpp"

namespace dntr::fixtures {

struct FixtureSpec {
  int case_id = 1;
  std::uint64_t seed = 1;
  std::size_t feeder_buses = 13;
  double x_min = 0.01;  // pu
  double x_max = 0.1;
  double base_mva = 100.0;
  double rating_margin = 1.4;       // x static peak flow on feeder lines
  double rating_headroom = 0.5;     // MW added to feeder line ratings
  double bottleneck_margin = 1.25;  // substation-2 exit line, x static peak flow
  double tie_rating = 1.0;          // MW
  bool uncongested = false;         // every rating set to uncongested_rating
  double uncongested_rating = 1000.0;

  void check() const {
    if (case_id < 1 || case_id > 4) throw std::invalid_argument("case_id must be 1, 2, 3 or 4");
    if (feeder_buses < 13) throw std::invalid_argument("feeder_buses must be at least 13");
    if (!(x_min > 0.0) || !(x_max >= x_min)) throw std::invalid_argument("invalid reactance range");
    if (!(base_mva > 0.0)) throw std::invalid_argument("base_mva must be positive");
  }
};

inline constexpr std::size_t kFeeders = 3;

namespace detail {

struct LocalEdge {
  std::size_t parent, child;  // 1-based local indices
};

inline constexpr std::array<LocalEdge, 12> kFeederEdges{{{1, 2}, {2, 3}, {3, 4}, {2, 5}, {5, 6}, {2, 7},
                                                          {7, 8}, {7, 9}, {9, 10}, {7, 11}, {11, 12}, {12, 13}}};

// Peak MW per local bus 1..13, shaped after the IEEE 13-bus spot loads.
// Every bus carries some load (station service at bus 1), so zero-load
// substitution never applies to the fixtures and costs scale exactly.
inline constexpr std::array<double, 13> kPeakLoad{0.02, 0.20, 0.17,  0.40,  0.17, 0.23, 0.60,
                                                  0.03, 0.05, 0.128, 0.17,  0.843, 0.17};

inline constexpr std::array<double, kFeeders> kFeederScale{1.0, 0.9, 1.1};

struct Tie {
  std::size_t feeder_a, local_a, feeder_b, local_b;
  int case_added;
};

inline constexpr std::array<Tie, 4> kTies{{{0, 6, 1, 6, 1}, {0, 10, 2, 12, 1}, {1, 10, 2, 10, 2}, {0, 13, 2, 4, 3}}};

struct Built {
  Network net;
  std::vector<double> peak_loads;  // per bus
};

inline Built build(const FixtureSpec& spec) {
  spec.check();
  const auto n = spec.feeder_buses;
  auto global = [n](std::size_t feeder, std::size_t local) { return feeder * n + local; };  // 1-based id

  // Feeder tree: fixed 13-bus core plus seeded attachments for larger feeders.
  std::vector<LocalEdge> edges(kFeederEdges.begin(), kFeederEdges.end());
  std::mt19937_64 shape_rng(spec.seed ^ 0x5eedf00dULL);
  for (std::size_t local = 14; local <= n; ++local) {
    std::uniform_int_distribution<std::size_t> pick(2, local - 1);
    edges.push_back({pick(shape_rng), local});
  }

  Built out;
  out.net.base_mva = spec.base_mva;
  for (std::size_t f = 0; f < kFeeders; ++f)
    for (std::size_t local = 1; local <= n; ++local) {
      const auto id = static_cast<int>(global(f, local));
      out.net.buses.push_back({id, "F" + std::to_string(f + 1) + "." + std::to_string(local), local == 1});
    }

  // Loads depend on the seed only, never on the case.
  std::mt19937_64 load_rng(spec.seed);
  std::uniform_real_distribution<double> jitter(0.85, 1.15), extra(0.05, 0.3);
  out.peak_loads.assign(out.net.num_buses(), 0.0);
  for (std::size_t f = 0; f < kFeeders; ++f)
    for (std::size_t local = 1; local <= n; ++local) {
      const double base = local <= 13 ? kPeakLoad[local - 1] : extra(load_rng);
      out.peak_loads[global(f, local) - 1] = base * kFeederScale[f] * jitter(load_rng);
    }

  // Reactances are drawn for the full physical line set in a fixed order.
  std::mt19937_64 x_rng(spec.seed * 0x9e3779b97f4a7c15ULL + 17);
  std::uniform_real_distribution<double> xdist(spec.x_min, spec.x_max);

  std::set<std::pair<std::size_t, std::size_t>> flexible;
  auto mark = [&](std::size_t a, std::size_t b) { flexible.insert({std::min(a, b), std::max(a, b)}); };
  for (const auto& tie : kTies) {
    if (tie.case_added > spec.case_id) continue;
    const auto a = global(tie.feeder_a, tie.local_a), b = global(tie.feeder_b, tie.local_b);
    mark(a, b);
    // Each tie endpoint's feeder-side line is switchable too.
    for (auto [f, local] : {std::pair{tie.feeder_a, tie.local_a}, std::pair{tie.feeder_b, tie.local_b}})
      for (const auto& e : edges)
        if (e.child == local) mark(global(f, e.parent), global(f, e.child));
  }

  auto subtree_peak = [&](std::size_t f, std::size_t local) {
    double sum = 0.0;
    std::vector<std::size_t> stack{local};
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      sum += out.peak_loads[global(f, u) - 1];
      for (const auto& e : edges)
        if (e.parent == u) stack.push_back(e.child);
    }
    return sum;
  };

  auto add_line = [&](std::size_t a, std::size_t b, double x, double rating) {
    const bool flex = spec.case_id == 4 || flexible.count({std::min(a, b), std::max(a, b)}) > 0;
    out.net.lines.push_back({"L(" + std::to_string(a) + "," + std::to_string(b) + ")", a - 1, b - 1, x,
                             spec.uncongested ? spec.uncongested_rating : rating, flex});
  };

  for (std::size_t f = 0; f < kFeeders; ++f)
    for (const auto& e : edges) {
      const double x = xdist(x_rng);
      const double peak = subtree_peak(f, e.child);
      const bool bottleneck = f == 1 && e.parent == 1;
      const double rating =
          bottleneck ? spec.bottleneck_margin * peak : spec.rating_margin * peak + spec.rating_headroom;
      add_line(global(f, e.parent), global(f, e.child), x, rating);
    }
  for (const auto& tie : kTies) {
    const double x = xdist(x_rng);
    if (tie.case_added > spec.case_id) continue;
    add_line(global(tie.feeder_a, tie.local_a), global(tie.feeder_b, tie.local_b), x, spec.tie_rating);
  }
  return out;
}

}  // namespace detail

inline Network gen_three_feeder(const FixtureSpec& spec) { return detail::build(spec).net; }

/// Peak MW per bus; hourly loads are this vector times the normalized profile.
inline std::vector<double> peak_loads(const FixtureSpec& spec) { return detail::build(spec).peak_loads; }

/// Divides by the maximum so the peak hour maps to exactly 1.
inline std::vector<double> normalize_profile(std::span<const double> raw) {
  if (raw.empty()) throw std::invalid_argument("normalize_profile: empty profile");
  const double peak = *std::max_element(raw.begin(), raw.end());
  if (!(peak > 0.0)) throw std::invalid_argument("normalize_profile: profile has no positive entry");
  std::vector<double> out;
  out.reserve(raw.size());
  for (double v : raw) {
    if (v < 0.0) throw std::invalid_argument("normalize_profile: negative entry");
    out.push_back(v / peak);
  }
  return out;
}

/// Hourly system load shaped after a summer ERCOT day (MW), peaking mid-afternoon.
inline std::vector<double> reference_load_curve() {
  return {38500, 37200, 36400, 36000, 36300, 37500, 39400, 41000, 42600, 44200, 45800, 47300,
          48600, 49700, 50400, 50600, 50200, 49100, 47600, 46500, 45200, 43300, 41200, 39600};
}

enum class PriceShape { Reference, Random };

/// Prices [hour][substation] for 24 hours. The reference shape makes substation 2
/// cheapest except at hours 7-8 and 20-21 (1-based), where substation 1 is
/// cheapest and hours 20-21 spike everywhere; substation 3 is dearest on
/// average. Seeded jitter never changes the ordering.
inline std::vector<std::vector<double>> gen_price_profile(std::uint64_t seed, PriceShape shape) {
  constexpr std::size_t kHours = 24;
  std::mt19937_64 rng(seed + 0x1234567ULL);
  std::vector<std::vector<double>> prices(kHours, std::vector<double>(kFeeders, 0.0));
  if (shape == PriceShape::Random) {
    std::uniform_real_distribution<double> price(15.0, 45.0);
    for (auto& hour : prices)
      for (auto& p : hour) p = price(rng);
    return prices;
  }
  static constexpr std::array<double, kHours> base{22, 21, 20, 20, 21, 24, 30, 32, 28, 26, 25, 25,
                                                   26, 27, 29, 31, 33, 35, 38, 62, 64, 40, 30, 25};
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  for (std::size_t t = 0; t < kHours; ++t) {
    const std::size_t hour = t + 1;
    const bool sub1_cheap = hour == 7 || hour == 8 || hour == 20 || hour == 21;
    const bool spike = hour == 20 || hour == 21;
    const double p1 = base[t];
    const double p2 = sub1_cheap ? p1 + (spike ? 3.0 : 4.0) : p1 - 3.0;
    const double p3 = p1 + (spike ? 8.0 : 5.0);
    prices[t][0] = p1 + jitter(rng);
    prices[t][1] = p2 + jitter(rng);
    prices[t][2] = p3 + jitter(rng);
  }
  return prices;
}

inline DayProblem scale_loads(const DayProblem& problem, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale_loads: factor must be positive");
  DayProblem out = problem;
  for (auto& hour : out.loads)
    for (auto& d : hour) d *= factor;
  return out;
}

/// Full 24-hour problem for a fixture: peak loads times the normalized
/// reference curve, and the chosen price shape.
inline DayProblem make_day_problem(const FixtureSpec& spec, PriceShape shape = PriceShape::Reference) {
  const auto built = detail::build(spec);
  const auto profile = normalize_profile(reference_load_curve());
  DayProblem problem;
  problem.net = built.net;
  problem.horizon = profile.size();
  for (double f : profile) {
    std::vector<double> hour(built.peak_loads.size());
    for (std::size_t n = 0; n < hour.size(); ++n) hour[n] = built.peak_loads[n] * f;
    problem.loads.push_back(std::move(hour));
  }
  problem.prices = gen_price_profile(spec.seed, shape);
  return problem;
}

}  // namespace dntr::fixtures
