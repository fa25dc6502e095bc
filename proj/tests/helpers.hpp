#pragma once

// Small hand-built networks shared by the unit tests.

#include <cstddef>
#include <string>
#include <vector>

#include "dntr/netmodel.hpp"

namespace testnet {

struct LineSpec {
  std::size_t from, to;  // 0-based
  bool flexible = false;
  double x = 0.1;
  double rating = 10.0;
};

inline dntr::Network make(std::size_t buses, const std::vector<std::size_t>& substations,
                          const std::vector<LineSpec>& lines, double base_mva = 1.0) {
  dntr::Network net;
  net.base_mva = base_mva;
  for (std::size_t i = 0; i < buses; ++i) net.buses.push_back({static_cast<int>(i + 1), "b" + std::to_string(i + 1), false});
  for (auto s : substations) net.buses[s].is_substation = true;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto& l = lines[k];
    net.lines.push_back({"L" + std::to_string(k + 1), l.from, l.to, l.x, l.rating, l.flexible});
  }
  return net;
}

/// Two substations (buses 1, 2) and one load bus (3) with switchable lines
/// L1 = 1-3 and L2 = 2-3. An 8 MW load stays within the default angle range.
inline dntr::Network two_substations(double rating1 = 10.0, double rating2 = 10.0) {
  return make(3, {0, 1}, {{0, 2, true, 0.05, rating1}, {1, 2, true, 0.05, rating2}});
}

}  // namespace testnet
