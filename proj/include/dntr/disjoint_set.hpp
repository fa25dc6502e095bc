#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace dntr {

/// Union-find over bus indices that also tracks whether each component
/// holds a substation. Used for radiality checks and B&B propagation.
class DisjointSet {
public:
  explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0), has_substation_(n, false) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t size() const { return parent_.size(); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void mark_substation(std::size_t x) { has_substation_[find(x)] = true; }

  bool has_substation(std::size_t x) { return has_substation_[find(x)]; }

  bool connected(std::size_t a, std::size_t b) { return find(a) == find(b); }

  /// True if joining a and b would close a cycle or connect two substations.
  bool would_break_radiality(std::size_t a, std::size_t b) {
    const auto ra = find(a);
    const auto rb = find(b);
    return ra == rb || (has_substation_[ra] && has_substation_[rb]);
  }

  /// Merges the components of a and b. Returns false if they were already joined.
  bool unite(std::size_t a, std::size_t b) {
    auto ra = find(a);
    auto rb = find(b);
    if (ra == rb) return false;
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    has_substation_[ra] = has_substation_[ra] || has_substation_[rb];
    return true;
  }

private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
  std::vector<bool> has_substation_;
};

}  // namespace dntr
