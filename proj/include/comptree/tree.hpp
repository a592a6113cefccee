#pragma once

#include <utility>
#include <vector>

namespace comptree {

/// A directed forest over p nodes: each node has at most one parent and
/// parent pointers contain no cycles. Roots carry kNoParent. The library
/// does not distinguish a tree from a forest.
struct TreeStructure {
  static constexpr int kNoParent = -1;

  std::vector<int> parent;

  TreeStructure() = default;
  explicit TreeStructure(int p) : parent(static_cast<std::size_t>(p), kNoParent) {}

  int size() const { return static_cast<int>(parent.size()); }

  int edge_count() const {
    int e = 0;
    for (int pj : parent)
      if (pj != kNoParent) ++e;
    return e;
  }

  /// Directed edges as (parent, child) pairs, in child order.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < size(); ++j)
      if (parent[static_cast<std::size_t>(j)] != kNoParent)
        out.emplace_back(parent[static_cast<std::size_t>(j)], j);
    return out;
  }

  /// Parents in range, no self-loops, no cycles.
  bool is_valid() const {
    const int p = size();
    if (p == 0) return false;
    for (int j = 0; j < p; ++j) {
      const int pj = parent[static_cast<std::size_t>(j)];
      if (pj == j) return false;
      if (pj != kNoParent && (pj < 0 || pj >= p)) return false;
    }
    // Walk to a root from every node; a repeat visit within one walk is a cycle.
    std::vector<int> state(static_cast<std::size_t>(p), 0);  // 0 new, 1 active, 2 done
    for (int start = 0; start < p; ++start) {
      int j = start;
      std::vector<int> path;
      while (j != kNoParent && state[static_cast<std::size_t>(j)] == 0) {
        state[static_cast<std::size_t>(j)] = 1;
        path.push_back(j);
        j = parent[static_cast<std::size_t>(j)];
      }
      if (j != kNoParent && state[static_cast<std::size_t>(j)] == 1) return false;
      for (int v : path) state[static_cast<std::size_t>(v)] = 2;
    }
    return true;
  }

  bool operator==(const TreeStructure& o) const { return parent == o.parent; }
};

}  // namespace comptree
