#pragma once

#include "comptree/risk_table.hpp"
#include "comptree/tree.hpp"

namespace comptree {

/// Complete weighted digraph over the node set augmented with a virtual
/// root (index 0). weight(k, j) is the cost of making k the parent of j,
/// for j in 1..p and k != j; weight(0, j) is the cost of leaving j a root.
/// Remaining entries are unused.
struct WeightedDigraph {
  int p = 0;
  Matrix weight;  // (p+1) x (p+1)
};

/// weight(0, j) = root_risk(j); weight(k, j) = edge_risk(j, k) + alpha. The
/// penalty applies to real edges only, so total arborescence weight equals
/// tree_score and edges are thresholded on their signals against alpha.
WeightedDigraph build_augmented_graph(const RiskTable& table, double alpha);

/// Exact minimum-weight arborescence rooted at the virtual node, returned
/// as a parent assignment over the real nodes (virtual-root edges become
/// roots). Weights are compared exactly as doubles; ties are broken by
/// preferring the virtual root, then the smallest parent index, resolved
/// consistently through contractions so the result matches
/// brute_force_search bit for bit.
TreeStructure chu_liu_edmonds(const WeightedDigraph& g);

/// Testing oracle: enumerates every acyclic parent assignment (p <= 8) in
/// lexicographic order (no-parent first, then ascending parent index) and
/// keeps the first minimizer of tree_score. Throws TooLarge for p > 8.
TreeStructure brute_force_search(const RiskTable& table, double alpha);

}  // namespace comptree
