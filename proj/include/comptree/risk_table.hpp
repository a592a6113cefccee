#pragma once

#include <map>
#include <utility>
#include <vector>

#include "comptree/edge_model.hpp"
#include "comptree/tree.hpp"

namespace comptree {

/// All p(p-1) optimized pairwise risks plus the p root risks, with the
/// fitted parameters behind them. edge_risk(j, k) is the risk of modelling
/// child j from parent k; the diagonal is unused. Immutable once built.
struct RiskTable {
  int p = 0;
  Matrix edge_risk;
  Vector root_risk;
  std::map<std::pair<int, int>, EdgeParams> edge_params;  // key (child, parent)
  std::vector<RootParams> root_params;
};

/// delta(j, k) = root_risk(j) - edge_risk(j, k): the sample KL reduction
/// from giving node j the parent k. Non-negative up to fit tolerance.
struct EdgeSignalTable {
  Matrix delta;
};

/// Separation diagnostic for a fitted tree: the weakest signal among
/// selected edges versus the strongest signal among unselected candidates.
struct SignalSeparation {
  double min_selected = 0.0;    // +inf-like when the tree has no edges
  double max_unselected = 0.0;  // -inf-like when every candidate is selected
};

/// Fits every ordered pair and every root. The pairwise problems are
/// independent and are dispatched over `threads` workers (0 = all cores);
/// per-pair seeding keeps the result identical for any worker count.
RiskTable build_risk_table(const std::vector<CompositionSample>& data,
                           const EmConfig& config, int threads = 0);

EdgeSignalTable edge_signals(const RiskTable& table);

/// Penalized score of a forest: sum of selected edge risks, root risks for
/// parentless nodes, plus alpha per edge.
double tree_score(const RiskTable& table, const TreeStructure& tree, double alpha);

SignalSeparation signal_separation(const RiskTable& table, const TreeStructure& tree);

}  // namespace comptree
