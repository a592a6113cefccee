#pragma once

#include <cstdint>
#include <vector>

#include "comptree/arborescence.hpp"
#include "comptree/risk_table.hpp"

namespace comptree {

struct CvConfig {
  int k_folds = 5;
  bool leave_one_out = false;
  /// Strictly increasing, all >= 0. Empty selects the default grid: alpha = 0
  /// plus 20 log-spaced values from 1e-4 to 2 times the largest edge signal
  /// on the full data.
  std::vector<double> alpha_grid;
  std::uint64_t fold_seed = 1;
};

struct CvReport {
  std::vector<double> alphas;
  Vector mean_validation_risk;  // per alpha, averaged over folds
  Matrix per_fold_risk;         // |alphas| x K
  double selected_alpha = 0.0;
  TreeStructure final_tree;
  RiskTable final_params;
};

/// Deterministic shuffled round-robin fold assignment: a disjoint cover of
/// 0..n-1 with fold sizes differing by at most one.
std::vector<int> fold_assignment(Eigen::Index n, int k, std::uint64_t fold_seed);

/// Held-out risk of a tree: for each node, the mean KL of the validation
/// rows against predictions from the training-fitted parameters of that
/// node's parent choice (root parameters for parentless nodes).
double validation_risk(const TreeStructure& tree, const RiskTable& train_table,
                       const std::vector<CompositionSample>& val_data);

std::vector<double> default_alpha_grid(const RiskTable& full_table);

/// K-fold (or leave-one-out) selection of the penalty, then a full-data
/// refit at the winner. Ties in mean validation risk go to the largest
/// alpha. EM streams mix the fold index into the seed so folds are
/// independent replicates.
CvReport cross_validate(const std::vector<CompositionSample>& data,
                        const CvConfig& cv, const EmConfig& em, int threads = 0);

}  // namespace comptree
