#pragma once

#include "comptree/tree.hpp"

namespace comptree {

/// Edge-set recovery metrics over ordered (directed) edges. A reversed edge
/// counts as one deletion plus one insertion in shd, so orientation errors
/// cost 2. Conventions at the boundaries: tpr is 1 when the truth has no
/// edges, fdr is 0 when the estimate has none. Roots are not scored.
struct RecoveryMetrics {
  double tpr = 0.0;
  double fdr = 0.0;
  int shd = 0;
  bool exact_match = false;
};

RecoveryMetrics compare_trees(const TreeStructure& estimated,
                              const TreeStructure& truth);

}  // namespace comptree
