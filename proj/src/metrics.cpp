#include "comptree/metrics.hpp"

#include <string>

#include "comptree/errors.hpp"

namespace comptree {

RecoveryMetrics compare_trees(const TreeStructure& estimated,
                              const TreeStructure& truth) {
  if (estimated.size() != truth.size())
    throw DimensionMismatch("trees have " + std::to_string(estimated.size()) +
                            " and " + std::to_string(truth.size()) + " nodes");
  int n_true = 0, n_est = 0, n_common = 0;
  for (int j = 0; j < truth.size(); ++j) {
    const int te = truth.parent[static_cast<std::size_t>(j)];
    const int ee = estimated.parent[static_cast<std::size_t>(j)];
    if (te != TreeStructure::kNoParent) ++n_true;
    if (ee != TreeStructure::kNoParent) ++n_est;
    if (te != TreeStructure::kNoParent && te == ee) ++n_common;
  }
  RecoveryMetrics m;
  m.tpr = n_true == 0 ? 1.0 : static_cast<double>(n_common) / n_true;
  m.fdr = n_est == 0 ? 0.0 : static_cast<double>(n_est - n_common) / n_est;
  m.shd = n_true + n_est - 2 * n_common;
  m.exact_match = m.shd == 0;
  return m;
}

}  // namespace comptree
