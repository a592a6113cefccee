#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "comptree/edge_model.hpp"
#include "comptree/tree.hpp"

namespace comptree {

enum class Topology { kChain, kStar, kMultiRoot, kRandomTree };

struct GeneratorSpec {
  int p = 2;
  std::vector<int> dims;  // per-node part counts, each >= 2
  Topology topology = Topology::kChain;
  int num_roots = 1;  // multi-root only
  Eigen::Index n = 100;
  double concentration = 50.0;   // Dirichlet spread around the conditional mean
  double zero_inflation = 0.0;   // per-part zeroing probability, in [0, 1)
  double omega1_min = 0.6;
  double omega1_max = 0.9;
  std::uint64_t seed = 1;
};

/// A generating structure with its parameters. Every edge's transition
/// matrix is non-degenerate: some entry differs across columns by at least
/// kColumnMargin, keeping instances away from the unidentifiable boundary.
struct GroundTruth {
  TreeStructure tree;
  std::map<int, EdgeParams> edge_params;  // keyed by child node
  std::map<int, RootParams> root_params;  // keyed by root node
};

inline constexpr double kColumnMargin = 0.05;

GroundTruth sample_ground_truth(const GeneratorSpec& spec);

/// Draws n joint observations: roots from Dirichlet(concentration * eta),
/// children from Dirichlet(concentration * predicted mean), in topological
/// order; then each part is independently zeroed with probability
/// zero_inflation and the row renormalized (all-zero rows are redrawn).
std::vector<CompositionSample> sample_data(const GroundTruth& truth,
                                           const GeneratorSpec& spec);

}  // namespace comptree
