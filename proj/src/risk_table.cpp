#include "comptree/risk_table.hpp"

#include <limits>
#include <optional>
#include <string>

#include "comptree/parallel.hpp"

namespace comptree {

RiskTable build_risk_table(const std::vector<CompositionSample>& data,
                           const EmConfig& config, int threads) {
  const int p = static_cast<int>(data.size());
  if (p < 1) throw EmptyData("no nodes");
  const Eigen::Index n = data[0].n();
  if (n < 1) throw EmptyData("no rows");
  for (const auto& s : data) {
    if (s.n() != n)
      throw InconsistentSampleCount("node sample counts differ: " +
                                    std::to_string(s.n()) + " vs " +
                                    std::to_string(n));
  }

  RiskTable table;
  table.p = p;
  table.edge_risk = Matrix::Zero(p, p);
  table.root_risk = Vector::Zero(p);
  table.root_params.resize(static_cast<std::size_t>(p));

  struct PairTask {
    int child;
    int parent;
  };
  std::vector<PairTask> pairs;
  pairs.reserve(static_cast<std::size_t>(p) * (p - 1));
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < p; ++k)
      if (j != k) pairs.push_back({j, k});

  std::vector<std::optional<EdgeParams>> pair_params(pairs.size());

  const int num_tasks = p + static_cast<int>(pairs.size());
  parallel_for(num_tasks, threads, [&](int t) {
    if (t < p) {
      table.root_params[static_cast<std::size_t>(t)] =
          fit_root(data[static_cast<std::size_t>(t)], config.eta_min);
      table.root_risk(t) =
          sample_risk(table.root_params[static_cast<std::size_t>(t)],
                      data[static_cast<std::size_t>(t)]);
    } else {
      const PairTask task = pairs[static_cast<std::size_t>(t - p)];
      EmFitResult fit = em_fit(data[static_cast<std::size_t>(task.child)],
                               data[static_cast<std::size_t>(task.parent)], config);
      table.edge_risk(task.child, task.parent) = fit.risk;
      pair_params[static_cast<std::size_t>(t - p)] = std::move(fit.params);
    }
  });

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    table.edge_params.emplace(std::make_pair(pairs[i].child, pairs[i].parent),
                              std::move(*pair_params[i]));
  }
  return table;
}

EdgeSignalTable edge_signals(const RiskTable& table) {
  EdgeSignalTable out;
  out.delta = Matrix::Zero(table.p, table.p);
  for (int j = 0; j < table.p; ++j)
    for (int k = 0; k < table.p; ++k)
      if (j != k) out.delta(j, k) = table.root_risk(j) - table.edge_risk(j, k);
  return out;
}

double tree_score(const RiskTable& table, const TreeStructure& tree, double alpha) {
  if (tree.size() != table.p)
    throw DimensionMismatch("tree has " + std::to_string(tree.size()) +
                            " nodes, table " + std::to_string(table.p));
  if (alpha < 0.0) throw InvalidArgument("alpha must be >= 0");
  if (!tree.is_valid()) throw InvalidTree("parent assignment has a cycle or self-loop");
  double acc = 0.0;
  int edges = 0;
  for (int j = 0; j < table.p; ++j) {
    const int pj = tree.parent[static_cast<std::size_t>(j)];
    if (pj == TreeStructure::kNoParent) {
      acc += table.root_risk(j);
    } else {
      acc += table.edge_risk(j, pj);
      ++edges;
    }
  }
  return acc + alpha * static_cast<double>(edges);
}

SignalSeparation signal_separation(const RiskTable& table, const TreeStructure& tree) {
  if (tree.size() != table.p)
    throw DimensionMismatch("tree/table size mismatch");
  const EdgeSignalTable signals = edge_signals(table);
  SignalSeparation out;
  out.min_selected = std::numeric_limits<double>::infinity();
  out.max_unselected = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < table.p; ++j) {
    const int pj = tree.parent[static_cast<std::size_t>(j)];
    for (int k = 0; k < table.p; ++k) {
      if (k == j) continue;
      if (k == pj) {
        out.min_selected = std::min(out.min_selected, signals.delta(j, k));
      } else {
        out.max_unselected = std::max(out.max_unselected, signals.delta(j, k));
      }
    }
  }
  return out;
}

}  // namespace comptree
