#include "comptree/arborescence.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace comptree {

namespace {

// Edge weight plus an integer tie key compared lexicographically. The keys
// encode "virtual root first, then smallest parent index" positionally by
// child, so among equal-weight arborescences the solver lands on the
// lexicographically smallest parent vector -- the same order the brute-force
// oracle enumerates. Keys fit in 128 bits for p <= 26; beyond that they are
// zero and ties fall back to scan order.
struct PairWeight {
  double w = 0.0;
  __int128 tie = 0;

  bool operator<(const PairWeight& o) const {
    if (w != o.w) return w < o.w;
    return tie < o.tie;
  }
  PairWeight operator-(const PairWeight& o) const { return {w - o.w, tie - o.tie}; }
};

struct Arc {
  int src = 0;
  int dst = 0;
  PairWeight weight;
  int prev = -1;  // arc index one contraction level down
};

// Chosen in-arc per node (index into `arcs`), -1 for the root. Nodes are
// 0..nnodes-1 with node 0 the root; every non-root node has at least one
// incoming arc.
std::vector<int> solve(int nnodes, const std::vector<Arc>& arcs) {
  std::vector<int> best(static_cast<std::size_t>(nnodes), -1);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = arcs[i];
    if (a.dst == 0) continue;
    int& b = best[static_cast<std::size_t>(a.dst)];
    if (b < 0 || a.weight < arcs[static_cast<std::size_t>(b)].weight)
      b = static_cast<int>(i);
  }

  // Look for a cycle among the chosen arcs.
  std::vector<int> state(static_cast<std::size_t>(nnodes), 0);
  std::vector<int> cycle;
  state[0] = 2;
  for (int start = 1; start < nnodes && cycle.empty(); ++start) {
    int v = start;
    std::vector<int> path;
    while (v != 0 && state[static_cast<std::size_t>(v)] == 0) {
      state[static_cast<std::size_t>(v)] = 1;
      path.push_back(v);
      v = arcs[static_cast<std::size_t>(best[static_cast<std::size_t>(v)])].src;
    }
    if (state[static_cast<std::size_t>(v)] == 1) {
      int u = v;
      do {
        cycle.push_back(u);
        u = arcs[static_cast<std::size_t>(best[static_cast<std::size_t>(u)])].src;
      } while (u != v);
    }
    for (int x : path) state[static_cast<std::size_t>(x)] = 2;
  }
  if (cycle.empty()) return best;

  std::vector<bool> in_cycle(static_cast<std::size_t>(nnodes), false);
  for (int v : cycle) in_cycle[static_cast<std::size_t>(v)] = true;

  // Contract the cycle into a fresh node; re-id the survivors densely.
  std::vector<int> new_id(static_cast<std::size_t>(nnodes), -1);
  int next_id = 0;
  for (int v = 0; v < nnodes; ++v)
    if (!in_cycle[static_cast<std::size_t>(v)]) new_id[static_cast<std::size_t>(v)] = next_id++;
  const int super = next_id++;

  std::vector<Arc> contracted;
  contracted.reserve(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = arcs[i];
    const bool s_in = in_cycle[static_cast<std::size_t>(a.src)];
    const bool d_in = in_cycle[static_cast<std::size_t>(a.dst)];
    if (s_in && d_in) continue;
    Arc b;
    b.prev = static_cast<int>(i);
    if (d_in) {
      // Entering the cycle: charge the difference against the cycle arc it displaces.
      const Arc& displaced = arcs[static_cast<std::size_t>(best[static_cast<std::size_t>(a.dst)])];
      b.src = new_id[static_cast<std::size_t>(a.src)];
      b.dst = super;
      b.weight = a.weight - displaced.weight;
    } else if (s_in) {
      b.src = super;
      b.dst = new_id[static_cast<std::size_t>(a.dst)];
      b.weight = a.weight;
    } else {
      b.src = new_id[static_cast<std::size_t>(a.src)];
      b.dst = new_id[static_cast<std::size_t>(a.dst)];
      b.weight = a.weight;
    }
    contracted.push_back(b);
  }

  const std::vector<int> sub = solve(next_id, contracted);

  std::vector<int> result(static_cast<std::size_t>(nnodes), -1);
  for (int v2 = 0; v2 < next_id; ++v2) {
    const int arc2 = sub[static_cast<std::size_t>(v2)];
    if (arc2 < 0) continue;
    const int orig = contracted[static_cast<std::size_t>(arc2)].prev;
    if (v2 == super) {
      // The arc entering the contracted node breaks the cycle at its real head.
      const int entry = arcs[static_cast<std::size_t>(orig)].dst;
      result[static_cast<std::size_t>(entry)] = orig;
      for (int v : cycle)
        if (v != entry)
          result[static_cast<std::size_t>(v)] = best[static_cast<std::size_t>(v)];
    } else {
      result[static_cast<std::size_t>(arcs[static_cast<std::size_t>(orig)].dst)] = orig;
    }
  }
  return result;
}

__int128 ipow128(int base, int exp) {
  __int128 out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

// Virtual-root edges carry the bare root risk while real edges pay the
// penalty, so an arborescence's total weight equals tree_score exactly and
// an edge enters the optimum precisely when its signal exceeds alpha.
// (Charging alpha on the virtual edges too would cancel the penalty
// node-wise and always return a spanning tree.)
WeightedDigraph build_augmented_graph(const RiskTable& table, double alpha) {
  if (alpha < 0.0) throw InvalidArgument("alpha must be >= 0");
  WeightedDigraph g;
  g.p = table.p;
  g.weight = Matrix::Zero(table.p + 1, table.p + 1);
  for (int j = 1; j <= table.p; ++j) {
    g.weight(0, j) = table.root_risk(j - 1);
    for (int k = 1; k <= table.p; ++k) {
      if (k == j) continue;
      g.weight(k, j) = table.edge_risk(j - 1, k - 1) + alpha;
    }
  }
  return g;
}

TreeStructure chu_liu_edmonds(const WeightedDigraph& g) {
  const int p = g.p;
  if (p < 1) throw InvalidArgument("graph has no nodes");
  if (g.weight.rows() != p + 1 || g.weight.cols() != p + 1)
    throw DimensionMismatch("weight matrix must be (p+1) x (p+1)");

  const bool exact_ties = p <= 26;
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(p) * static_cast<std::size_t>(p));
  for (int j = 1; j <= p; ++j) {
    const __int128 scale = exact_ties ? ipow128(p + 1, p - j) : 0;
    for (int k = 0; k <= p; ++k) {
      if (k == j) continue;
      const double w = g.weight(k, j);
      if (!std::isfinite(w))
        throw InvalidArgument("non-finite weight on edge " + std::to_string(k) +
                              "->" + std::to_string(j));
      arcs.push_back(Arc{k, j, PairWeight{w, scale * k}, -1});
    }
  }

  const std::vector<int> chosen = solve(p + 1, arcs);
  TreeStructure out(p);
  for (int j = 1; j <= p; ++j) {
    const Arc& a = arcs[static_cast<std::size_t>(chosen[static_cast<std::size_t>(j)])];
    out.parent[static_cast<std::size_t>(j - 1)] =
        a.src == 0 ? TreeStructure::kNoParent : a.src - 1;
  }
  return out;
}

TreeStructure brute_force_search(const RiskTable& table, double alpha) {
  const int p = table.p;
  if (p > 8) throw TooLarge("brute force capped at p = 8, got " + std::to_string(p));
  if (alpha < 0.0) throw InvalidArgument("alpha must be >= 0");

  // Candidate parents per node in tie-break order: none first, then ascending.
  std::vector<std::vector<int>> choices(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    choices[static_cast<std::size_t>(j)].push_back(TreeStructure::kNoParent);
    for (int k = 0; k < p; ++k)
      if (k != j) choices[static_cast<std::size_t>(j)].push_back(k);
  }

  TreeStructure best;
  double best_score = 0.0;
  bool have_best = false;

  std::vector<int> idx(static_cast<std::size_t>(p), 0);
  TreeStructure cur(p);
  for (;;) {
    for (int j = 0; j < p; ++j)
      cur.parent[static_cast<std::size_t>(j)] =
          choices[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    if (cur.is_valid()) {
      const double score = tree_score(table, cur, alpha);
      if (!have_best || score < best_score) {
        best = cur;
        best_score = score;
        have_best = true;
      }
    }
    // Odometer over choice indices, last node fastest: earlier assignments
    // enumerate in lexicographic parent-vector order.
    int j = p - 1;
    while (j >= 0) {
      if (++idx[static_cast<std::size_t>(j)] <
          static_cast<int>(choices[static_cast<std::size_t>(j)].size()))
        break;
      idx[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return best;
}

}  // namespace comptree
