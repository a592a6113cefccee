#include "comptree/synthetic.hpp"

#include <algorithm>
#include <string>

#include "comptree/rng.hpp"

namespace comptree {

namespace {

constexpr std::uint64_t kTopologyTag = 0x70B0ULL;
constexpr std::uint64_t kParamsTag = 0x9A4AULL;
constexpr std::uint64_t kDataTag = 0xDA7AULL;

constexpr double kEtaDirichlet = 5.0;
constexpr double kColumnDirichlet = 0.25;

void check_spec(const GeneratorSpec& spec) {
  if (spec.p < 1) throw InvalidArgument("p must be >= 1");
  if (static_cast<int>(spec.dims.size()) != spec.p)
    throw InvalidArgument("dims must list one dimension per node");
  for (int d : spec.dims)
    if (d < 2) throw InvalidArgument("node dimensions must be >= 2");
  if (spec.topology == Topology::kMultiRoot &&
      (spec.num_roots < 1 || spec.num_roots > spec.p))
    throw InvalidArgument("multi-root needs 1 <= roots <= p");
  if (spec.n < 1) throw InvalidArgument("n must be >= 1");
  if (!(spec.concentration > 0.0)) throw InvalidArgument("concentration must be > 0");
  if (!(spec.zero_inflation >= 0.0 && spec.zero_inflation < 1.0))
    throw InvalidArgument("zero_inflation must lie in [0, 1)");
  if (!(spec.omega1_min > 0.0 && spec.omega1_max < 1.0 &&
        spec.omega1_min <= spec.omega1_max))
    throw InvalidArgument("omega1 range must lie within (0, 1)");
}

TreeStructure build_topology(const GeneratorSpec& spec, RandomStream& rng) {
  TreeStructure tree(spec.p);
  switch (spec.topology) {
    case Topology::kChain:
      for (int j = 1; j < spec.p; ++j)
        tree.parent[static_cast<std::size_t>(j)] = j - 1;
      break;
    case Topology::kStar:
      for (int j = 1; j < spec.p; ++j)
        tree.parent[static_cast<std::size_t>(j)] = 0;
      break;
    case Topology::kMultiRoot:
      for (int j = spec.num_roots; j < spec.p; ++j)
        tree.parent[static_cast<std::size_t>(j)] =
            static_cast<int>(rng.below(static_cast<std::uint64_t>(j)));
      break;
    case Topology::kRandomTree:
      for (int j = 1; j < spec.p; ++j)
        tree.parent[static_cast<std::size_t>(j)] =
            static_cast<int>(rng.below(static_cast<std::uint64_t>(j)));
      break;
  }
  return tree;
}

bool columns_distinct(const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double spread = m.row(r).maxCoeff() - m.row(r).minCoeff();
    if (spread >= kColumnMargin) return true;
  }
  return false;
}

std::vector<int> topological_order(const TreeStructure& tree) {
  const int p = tree.size();
  std::vector<int> depth(static_cast<std::size_t>(p), -1);
  auto resolve = [&](int j) {
    std::vector<int> chain;
    while (j != TreeStructure::kNoParent && depth[static_cast<std::size_t>(j)] < 0) {
      chain.push_back(j);
      j = tree.parent[static_cast<std::size_t>(j)];
    }
    int d = j == TreeStructure::kNoParent ? -1 : depth[static_cast<std::size_t>(j)];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      depth[static_cast<std::size_t>(*it)] = ++d;
  };
  for (int j = 0; j < p; ++j) resolve(j);
  std::vector<int> order(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return depth[static_cast<std::size_t>(a)] < depth[static_cast<std::size_t>(b)];
  });
  return order;
}

}  // namespace

GroundTruth sample_ground_truth(const GeneratorSpec& spec) {
  check_spec(spec);
  RandomStream topo_rng(mix_seed({spec.seed, kTopologyTag}));
  GroundTruth truth;
  truth.tree = build_topology(spec, topo_rng);

  for (int j = 0; j < spec.p; ++j) {
    RandomStream rng(mix_seed({spec.seed, kParamsTag, static_cast<std::uint64_t>(j)}));
    const auto dj = static_cast<Eigen::Index>(spec.dims[static_cast<std::size_t>(j)]);
    const int pj = truth.tree.parent[static_cast<std::size_t>(j)];
    if (pj == TreeStructure::kNoParent) {
      truth.root_params[j] = RootParams{rng.dirichlet_symmetric(kEtaDirichlet, dj)};
    } else {
      const auto dk = static_cast<Eigen::Index>(spec.dims[static_cast<std::size_t>(pj)]);
      EdgeParams params;
      params.omega0 = 1.0 - rng.uniform(spec.omega1_min, spec.omega1_max);
      params.eta = rng.dirichlet_symmetric(kEtaDirichlet, dj);
      params.M.resize(dj, dk);
      do {
        for (Eigen::Index c = 0; c < dk; ++c)
          params.M.col(c) = rng.dirichlet_symmetric(kColumnDirichlet, dj);
      } while (!columns_distinct(params.M));
      truth.edge_params[j] = std::move(params);
    }
  }
  return truth;
}

std::vector<CompositionSample> sample_data(const GroundTruth& truth,
                                           const GeneratorSpec& spec) {
  check_spec(spec);
  if (truth.tree.size() != spec.p)
    throw DimensionMismatch("ground truth and spec disagree on p");

  std::vector<Matrix> rows(static_cast<std::size_t>(spec.p));
  for (int j = 0; j < spec.p; ++j)
    rows[static_cast<std::size_t>(j)].resize(
        spec.n, static_cast<Eigen::Index>(spec.dims[static_cast<std::size_t>(j)]));

  for (int j : topological_order(truth.tree)) {
    RandomStream rng(mix_seed({spec.seed, kDataTag, static_cast<std::uint64_t>(j)}));
    const int pj = truth.tree.parent[static_cast<std::size_t>(j)];
    const auto dj = static_cast<Eigen::Index>(spec.dims[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < spec.n; ++i) {
      Vector row(dj);
      for (int attempt = 0; attempt < 1000; ++attempt) {
        Vector mean =
            pj == TreeStructure::kNoParent
                ? truth.root_params.at(j).eta
                : predict(truth.edge_params.at(j),
                          rows[static_cast<std::size_t>(pj)].row(i).transpose());
        row = rng.dirichlet(spec.concentration * mean);
        if (spec.zero_inflation > 0.0) {
          std::vector<bool> zeroed(static_cast<std::size_t>(dj));
          bool all_zero = true;
          do {
            all_zero = true;
            for (Eigen::Index r = 0; r < dj; ++r) {
              zeroed[static_cast<std::size_t>(r)] = rng.uniform() < spec.zero_inflation;
              if (!zeroed[static_cast<std::size_t>(r)]) all_zero = false;
            }
          } while (all_zero);
          for (Eigen::Index r = 0; r < dj; ++r)
            if (zeroed[static_cast<std::size_t>(r)]) row(r) = 0.0;
        }
        if (row.sum() > 0.0) break;
      }
      row /= row.sum();
      rows[static_cast<std::size_t>(j)].row(i) =
          validate_composition(row).transpose();
    }
  }

  std::vector<CompositionSample> out;
  out.reserve(static_cast<std::size_t>(spec.p));
  for (int j = 0; j < spec.p; ++j)
    out.push_back(CompositionSample{j, std::move(rows[static_cast<std::size_t>(j)])});
  return out;
}

}  // namespace comptree
