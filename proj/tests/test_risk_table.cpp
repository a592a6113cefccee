#include <cmath>

#include <comptree/arborescence.hpp>
#include <comptree/risk_table.hpp>
#include <comptree/synthetic.hpp>

#include "doctest.h"
#include "test_util.hpp"

using namespace comptree;

namespace {

EmConfig fast_config(std::uint64_t seed) {
  EmConfig cfg;
  cfg.restarts = 2;
  cfg.seed = seed;
  return cfg;
}

std::vector<CompositionSample> two_node_directed(std::uint64_t seed, Eigen::Index n) {
  GeneratorSpec spec;
  spec.p = 2;
  spec.dims = {4, 4};
  spec.topology = Topology::kChain;
  spec.n = n;
  spec.concentration = 30.0;
  spec.omega1_min = 0.7;
  spec.omega1_max = 0.9;
  spec.seed = seed;
  return sample_data(sample_ground_truth(spec), spec);
}

}  // namespace

TEST_CASE("a single node gives one root risk and no edges") {
  RandomStream rng(51);
  const std::vector<CompositionSample> data{testutil::random_sample(rng, 0, 30, 3)};
  const RiskTable table = build_risk_table(data, fast_config(1));
  CHECK(table.p == 1);
  CHECK(table.edge_params.empty());
  CHECK(table.root_risk(0) >= 0.0);
  CHECK(table.root_params.size() == 1);
}

TEST_CASE("a generated edge beats the root fit for the child") {
  const auto data = two_node_directed(7, 600);
  const RiskTable table = build_risk_table(data, fast_config(2), 2);
  CHECK(table.edge_risk(1, 0) < table.root_risk(1));
}

TEST_CASE("every pairwise risk nests below the root risk") {
  GeneratorSpec spec;
  spec.p = 3;
  spec.dims = {3, 4, 5};
  spec.topology = Topology::kRandomTree;
  spec.n = 80;
  spec.zero_inflation = 0.4;
  spec.concentration = 20.0;
  spec.seed = 99;
  const auto data = sample_data(sample_ground_truth(spec), spec);
  const RiskTable table = build_risk_table(data, fast_config(3), 2);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (j == k) continue;
      CHECK(table.edge_risk(j, k) <= table.root_risk(j) + 1e-8);
      CHECK(table.edge_risk(j, k) >= 0.0);
      CHECK(std::isfinite(table.edge_risk(j, k)));
    }
  }
}

TEST_CASE("independent nodes show no signal beyond the permutation null") {
  GeneratorSpec spec;
  spec.p = 2;
  spec.dims = {4, 4};
  spec.topology = Topology::kMultiRoot;
  spec.num_roots = 2;  // two disconnected roots: truly independent nodes
  spec.n = 400;
  spec.concentration = 25.0;
  spec.seed = 1234;
  const auto data = sample_data(sample_ground_truth(spec), spec);
  const EmConfig cfg = fast_config(5);
  const RiskTable table = build_risk_table(data, cfg, 2);
  const double observed = table.root_risk(1) - table.edge_risk(1, 0);

  // Permutation oracle: refit with parent rows cyclically shifted, which
  // preserves both marginals while destroying any pairing.
  std::vector<double> null_deltas;
  for (int shift = 1; shift <= 12; ++shift) {
    Matrix rows(data[0].n(), data[0].dim());
    const auto offset = static_cast<Eigen::Index>(shift * 31 % data[0].n());
    for (Eigen::Index i = 0; i < data[0].n(); ++i)
      rows.row(i) = data[0].rows.row((i + offset) % data[0].n());
    const CompositionSample shuffled{0, std::move(rows)};
    const double risk = em_fit(data[1], shuffled, cfg).risk;
    null_deltas.push_back(table.root_risk(1) - risk);
  }
  double mean = 0.0;
  for (double d : null_deltas) mean += d;
  mean /= static_cast<double>(null_deltas.size());
  double var = 0.0;
  for (double d : null_deltas) var += (d - mean) * (d - mean);
  const double sd = std::sqrt(var / static_cast<double>(null_deltas.size() - 1));
  CHECK(std::abs(observed - mean) <= 3.0 * sd + 1e-12);
}

TEST_CASE("edge_signals is the root-minus-edge reduction") {
  RiskTable t;
  t.p = 2;
  t.edge_risk = Matrix::Zero(2, 2);
  t.edge_risk(0, 1) = 1.0;
  t.edge_risk(1, 0) = 0.4;
  t.root_risk = Vector(2);
  t.root_risk << 1.0, 1.0;
  const EdgeSignalTable s = edge_signals(t);
  CHECK(s.delta(0, 1) == 0.0);
  CHECK(s.delta(1, 0) == 0.6);
}

TEST_CASE("the fitted direction carries the larger signal") {
  const auto data = two_node_directed(1003, 800);
  const RiskTable table = build_risk_table(data, fast_config(6), 2);
  const EdgeSignalTable s = edge_signals(table);
  CHECK(s.delta(1, 0) > s.delta(0, 1));
  CHECK(s.delta(1, 0) >= -1e-8);
  CHECK(s.delta(0, 1) >= -1e-8);
}

TEST_CASE("tree_score evaluates the penalized decomposable score") {
  RiskTable t;
  t.p = 3;
  t.edge_risk = Matrix::Zero(3, 3);
  t.edge_risk << 0.0, 0.2, 0.3, 0.4, 0.0, 0.5, 0.6, 0.7, 0.0;
  t.root_risk = Vector(3);
  t.root_risk << 1.0, 1.1, 1.2;

  CHECK(tree_score(t, TreeStructure(3), 0.7) == doctest::Approx(3.3));  // no edges

  TreeStructure chain(3);
  chain.parent = {TreeStructure::kNoParent, 0, 1};
  const double base = tree_score(t, chain, 0.0);
  CHECK(base == doctest::Approx(1.0 + 0.4 + 0.7));
  CHECK(tree_score(t, chain, 0.25) - base == doctest::Approx(0.25 * 2));

  // independent per-node accumulation
  double per_node = 0.0;
  for (int j = 0; j < 3; ++j) {
    const int pj = chain.parent[static_cast<std::size_t>(j)];
    per_node += pj == TreeStructure::kNoParent ? t.root_risk(j)
                                               : t.edge_risk(j, pj) + 0.25;
  }
  CHECK(tree_score(t, chain, 0.25) == doctest::Approx(per_node).epsilon(1e-15));

  TreeStructure cyclic(3);
  cyclic.parent = {1, 0, TreeStructure::kNoParent};
  CHECK_THROWS_AS(tree_score(t, cyclic, 0.0), InvalidTree);
  TreeStructure self(3);
  self.parent = {0, TreeStructure::kNoParent, TreeStructure::kNoParent};
  CHECK_THROWS_AS(tree_score(t, self, 0.0), InvalidTree);
}

TEST_CASE("signal separation diagnostic splits selected from unselected") {
  RiskTable t;
  t.p = 2;
  t.edge_risk = Matrix::Zero(2, 2);
  t.edge_risk(0, 1) = 0.9;
  t.edge_risk(1, 0) = 0.4;
  t.root_risk = Vector(2);
  t.root_risk << 1.0, 1.0;
  TreeStructure tree(2);
  tree.parent = {TreeStructure::kNoParent, 0};
  const SignalSeparation sep = signal_separation(t, tree);
  CHECK(sep.min_selected == doctest::Approx(0.6));
  CHECK(sep.max_unselected == doctest::Approx(0.1));
}

TEST_CASE("the table is identical for any worker count") {
  GeneratorSpec spec;
  spec.p = 3;
  spec.dims = {3, 3, 3};
  spec.topology = Topology::kChain;
  spec.n = 60;
  spec.concentration = 20.0;
  spec.seed = 31;
  const auto data = sample_data(sample_ground_truth(spec), spec);
  const RiskTable one = build_risk_table(data, fast_config(9), 1);
  const RiskTable four = build_risk_table(data, fast_config(9), 4);
  CHECK(testutil::bitwise_equal(one.edge_risk, four.edge_risk));
  CHECK(testutil::bitwise_equal(one.root_risk, four.root_risk));
  for (const auto& [key, params] : one.edge_params) {
    const EdgeParams& other = four.edge_params.at(key);
    CHECK(params.omega0 == other.omega0);
    CHECK(testutil::bitwise_equal(params.M, other.M));
  }
}

TEST_CASE("mismatched sample counts are rejected") {
  RandomStream rng(52);
  const std::vector<CompositionSample> data{testutil::random_sample(rng, 0, 30, 3),
                                            testutil::random_sample(rng, 1, 29, 3)};
  CHECK_THROWS_AS(build_risk_table(data, fast_config(1)), InconsistentSampleCount);
  CHECK_THROWS_AS(build_risk_table({}, fast_config(1)), EmptyData);
}
