#include "comptree/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "comptree/rng.hpp"

namespace comptree {

namespace {

constexpr std::uint64_t kFoldShuffleTag = 0xF01D5EEDULL;
constexpr std::uint64_t kFoldEmTag = 0xCF01DULL;

std::vector<CompositionSample> take_rows(const std::vector<CompositionSample>& data,
                                         const std::vector<Eigen::Index>& rows) {
  std::vector<CompositionSample> out;
  out.reserve(data.size());
  for (const auto& s : data) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), s.dim());
    for (std::size_t i = 0; i < rows.size(); ++i)
      m.row(static_cast<Eigen::Index>(i)) = s.rows.row(rows[i]);
    out.push_back(CompositionSample{s.node_index, std::move(m)});
  }
  return out;
}

}  // namespace

std::vector<int> fold_assignment(Eigen::Index n, int k, std::uint64_t fold_seed) {
  if (k < 2) throw InvalidArgument("need at least 2 folds");
  if (n < k) throw TooFewSamples("n = " + std::to_string(n) + " rows for k = " +
                                 std::to_string(k) + " folds");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  RandomStream rng(mix_seed({fold_seed, kFoldShuffleTag}));
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  std::vector<int> fold(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    fold[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        static_cast<int>(i % k);
  return fold;
}

double validation_risk(const TreeStructure& tree, const RiskTable& train_table,
                       const std::vector<CompositionSample>& val_data) {
  if (tree.size() != train_table.p ||
      static_cast<int>(val_data.size()) != train_table.p)
    throw DimensionMismatch("tree, table, and validation data disagree on p");
  if (val_data.empty() || val_data[0].n() == 0) throw EmptyData("empty validation set");
  double acc = 0.0;
  for (int j = 0; j < train_table.p; ++j) {
    const int pj = tree.parent[static_cast<std::size_t>(j)];
    if (pj == TreeStructure::kNoParent) {
      acc += sample_risk(train_table.root_params[static_cast<std::size_t>(j)],
                         val_data[static_cast<std::size_t>(j)]);
    } else {
      const auto it = train_table.edge_params.find({j, pj});
      if (it == train_table.edge_params.end())
        throw MissingParams("no fitted parameters for edge " + std::to_string(pj) +
                            "->" + std::to_string(j));
      acc += sample_risk(it->second, val_data[static_cast<std::size_t>(j)],
                         val_data[static_cast<std::size_t>(pj)]);
    }
  }
  return acc;
}

std::vector<double> default_alpha_grid(const RiskTable& full_table) {
  double delta_max = 0.0;
  const EdgeSignalTable signals = edge_signals(full_table);
  for (int j = 0; j < full_table.p; ++j)
    for (int k = 0; k < full_table.p; ++k)
      if (j != k) delta_max = std::max(delta_max, signals.delta(j, k));
  delta_max = std::max(delta_max, 1e-12);

  std::vector<double> grid;
  grid.push_back(0.0);
  const double lo = std::log(1e-4 * delta_max);
  const double hi = std::log(2.0 * delta_max);
  constexpr int kPoints = 20;
  for (int i = 0; i < kPoints; ++i)
    grid.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / (kPoints - 1)));
  return grid;
}

CvReport cross_validate(const std::vector<CompositionSample>& data,
                        const CvConfig& cv, const EmConfig& em, int threads) {
  if (data.empty()) throw EmptyData("no nodes");
  const Eigen::Index n = data[0].n();
  const int k = cv.leave_one_out ? static_cast<int>(n) : cv.k_folds;
  if (k < 2 || n < k)
    throw TooFewSamples("n = " + std::to_string(n) + " rows for k = " +
                        std::to_string(k) + " folds");

  RiskTable full_table = build_risk_table(data, em, threads);

  std::vector<double> alphas = cv.alpha_grid;
  if (alphas.empty()) {
    alphas = default_alpha_grid(full_table);
  } else {
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (alphas[i] < 0.0) throw InvalidArgument("alpha grid values must be >= 0");
      if (i > 0 && alphas[i] <= alphas[i - 1])
        throw InvalidArgument("alpha grid must be strictly increasing");
    }
  }

  const std::vector<int> fold = fold_assignment(n, k, cv.fold_seed);
  const auto na = static_cast<Eigen::Index>(alphas.size());

  CvReport report;
  report.alphas = alphas;
  report.per_fold_risk = Matrix::Zero(na, k);

  for (int t = 0; t < k; ++t) {
    std::vector<Eigen::Index> train_rows, val_rows;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (fold[static_cast<std::size_t>(i)] == t) {
        val_rows.push_back(i);
      } else {
        train_rows.push_back(i);
      }
    }
    const auto train_data = take_rows(data, train_rows);
    const auto val_data = take_rows(data, val_rows);

    EmConfig em_fold = em;
    em_fold.seed = mix_seed({em.seed, kFoldEmTag, static_cast<std::uint64_t>(t)});
    const RiskTable train_table = build_risk_table(train_data, em_fold, threads);

    for (Eigen::Index ai = 0; ai < na; ++ai) {
      const TreeStructure tree = chu_liu_edmonds(
          build_augmented_graph(train_table, alphas[static_cast<std::size_t>(ai)]));
      report.per_fold_risk(ai, t) = validation_risk(tree, train_table, val_data);
    }
  }

  report.mean_validation_risk = report.per_fold_risk.rowwise().mean();
  Eigen::Index best = 0;
  for (Eigen::Index ai = 1; ai < na; ++ai) {
    if (report.mean_validation_risk(ai) <= report.mean_validation_risk(best))
      best = ai;  // ties favor the largest alpha
  }
  report.selected_alpha = alphas[static_cast<std::size_t>(best)];
  report.final_tree =
      chu_liu_edmonds(build_augmented_graph(full_table, report.selected_alpha));
  report.final_params = std::move(full_table);
  return report;
}

}  // namespace comptree
