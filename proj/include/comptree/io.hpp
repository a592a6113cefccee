#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "comptree/cross_validation.hpp"
#include "comptree/metrics.hpp"
#include "comptree/risk_table.hpp"
#include "comptree/synthetic.hpp"

namespace comptree {

/// On-disk layout of a dataset directory: manifest.json naming one CSV per
/// node (header part_1..part_d, one row per observation, full-precision
/// decimal floats, '.' separator, '\n' line endings).
struct ManifestNode {
  std::string name;
  std::string file;  // relative to the manifest
  int dim = 0;
};

struct DatasetManifest {
  Eigen::Index n = 0;
  std::vector<ManifestNode> nodes;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<std::string> names;
  std::vector<CompositionSample> nodes;
};

/// Fitted-forest artifact: the structure, the penalty it was solved at, and
/// the parameter block behind every selected edge and root.
struct TreeArtifact {
  std::vector<std::string> node_names;
  TreeStructure tree;
  double alpha = 0.0;
  std::map<int, EdgeParams> edge_params;
  std::map<int, RootParams> root_params;
  std::map<int, double> edge_risk;  // keyed by child, selected edges only
  std::map<int, double> root_risk;  // keyed by root node
};

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

void write_dataset(const std::filesystem::path& dir,
                   const std::vector<std::string>& names,
                   const std::vector<CompositionSample>& data);
Dataset read_dataset(const std::filesystem::path& dir,
                     double tolerance = kSumTolerance);

void write_truth(const std::filesystem::path& path,
                 const std::vector<std::string>& names, const GroundTruth& truth);
GroundTruth read_truth(const std::filesystem::path& path,
                       std::vector<std::string>* names = nullptr);

TreeArtifact make_tree_artifact(const std::vector<std::string>& names,
                                const TreeStructure& tree, const RiskTable& table,
                                double alpha);
void write_tree_artifact(const std::filesystem::path& path, const TreeArtifact& artifact);
TreeArtifact read_tree_artifact(const std::filesystem::path& path);

/// Reads just {node_names, parents} from a truth or tree artifact file.
std::pair<std::vector<std::string>, TreeStructure> read_parents_file(
    const std::filesystem::path& path);

void write_cv_report(const std::filesystem::path& path,
                     const std::vector<std::string>& names, const CvReport& report);

void write_metrics_json(const std::filesystem::path& path, const RecoveryMetrics& m);
void write_metrics_csv(const std::filesystem::path& path, const RecoveryMetrics& m);

}  // namespace comptree
