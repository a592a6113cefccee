#include "comptree/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace comptree {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("failed reading " + path.string());
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out.good()) throw IoError("failed writing " + path.string());
}

json parse_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index r = 0; r < v.size(); ++r) out.push_back(v(r));
  return out;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Vector json_to_vector(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t r = 0; r < j.size(); ++r)
    v(static_cast<Eigen::Index>(r)) = j[r].get<double>();
  return v;
}

Matrix json_to_matrix(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix();
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols)
      throw IoError("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

int name_index(const std::vector<std::string>& names, const std::string& name,
               const fs::path& context) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw IoError("unknown node name '" + name + "' in " + context.string());
}

json parents_to_json(const std::vector<std::string>& names, const TreeStructure& tree) {
  json out = json::array();
  for (int j = 0; j < tree.size(); ++j) {
    const int pj = tree.parent[static_cast<std::size_t>(j)];
    if (pj == TreeStructure::kNoParent) {
      out.push_back(nullptr);
    } else {
      out.push_back(names[static_cast<std::size_t>(pj)]);
    }
  }
  return out;
}

TreeStructure parents_from_json(const json& parents,
                                const std::vector<std::string>& names,
                                const fs::path& context) {
  TreeStructure tree(static_cast<int>(parents.size()));
  for (std::size_t j = 0; j < parents.size(); ++j) {
    if (parents[j].is_null()) continue;
    tree.parent[j] = name_index(names, parents[j].get<std::string>(), context);
  }
  return tree;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_dataset(const fs::path& dir, const std::vector<std::string>& names,
                   const std::vector<CompositionSample>& data) {
  if (names.size() != data.size())
    throw InvalidArgument("one name per node required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());

  json manifest;
  manifest["n"] = data.empty() ? 0 : data[0].n();
  manifest["nodes"] = json::array();
  for (std::size_t j = 0; j < data.size(); ++j) {
    const std::string file = names[j] + ".csv";
    manifest["nodes"].push_back(
        {{"name", names[j]}, {"file", file}, {"dim", data[j].dim()}});

    std::string csv;
    for (Eigen::Index c = 0; c < data[j].dim(); ++c) {
      if (c > 0) csv += ',';
      csv += "part_" + std::to_string(c + 1);
    }
    csv += '\n';
    for (Eigen::Index i = 0; i < data[j].n(); ++i) {
      for (Eigen::Index c = 0; c < data[j].dim(); ++c) {
        if (c > 0) csv += ',';
        csv += format_double(data[j].rows(i, c));
      }
      csv += '\n';
    }
    write_file(dir / file, csv);
  }
  write_file(dir / "manifest.json", dump(manifest));
}

Dataset read_dataset(const fs::path& dir, double tolerance) {
  const json manifest = parse_json(dir / "manifest.json");
  Dataset out;
  try {
    out.manifest.n = manifest.at("n").get<Eigen::Index>();
    for (const auto& node : manifest.at("nodes")) {
      out.manifest.nodes.push_back(ManifestNode{node.at("name").get<std::string>(),
                                                node.at("file").get<std::string>(),
                                                node.at("dim").get<int>()});
    }
  } catch (const json::exception& e) {
    throw IoError("bad manifest in " + dir.string() + ": " + e.what());
  }

  for (std::size_t j = 0; j < out.manifest.nodes.size(); ++j) {
    const ManifestNode& node = out.manifest.nodes[j];
    const fs::path file = dir / node.file;
    const std::string text = read_file(file);

    Matrix rows(out.manifest.n, node.dim);
    std::istringstream lines(text);
    std::string line;
    if (!std::getline(lines, line))
      throw ValidationError("node '" + node.name + "': empty CSV");
    Eigen::Index i = 0;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (i >= out.manifest.n)
        throw ValidationError("node '" + node.name + "': more than " +
                              std::to_string(out.manifest.n) + " rows");
      Eigen::Index c = 0;
      const char* ptr = line.data();
      const char* end = line.data() + line.size();
      while (ptr <= end) {
        const char* field_end = ptr;
        while (field_end < end && *field_end != ',') ++field_end;
        if (c >= node.dim)
          throw ValidationError("node '" + node.name + "' row " +
                                std::to_string(i + 1) + ": too many columns");
        double value = 0.0;
        const auto res = std::from_chars(ptr, field_end, value);
        if (res.ec != std::errc() || res.ptr != field_end)
          throw ValidationError("node '" + node.name + "' row " +
                                std::to_string(i + 1) + ": bad number '" +
                                std::string(ptr, field_end) + "'");
        rows(i, c++) = value;
        if (field_end == end) break;
        ptr = field_end + 1;
      }
      if (c != node.dim)
        throw ValidationError("node '" + node.name + "' row " + std::to_string(i + 1) +
                              ": expected " + std::to_string(node.dim) +
                              " columns, got " + std::to_string(c));
      ++i;
    }
    if (i != out.manifest.n)
      throw ValidationError("node '" + node.name + "': expected " +
                            std::to_string(out.manifest.n) + " rows, got " +
                            std::to_string(i));

    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      try {
        rows.row(r) = validate_composition(rows.row(r).transpose(), tolerance).transpose();
      } catch (const Error& e) {
        throw ValidationError("node '" + node.name + "' row " + std::to_string(r + 1) +
                              ": " + e.what());
      }
    }
    out.names.push_back(node.name);
    out.nodes.push_back(CompositionSample{static_cast<int>(j), std::move(rows)});
  }
  return out;
}

namespace {

json edge_block(const std::vector<std::string>& names, int child, int parent,
                const EdgeParams& p) {
  json block;
  block["child"] = names[static_cast<std::size_t>(child)];
  block["parent"] = names[static_cast<std::size_t>(parent)];
  block["omega0"] = p.omega0;
  block["omega1"] = p.omega1();
  block["eta"] = vector_to_json(p.eta);
  block["M"] = matrix_to_json(p.M);
  return block;
}

json root_block(const std::vector<std::string>& names, int node, const RootParams& p) {
  json block;
  block["node"] = names[static_cast<std::size_t>(node)];
  block["eta"] = vector_to_json(p.eta);
  return block;
}

EdgeParams edge_params_from_json(const json& block) {
  EdgeParams p;
  p.omega0 = block.at("omega0").get<double>();
  p.eta = json_to_vector(block.at("eta"));
  p.M = json_to_matrix(block.at("M"));
  return p;
}

}  // namespace

void write_truth(const fs::path& path, const std::vector<std::string>& names,
                 const GroundTruth& truth) {
  json out;
  out["p"] = truth.tree.size();
  out["node_names"] = names;
  out["parents"] = parents_to_json(names, truth.tree);
  out["edges"] = json::array();
  for (const auto& [child, params] : truth.edge_params)
    out["edges"].push_back(edge_block(
        names, child, truth.tree.parent[static_cast<std::size_t>(child)], params));
  out["roots"] = json::array();
  for (const auto& [node, params] : truth.root_params)
    out["roots"].push_back(root_block(names, node, params));
  write_file(path, dump(out));
}

GroundTruth read_truth(const fs::path& path, std::vector<std::string>* names_out) {
  const json in = parse_json(path);
  GroundTruth truth;
  try {
    const auto names = in.at("node_names").get<std::vector<std::string>>();
    truth.tree = parents_from_json(in.at("parents"), names, path);
    for (const auto& block : in.at("edges")) {
      const int child = name_index(names, block.at("child").get<std::string>(), path);
      truth.edge_params[child] = edge_params_from_json(block);
    }
    for (const auto& block : in.at("roots")) {
      const int node = name_index(names, block.at("node").get<std::string>(), path);
      truth.root_params[node] = RootParams{json_to_vector(block.at("eta"))};
    }
    if (names_out) *names_out = names;
  } catch (const json::exception& e) {
    throw IoError("bad truth file " + path.string() + ": " + e.what());
  }
  return truth;
}

TreeArtifact make_tree_artifact(const std::vector<std::string>& names,
                                const TreeStructure& tree, const RiskTable& table,
                                double alpha) {
  TreeArtifact art;
  art.node_names = names;
  art.tree = tree;
  art.alpha = alpha;
  for (int j = 0; j < tree.size(); ++j) {
    const int pj = tree.parent[static_cast<std::size_t>(j)];
    if (pj == TreeStructure::kNoParent) {
      art.root_params[j] = table.root_params[static_cast<std::size_t>(j)];
      art.root_risk[j] = table.root_risk(j);
    } else {
      art.edge_params[j] = table.edge_params.at({j, pj});
      art.edge_risk[j] = table.edge_risk(j, pj);
    }
  }
  return art;
}

void write_tree_artifact(const fs::path& path, const TreeArtifact& artifact) {
  json out;
  out["p"] = artifact.tree.size();
  out["node_names"] = artifact.node_names;
  out["parents"] = parents_to_json(artifact.node_names, artifact.tree);
  out["alpha"] = artifact.alpha;
  out["edges"] = json::array();
  for (const auto& [child, params] : artifact.edge_params) {
    json block = edge_block(artifact.node_names, child,
                            artifact.tree.parent[static_cast<std::size_t>(child)], params);
    block["edge_risk"] = artifact.edge_risk.at(child);
    out["edges"].push_back(std::move(block));
  }
  out["roots"] = json::array();
  for (const auto& [node, params] : artifact.root_params) {
    json block = root_block(artifact.node_names, node, params);
    block["root_risk"] = artifact.root_risk.at(node);
    out["roots"].push_back(std::move(block));
  }
  write_file(path, dump(out));
}

TreeArtifact read_tree_artifact(const fs::path& path) {
  const json in = parse_json(path);
  TreeArtifact art;
  try {
    art.node_names = in.at("node_names").get<std::vector<std::string>>();
    art.tree = parents_from_json(in.at("parents"), art.node_names, path);
    art.alpha = in.at("alpha").get<double>();
    for (const auto& block : in.at("edges")) {
      const int child =
          name_index(art.node_names, block.at("child").get<std::string>(), path);
      art.edge_params[child] = edge_params_from_json(block);
      art.edge_risk[child] = block.at("edge_risk").get<double>();
    }
    for (const auto& block : in.at("roots")) {
      const int node =
          name_index(art.node_names, block.at("node").get<std::string>(), path);
      art.root_params[node] = RootParams{json_to_vector(block.at("eta"))};
      art.root_risk[node] = block.at("root_risk").get<double>();
    }
  } catch (const json::exception& e) {
    throw IoError("bad tree artifact " + path.string() + ": " + e.what());
  }
  return art;
}

std::pair<std::vector<std::string>, TreeStructure> read_parents_file(const fs::path& path) {
  const json in = parse_json(path);
  try {
    const auto names = in.at("node_names").get<std::vector<std::string>>();
    return {names, parents_from_json(in.at("parents"), names, path)};
  } catch (const json::exception& e) {
    throw IoError("bad tree file " + path.string() + ": " + e.what());
  }
}

void write_cv_report(const fs::path& path, const std::vector<std::string>& names,
                     const CvReport& report) {
  json out;
  out["selected_alpha"] = report.selected_alpha;
  out["alphas"] = report.alphas;
  out["mean_validation_risk"] = vector_to_json(report.mean_validation_risk);
  out["per_fold_risk"] = matrix_to_json(report.per_fold_risk);
  out["final_tree"] = {{"node_names", names},
                       {"parents", parents_to_json(names, report.final_tree)}};
  out["final_edge_risk"] = matrix_to_json(report.final_params.edge_risk);
  out["final_root_risk"] = vector_to_json(report.final_params.root_risk);
  write_file(path, dump(out));
}

void write_metrics_json(const fs::path& path, const RecoveryMetrics& m) {
  json out;
  out["tpr"] = m.tpr;
  out["fdr"] = m.fdr;
  out["shd"] = m.shd;
  out["exact_match"] = m.exact_match;
  write_file(path, dump(out));
}

void write_metrics_csv(const fs::path& path, const RecoveryMetrics& m) {
  std::string csv = "tpr,fdr,shd,exact_match\n";
  csv += format_double(m.tpr);
  csv += ',';
  csv += format_double(m.fdr);
  csv += ',';
  csv += std::to_string(m.shd);
  csv += ',';
  csv += m.exact_match ? "true" : "false";
  csv += '\n';
  write_file(path, csv);
}

}  // namespace comptree
