// comptree: learn directed tree/forest structure over compositional nodes.
//
// Subcommands: simulate (synthetic benchmark data), fit (risk table +
// arborescence search, fixed penalty or cross-validated), evaluate
// (recovery metrics against a reference tree), bound (finite-sample
// recovery bound calculator).
//
// Exit codes: 0 ok, 2 bad flags, 3 I/O failure, 4 data validation failure,
// 5 node-name mismatch.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "comptree/bounds.hpp"
#include "comptree/cross_validation.hpp"
#include "comptree/io.hpp"
#include "comptree/metrics.hpp"
#include "comptree/synthetic.hpp"

namespace fs = std::filesystem;
using namespace comptree;

namespace {

std::vector<int> parse_dims(const std::string& spec, int p) {
  std::vector<int> dims;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string field =
        spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      dims.push_back(std::stoi(field));
    } catch (const std::exception&) {
      throw InvalidArgument("bad dimension '" + field + "' in --dims");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (p > 0 && dims.size() == 1) dims.assign(static_cast<std::size_t>(p), dims[0]);
  if (p > 0 && static_cast<int>(dims.size()) != p)
    throw InvalidArgument("--dims must give 1 or p values");
  return dims;
}

std::vector<std::string> default_names(int p) {
  std::vector<std::string> names;
  for (int j = 1; j <= p; ++j) names.push_back("node_" + std::to_string(j));
  return names;
}

struct SimulateOptions {
  std::string structure = "chain";
  int p = 0;
  std::string dims = "5";
  long long n = 0;
  double concentration = 50.0;
  double zero_inflation = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_simulate(const SimulateOptions& opt) {
  GeneratorSpec spec;
  spec.p = opt.p;
  spec.n = opt.n;
  spec.concentration = opt.concentration;
  spec.zero_inflation = opt.zero_inflation;
  spec.seed = opt.seed;
  spec.dims = parse_dims(opt.dims, opt.p);
  if (opt.structure == "chain") {
    spec.topology = Topology::kChain;
  } else if (opt.structure == "star") {
    spec.topology = Topology::kStar;
  } else if (opt.structure == "random") {
    spec.topology = Topology::kRandomTree;
  } else if (opt.structure.rfind("multi-root=", 0) == 0) {
    spec.topology = Topology::kMultiRoot;
    try {
      spec.num_roots = std::stoi(opt.structure.substr(11));
    } catch (const std::exception&) {
      throw InvalidArgument("bad root count in --structure " + opt.structure);
    }
  } else {
    throw InvalidArgument("unknown structure '" + opt.structure + "'");
  }

  const GroundTruth truth = sample_ground_truth(spec);
  const auto data = sample_data(truth, spec);
  const auto names = default_names(spec.p);

  const fs::path dir(opt.out);
  write_dataset(dir, names, data);
  write_truth(dir / "truth.json", names, truth);
  std::cout << "wrote " << (dir / "manifest.json").string() << " (" << spec.p
            << " nodes, " << spec.n << " rows) and truth.json\n";
  return 0;
}

struct FitOptions {
  std::string data;
  double alpha = -1.0;
  bool have_alpha = false;
  std::string cv;
  std::string alpha_grid;
  std::uint64_t seed = 1;
  std::string out;
  std::string cv_report;
  int threads = 0;
};

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = spec.find(',', pos);
    const std::string field =
        spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      grid.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw InvalidArgument("bad value '" + field + "' in --alpha-grid");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return grid;
}

void print_tree(const std::vector<std::string>& names, const TreeStructure& tree,
                const RiskTable& table) {
  for (int j = 0; j < tree.size(); ++j) {
    const int pj = tree.parent[static_cast<std::size_t>(j)];
    if (pj == TreeStructure::kNoParent) {
      std::cout << "  " << names[static_cast<std::size_t>(j)] << ": root\n";
    } else {
      std::cout << "  " << names[static_cast<std::size_t>(pj)] << " -> "
                << names[static_cast<std::size_t>(j)] << "\n";
    }
  }
  const SignalSeparation sep = signal_separation(table, tree);
  if (tree.edge_count() > 0 && tree.edge_count() < tree.size() * (tree.size() - 1)) {
    std::cout << "signal separation: weakest selected "
              << std::max(sep.min_selected, 0.0) << ", strongest unselected "
              << std::max(sep.max_unselected, 0.0) << "\n";
  }
}

int cmd_fit(const FitOptions& opt) {
  if (opt.have_alpha == !opt.cv.empty())
    throw InvalidArgument("exactly one of --alpha and --cv is required");

  const Dataset dataset = read_dataset(opt.data);
  const fs::path out_path(opt.out);

  EmConfig em;
  em.seed = opt.seed;

  if (opt.have_alpha) {
    if (opt.alpha < 0.0) throw InvalidArgument("--alpha must be >= 0");
    const RiskTable table = build_risk_table(dataset.nodes, em, opt.threads);
    const TreeStructure tree =
        chu_liu_edmonds(build_augmented_graph(table, opt.alpha));
    write_tree_artifact(out_path,
                        make_tree_artifact(dataset.names, tree, table, opt.alpha));
    std::cout << "fitted forest at alpha = " << opt.alpha << ":\n";
    print_tree(dataset.names, tree, table);
    std::cout << "wrote " << out_path.string() << "\n";
    return 0;
  }

  CvConfig cv;
  cv.fold_seed = opt.seed;
  if (opt.cv == "loo") {
    cv.leave_one_out = true;
  } else {
    try {
      cv.k_folds = std::stoi(opt.cv);
    } catch (const std::exception&) {
      throw InvalidArgument("--cv expects a fold count or 'loo'");
    }
    if (cv.k_folds < 2) throw InvalidArgument("--cv needs at least 2 folds");
  }
  if (!opt.alpha_grid.empty()) cv.alpha_grid = parse_grid(opt.alpha_grid);

  const CvReport report = cross_validate(dataset.nodes, cv, em, opt.threads);
  write_tree_artifact(out_path, make_tree_artifact(dataset.names, report.final_tree,
                                                   report.final_params,
                                                   report.selected_alpha));
  const fs::path report_path = opt.cv_report.empty()
                                   ? out_path.parent_path() / "cv_report.json"
                                   : fs::path(opt.cv_report);
  write_cv_report(report_path, dataset.names, report);
  std::cout << "cross-validation selected alpha = " << report.selected_alpha << ":\n";
  print_tree(dataset.names, report.final_tree, report.final_params);
  std::cout << "wrote " << out_path.string() << " and " << report_path.string() << "\n";
  return 0;
}

struct EvaluateOptions {
  std::string estimated;
  std::string truth;
  std::string out;
};

int cmd_evaluate(const EvaluateOptions& opt) {
  const auto [est_names, est_tree] = read_parents_file(opt.estimated);
  const auto [truth_names, truth_tree] = read_parents_file(opt.truth);

  if (est_names.size() != truth_names.size())
    throw NameMismatch("estimated and truth trees have different node counts");
  // Reorder the estimate into the truth's node order.
  std::vector<int> remap(est_names.size(), -1);
  for (std::size_t j = 0; j < truth_names.size(); ++j) {
    bool found = false;
    for (std::size_t i = 0; i < est_names.size(); ++i) {
      if (est_names[i] == truth_names[j]) {
        remap[i] = static_cast<int>(j);
        found = true;
        break;
      }
    }
    if (!found)
      throw NameMismatch("node '" + truth_names[j] + "' missing from estimate");
  }
  TreeStructure aligned(truth_tree.size());
  for (int i = 0; i < est_tree.size(); ++i) {
    const int pi = est_tree.parent[static_cast<std::size_t>(i)];
    aligned.parent[static_cast<std::size_t>(remap[static_cast<std::size_t>(i)])] =
        pi == TreeStructure::kNoParent ? TreeStructure::kNoParent
                                       : remap[static_cast<std::size_t>(pi)];
  }

  const RecoveryMetrics m = compare_trees(aligned, truth_tree);
  const fs::path json_path(opt.out);
  fs::path csv_path = json_path;
  csv_path.replace_extension(".csv");
  write_metrics_json(json_path, m);
  write_metrics_csv(csv_path, m);
  std::cout << "tpr " << m.tpr << ", fdr " << m.fdr << ", shd " << m.shd
            << ", exact_match " << (m.exact_match ? "true" : "false") << "\n";
  return 0;
}

struct BoundOptions {
  long long n = 0;
  int p = 0;
  double gamma = 0.0;
  double epsilon0 = 0.0;
  double diameter = 0.0;
  std::string dims;
  double delta = -1.0;
};

int cmd_bound(const BoundOptions& opt) {
  BoundInputs inputs;
  inputs.n = opt.n;
  inputs.p = opt.p;
  inputs.signal_gap = opt.gamma;
  inputs.prediction_floor = opt.epsilon0;
  inputs.diameter = opt.diameter;
  derive_dims(inputs, parse_dims(opt.dims, opt.p));

  std::cout << "recovery_bound " << format_double(recovery_bound(inputs)) << "\n";
  if (opt.delta > 0.0) {
    std::cout << "sample_complexity " << sample_complexity(inputs, opt.delta) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"directed tree structure learning over compositional nodes"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic dataset");
  simulate->add_option("--structure", sim.structure,
                       "chain | star | multi-root=R | random");
  simulate->add_option("--p", sim.p, "number of nodes")->required();
  simulate->add_option("--dims", sim.dims, "per-node part counts: D or D1,..,Dp");
  simulate->add_option("--n", sim.n, "number of rows")->required();
  simulate->add_option("--concentration", sim.concentration,
                       "Dirichlet concentration around the conditional mean");
  simulate->add_option("--zero-inflation", sim.zero_inflation,
                       "per-part zeroing probability in [0, 1)");
  simulate->add_option("--seed", sim.seed, "generator seed");
  simulate->add_option("--out", sim.out, "output directory")->required();

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "learn a forest from a dataset");
  fit_cmd->add_option("--data", fit.data, "dataset directory (manifest.json)")
      ->required();
  auto* alpha_opt = fit_cmd->add_option("--alpha", fit.alpha, "fixed penalty");
  fit_cmd->add_option("--cv", fit.cv, "fold count or 'loo'");
  fit_cmd->add_option("--alpha-grid", fit.alpha_grid,
                      "comma-separated ascending penalties for --cv");
  fit_cmd->add_option("--seed", fit.seed, "EM and fold seed");
  fit_cmd->add_option("--out", fit.out, "tree artifact path")->required();
  fit_cmd->add_option("--cv-report", fit.cv_report,
                      "cv report path (default: cv_report.json beside --out)");
  fit_cmd->add_option("--threads", fit.threads, "worker threads (0 = all)");

  EvaluateOptions eval;
  CLI::App* evaluate = app.add_subcommand("evaluate", "score a fitted tree");
  evaluate->add_option("--estimated", eval.estimated, "fitted tree artifact")
      ->required();
  evaluate->add_option("--truth", eval.truth, "reference tree or truth file")
      ->required();
  evaluate->add_option("--out", eval.out, "metrics JSON path")->required();

  BoundOptions bound;
  CLI::App* bound_cmd = app.add_subcommand("bound", "finite-sample recovery bound");
  bound_cmd->add_option("--n", bound.n, "sample size")->required();
  bound_cmd->add_option("--p", bound.p, "number of nodes")->required();
  bound_cmd->add_option("--gamma", bound.gamma, "signal gap")->required();
  bound_cmd->add_option("--epsilon0", bound.epsilon0, "prediction floor")->required();
  bound_cmd->add_option("--diameter", bound.diameter, "parameter-space diameter")
      ->required();
  bound_cmd->add_option("--dims", bound.dims, "part counts: D or D1,..,Dp")->required();
  bound_cmd->add_option("--delta", bound.delta, "also print n making the bound <= delta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  fit.have_alpha = alpha_opt->count() > 0;

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (evaluate->parsed()) return cmd_evaluate(eval);
    if (bound_cmd->parsed()) return cmd_bound(bound);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NameMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
