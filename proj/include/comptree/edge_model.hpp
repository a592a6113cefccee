#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "comptree/simplex.hpp"

namespace comptree {

/// Parameters of the pairwise conditional-mean model for a candidate edge
/// parent -> child:
///
///   xhat = omega0 * eta + omega1 * (M * x_parent)
///
/// eta is the child's baseline composition and M is column-stochastic (each
/// column is a composition of the child's dimension), so xhat always lies on
/// the child simplex. With eta floored at eta_min and omega0 at omega_min,
/// every predicted part is at least omega_min * eta_min.
struct EdgeParams {
  double omega0 = 0.5;
  Vector eta;  // d_child
  Matrix M;    // d_child x d_parent, columns on the child simplex

  double omega1() const { return 1.0 - omega0; }
  Eigen::Index child_dim() const { return eta.size(); }
  Eigen::Index parent_dim() const { return M.cols(); }
};

/// Parameters of a root node: just the marginal composition.
struct RootParams {
  Vector eta;
};

struct EmConfig {
  int max_iters = 500;
  double rel_tol = 1e-8;
  double omega_min = 1e-4;
  double eta_min = 1e-6;
  int restarts = 5;
  std::uint64_t seed = 1;
};

struct EmFitResult {
  EdgeParams params;
  double risk = 0.0;
  int iterations = 0;
  bool converged = false;
  /// risk_trace[0] is the risk at initialization; one entry per E+M step.
  std::vector<double> risk_trace;
  /// Aligned with risk_trace; nonzero where the eta floor or omega clamp
  /// engaged on that step (the only steps allowed to raise the risk).
  std::vector<std::uint8_t> floor_steps;
};

Vector predict(const EdgeParams& params, const Eigen::Ref<const Vector>& x_parent);

/// Predictions for all rows of a parent sample, one per row.
Matrix predict_all(const EdgeParams& params, const Matrix& parent_rows);

/// Mean KL divergence between observed rows and their predictions.
double sample_risk(const EdgeParams& params, const CompositionSample& child,
                   const CompositionSample& parent);
double sample_risk(const RootParams& params, const CompositionSample& node);

/// Closed-form root fit: the sample mean, floored at eta_min.
RootParams fit_root(const CompositionSample& node, double eta_min);

/// The degenerate starting point: omega0 = 1/2, eta = floored child mean,
/// M = eta * 1^T. Its predictions equal eta for every parent value, so its
/// risk equals the root-fit risk.
EdgeParams em_degenerate_init(const CompositionSample& child,
                              Eigen::Index parent_dim, double eta_min);

/// One E+M update with the eta floor and omega clamp applied afterwards.
/// Returns the new parameters and whether a floor or clamp engaged.
std::pair<EdgeParams, bool> em_step(const EdgeParams& params,
                                    const CompositionSample& child,
                                    const CompositionSample& parent,
                                    const EmConfig& config);

/// Fits the edge model by EM over `config.restarts` starts. Restart 1 is the
/// degenerate start, which guarantees the final risk never exceeds the root
/// risk; later restarts jitter the columns of M multiplicatively from a
/// stream seeded by (seed, child index, parent index, restart). Each restart
/// keeps its best iterate; the restart with the smallest risk wins.
EmFitResult em_fit(const CompositionSample& child,
                   const CompositionSample& parent, const EmConfig& config);

namespace detail {

/// E-step quantities, exposed for verification: gamma0/gamma1 are the n x d
/// component responsibilities, pi[i] the d_child x d_parent part allocation
/// for sample i (rows sum to 1; uniform where the parent-driven part is 0).
struct Responsibilities {
  Matrix gamma0;
  Matrix gamma1;
  std::vector<Matrix> pi;
};

Responsibilities em_responsibilities(const EdgeParams& params,
                                     const CompositionSample& child,
                                     const CompositionSample& parent);

/// Mean of per-row KL divergences over two equally shaped matrices.
double mean_kl(const Matrix& x, const Matrix& xhat);

}  // namespace detail

}  // namespace comptree
