#include "comptree/edge_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "comptree/rng.hpp"

namespace comptree {

namespace {

void check_config(const EmConfig& cfg, Eigen::Index d_child) {
  if (cfg.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(cfg.rel_tol > 0.0)) throw InvalidArgument("rel_tol must be > 0");
  if (!(cfg.omega_min > 0.0 && cfg.omega_min < 0.5))
    throw InvalidArgument("omega_min must lie in (0, 0.5)");
  if (!(cfg.eta_min > 0.0)) throw InvalidArgument("eta_min must be > 0");
  if (cfg.eta_min * static_cast<double>(d_child) >= 1.0)
    throw InvalidArgument("eta_min * d_child must be < 1");
  if (cfg.restarts < 1) throw InvalidArgument("restarts must be >= 1");
}

void check_pair(const CompositionSample& child, const CompositionSample& parent) {
  if (child.n() == 0 || parent.n() == 0) throw EmptyData("empty sample");
  if (child.n() != parent.n())
    throw DimensionMismatch("child has " + std::to_string(child.n()) +
                            " rows, parent " + std::to_string(parent.n()));
  if (child.dim() < 2 || parent.dim() < 2)
    throw DimensionMismatch("node dimensions must be >= 2");
}

void check_params(const EdgeParams& params, const CompositionSample& child,
                  const CompositionSample& parent) {
  if (params.child_dim() != child.dim())
    throw DimensionMismatch("eta has dimension " +
                            std::to_string(params.child_dim()) + ", child " +
                            std::to_string(child.dim()));
  if (params.M.rows() != child.dim() || params.M.cols() != parent.dim())
    throw DimensionMismatch("M is " + std::to_string(params.M.rows()) + "x" +
                            std::to_string(params.M.cols()) + ", expected " +
                            std::to_string(child.dim()) + "x" +
                            std::to_string(parent.dim()));
}

// E+M update given the current predictions. The accumulators fold the
// part-level allocation pi into the products, so cells with x = 0 or with a
// vanishing parent-driven component contribute exactly zero weight.
std::pair<EdgeParams, bool> m_step(const EdgeParams& cur, const Matrix& x,
                                   const Matrix& y, const Matrix& xhat,
                                   const EmConfig& cfg) {
  const Matrix q = x.cwiseQuotient(xhat);  // x * (gamma0 + gamma1) per cell
  const Vector base = cur.omega0 * cur.eta;
  // a(i,r) = x(i,r) * gamma0(i,r)
  const Matrix a = q.array().rowwise() * base.transpose().array();
  const double x_total = x.sum();
  // m_num(r,c) = sum_i x(i,r) * gamma1(i,r) * pi_i(r,c)
  const Matrix m_num =
      cur.omega1() * cur.M.cwiseProduct(q.transpose() * y);

  EdgeParams next;
  bool flagged = false;

  const Vector eta_acc = a.colwise().sum().transpose();
  const double base_total = eta_acc.sum();
  double w0 = base_total / x_total;
  if (w0 < cfg.omega_min) {
    w0 = cfg.omega_min;
    flagged = true;
  } else if (w0 > 1.0 - cfg.omega_min) {
    w0 = 1.0 - cfg.omega_min;
    flagged = true;
  }
  next.omega0 = w0;

  Vector eta = eta_acc / base_total;
  if ((eta.array() < cfg.eta_min).any()) flagged = true;
  next.eta = floor_simplex(eta, cfg.eta_min);

  next.M.resize(cur.M.rows(), cur.M.cols());
  for (Eigen::Index c = 0; c < m_num.cols(); ++c) {
    const double col_sum = m_num.col(c).sum();
    if (col_sum > 0.0) {
      next.M.col(c) = m_num.col(c) / col_sum;
    } else {
      // Parent part c carries no weight in this sample; the update is
      // indeterminate and any stochastic column leaves the risk unchanged.
      next.M.col(c) = cur.M.col(c);
    }
  }
  return {std::move(next), flagged};
}

EdgeParams jittered_init(const EdgeParams& degenerate, std::uint64_t stream_seed) {
  RandomStream rng(stream_seed);
  EdgeParams p = degenerate;
  for (Eigen::Index c = 0; c < p.M.cols(); ++c) {
    for (Eigen::Index r = 0; r < p.M.rows(); ++r) {
      p.M(r, c) *= std::exp(0.75 * rng.normal());
    }
    p.M.col(c) /= p.M.col(c).sum();
  }
  return p;
}

}  // namespace

Vector predict(const EdgeParams& params, const Eigen::Ref<const Vector>& x_parent) {
  if (x_parent.size() != params.M.cols())
    throw DimensionMismatch("parent composition has " +
                            std::to_string(x_parent.size()) +
                            " parts, M expects " +
                            std::to_string(params.M.cols()));
  return params.omega0 * params.eta + params.omega1() * (params.M * x_parent);
}

Matrix predict_all(const EdgeParams& params, const Matrix& parent_rows) {
  if (parent_rows.cols() != params.M.cols())
    throw DimensionMismatch("parent rows have " +
                            std::to_string(parent_rows.cols()) +
                            " parts, M expects " +
                            std::to_string(params.M.cols()));
  Matrix out = params.omega1() * (parent_rows * params.M.transpose());
  out.array().rowwise() += (params.omega0 * params.eta).transpose().array();
  return out;
}

namespace detail {

double mean_kl(const Matrix& x, const Matrix& xhat) {
  if (x.rows() != xhat.rows() || x.cols() != xhat.cols())
    throw DimensionMismatch("mean_kl: shape mismatch");
  if (xhat.minCoeff() <= 0.0)
    throw NonPositivePrediction("prediction has a non-positive part");
  const auto xa = x.array();
  const double total = (xa > 0.0).select(xa * (xa / xhat.array()).log(), 0.0).sum();
  return total / static_cast<double>(x.rows());
}

Responsibilities em_responsibilities(const EdgeParams& params,
                                     const CompositionSample& child,
                                     const CompositionSample& parent) {
  check_pair(child, parent);
  check_params(params, child, parent);
  const Eigen::Index n = child.n();
  const Eigen::Index dj = child.dim();
  const Eigen::Index dk = parent.dim();
  const Matrix driven = parent.rows * params.M.transpose();  // (M y_i)_r
  Responsibilities out;
  out.gamma0.resize(n, dj);
  out.gamma1.resize(n, dj);
  out.pi.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Matrix pi_i(dj, dk);
    for (Eigen::Index r = 0; r < dj; ++r) {
      const double mx = driven(i, r);
      const double xh = params.omega0 * params.eta(r) + params.omega1() * mx;
      out.gamma0(i, r) = params.omega0 * params.eta(r) / xh;
      out.gamma1(i, r) = mx > 0.0 ? params.omega1() * mx / xh : 0.0;
      if (mx > 0.0) {
        for (Eigen::Index c = 0; c < dk; ++c)
          pi_i(r, c) = parent.rows(i, c) * params.M(r, c) / mx;
      } else {
        pi_i.row(r).setConstant(1.0 / static_cast<double>(dk));
      }
    }
    out.pi.push_back(std::move(pi_i));
  }
  return out;
}

}  // namespace detail

double sample_risk(const EdgeParams& params, const CompositionSample& child,
                   const CompositionSample& parent) {
  check_pair(child, parent);
  check_params(params, child, parent);
  return detail::mean_kl(child.rows, predict_all(params, parent.rows));
}

double sample_risk(const RootParams& params, const CompositionSample& node) {
  if (node.n() == 0) throw EmptyData("empty sample");
  if (params.eta.size() != node.dim())
    throw DimensionMismatch("eta has " + std::to_string(params.eta.size()) +
                            " parts, node " + std::to_string(node.dim()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < node.n(); ++i)
    acc += kl_divergence(node.rows.row(i).transpose(), params.eta);
  return acc / static_cast<double>(node.n());
}

RootParams fit_root(const CompositionSample& node, double eta_min) {
  if (node.n() == 0) throw EmptyData("empty sample");
  if (!(eta_min > 0.0) || eta_min * static_cast<double>(node.dim()) >= 1.0)
    throw InvalidArgument("eta_min infeasible for dimension " +
                          std::to_string(node.dim()));
  const Vector mean = node.rows.colwise().mean();
  return RootParams{floor_simplex(mean, eta_min)};
}

EdgeParams em_degenerate_init(const CompositionSample& child,
                              Eigen::Index parent_dim, double eta_min) {
  const Vector mean = child.rows.colwise().mean();
  EdgeParams p;
  p.omega0 = 0.5;
  p.eta = floor_simplex(mean, eta_min);
  p.M = p.eta.replicate(1, parent_dim);
  return p;
}

std::pair<EdgeParams, bool> em_step(const EdgeParams& params,
                                    const CompositionSample& child,
                                    const CompositionSample& parent,
                                    const EmConfig& config) {
  check_pair(child, parent);
  check_params(params, child, parent);
  check_config(config, child.dim());
  const Matrix xhat = predict_all(params, parent.rows);
  return m_step(params, child.rows, parent.rows, xhat, config);
}

EmFitResult em_fit(const CompositionSample& child,
                   const CompositionSample& parent, const EmConfig& config) {
  check_pair(child, parent);
  check_config(config, child.dim());

  const EdgeParams degenerate =
      em_degenerate_init(child, parent.dim(), config.eta_min);

  EmFitResult best;
  bool have_best = false;
  for (int restart = 1; restart <= config.restarts; ++restart) {
    EdgeParams params =
        restart == 1
            ? degenerate
            : jittered_init(degenerate,
                            mix_seed({config.seed,
                                      static_cast<std::uint64_t>(child.node_index),
                                      static_cast<std::uint64_t>(parent.node_index),
                                      static_cast<std::uint64_t>(restart)}));

    EmFitResult run;
    Matrix xhat = predict_all(params, parent.rows);
    double risk = detail::mean_kl(child.rows, xhat);
    run.risk_trace.push_back(risk);
    run.floor_steps.push_back(0);
    run.params = params;
    run.risk = risk;

    while (static_cast<int>(run.risk_trace.size()) - 1 < config.max_iters) {
      auto [next, flagged] = m_step(params, child.rows, parent.rows, xhat, config);
      params = std::move(next);
      xhat = predict_all(params, parent.rows);
      const double new_risk = detail::mean_kl(child.rows, xhat);
      run.risk_trace.push_back(new_risk);
      run.floor_steps.push_back(flagged ? 1 : 0);
      if (new_risk < run.risk) {
        run.risk = new_risk;
        run.params = params;
      }
      const double rel = std::abs(new_risk - risk) / std::max(risk, 1e-12);
      risk = new_risk;
      if (rel < config.rel_tol) {
        run.converged = true;
        break;
      }
    }
    run.iterations = static_cast<int>(run.risk_trace.size()) - 1;

    if (!have_best || run.risk < best.risk) {
      best = std::move(run);
      have_best = true;
    }
  }
  return best;
}

}  // namespace comptree
