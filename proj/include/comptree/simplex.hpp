#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "comptree/errors.hpp"

namespace comptree {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point on the probability simplex: non-negative parts summing to one.
/// Exact zeros are allowed and common in the data this library targets.
using Composition = Eigen::VectorXd;

/// Entries below this magnitude are treated as exact zeros at ingestion.
inline constexpr double kZeroClamp = 1e-12;

/// Default absolute tolerance on |sum - 1| at ingestion.
inline constexpr double kSumTolerance = 1e-9;

/// Repairs rounding noise in a raw proportion vector: clamps sub-threshold
/// entries to exact zero and renormalizes. Idempotent. Throws NegativeEntry
/// for entries below -kZeroClamp and SumOutOfTolerance when |sum - 1|
/// exceeds `tolerance`.
Composition validate_composition(const Vector& v,
                                 double tolerance = kSumTolerance);

/// Projects a simplex vector onto {w : w_r >= floor_value, sum w = 1} by
/// fixing violating parts at the floor and rescaling the remaining mass.
/// Returns the input unchanged (bit for bit) when no part is below the floor.
Vector floor_simplex(const Vector& v, double floor_value);

/// KL divergence D(x || xhat) = sum_r x_r log(x_r / xhat_r). Parts with
/// x_r = 0 contribute exactly zero; the term is skipped, never evaluated.
/// Finite whenever min_r xhat_r > 0, bounded by log(1/min_r xhat_r).
template <typename DX, typename DY>
double kl_divergence(const Eigen::MatrixBase<DX>& x,
                     const Eigen::MatrixBase<DY>& xhat) {
  if (x.size() != xhat.size())
    throw DimensionMismatch("kl_divergence: size " + std::to_string(x.size()) +
                            " vs " + std::to_string(xhat.size()));
  double acc = 0.0;
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    const double xh = xhat(r);
    if (xh <= 0.0)
      throw NonPositivePrediction("kl_divergence: xhat[" + std::to_string(r) +
                                  "] = " + std::to_string(xh));
    const double xr = x(r);
    if (xr > 0.0) acc += xr * std::log(xr / xh);
  }
  return acc;
}

/// n observed compositions for one node, one per row.
struct CompositionSample {
  int node_index = 0;
  Matrix rows;  // n x d

  Eigen::Index n() const { return rows.rows(); }
  Eigen::Index dim() const { return rows.cols(); }
};

/// Validates every row (see validate_composition) and wraps the matrix.
CompositionSample make_sample(int node_index, Matrix raw,
                              double tolerance = kSumTolerance);

}  // namespace comptree
