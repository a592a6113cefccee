#include "comptree/simplex.hpp"

#include <string>

namespace comptree {

Composition validate_composition(const Vector& v, double tolerance) {
  if (v.size() < 2)
    throw DimensionMismatch("composition needs at least 2 parts, got " +
                            std::to_string(v.size()));
  for (Eigen::Index r = 0; r < v.size(); ++r) {
    if (v(r) < -kZeroClamp)
      throw NegativeEntry("negative part at index " + std::to_string(r) +
                          ": " + std::to_string(v(r)));
  }
  Vector w = v;
  for (Eigen::Index r = 0; r < w.size(); ++r) {
    if (std::abs(w(r)) < kZeroClamp) w(r) = 0.0;
  }
  double s = w.sum();
  if (std::abs(s - 1.0) > tolerance)
    throw SumOutOfTolerance("parts sum to " + std::to_string(s) +
                            ", outside tolerance " + std::to_string(tolerance));

  // Renormalize, re-clamping anything the division pushes below the zero
  // threshold. The nonzero count strictly decreases on each extra pass, and
  // a pass that neither divides nor clamps leaves the vector untouched, so
  // repeated application is a no-op.
  for (Eigen::Index pass = 0; pass <= w.size(); ++pass) {
    if (std::abs(s - 1.0) > 1e-12) {
      if (s <= 0.0) throw SumOutOfTolerance("all parts vanished");
      w /= s;
    }
    bool clamped = false;
    for (Eigen::Index r = 0; r < w.size(); ++r) {
      if (w(r) != 0.0 && w(r) < kZeroClamp) {
        w(r) = 0.0;
        clamped = true;
      }
    }
    s = w.sum();
    if (!clamped && std::abs(s - 1.0) <= 1e-12) break;
  }
  return w;
}

Vector floor_simplex(const Vector& v, double floor_value) {
  if (floor_value <= 0.0) return v;
  const Eigen::Index d = v.size();
  if (floor_value * static_cast<double>(d) >= 1.0)
    throw InvalidArgument("floor " + std::to_string(floor_value) +
                          " infeasible for dimension " + std::to_string(d));
  bool any_below = false;
  for (Eigen::Index r = 0; r < d; ++r) {
    if (v(r) < floor_value) {
      any_below = true;
      break;
    }
  }
  if (!any_below) return v;

  Vector w = v;
  std::vector<bool> fixed(static_cast<std::size_t>(d), false);
  for (Eigen::Index pass = 0; pass < d; ++pass) {
    bool changed = false;
    Eigen::Index n_fixed = 0;
    for (Eigen::Index r = 0; r < d; ++r) {
      if (!fixed[static_cast<std::size_t>(r)] && w(r) < floor_value) {
        fixed[static_cast<std::size_t>(r)] = true;
        changed = true;
      }
      if (fixed[static_cast<std::size_t>(r)]) ++n_fixed;
    }
    if (!changed) break;
    const double target = 1.0 - floor_value * static_cast<double>(n_fixed);
    double free_sum = 0.0;
    for (Eigen::Index r = 0; r < d; ++r) {
      if (!fixed[static_cast<std::size_t>(r)]) free_sum += w(r);
    }
    const double scale = free_sum > 0.0 ? target / free_sum : 0.0;
    for (Eigen::Index r = 0; r < d; ++r) {
      if (fixed[static_cast<std::size_t>(r)]) {
        w(r) = floor_value;
      } else {
        w(r) *= scale;
      }
    }
  }
  return w;
}

CompositionSample make_sample(int node_index, Matrix raw, double tolerance) {
  if (raw.cols() < 2)
    throw DimensionMismatch("sample needs dimension >= 2, got " +
                            std::to_string(raw.cols()));
  if (raw.rows() < 1) throw EmptyData("sample has no rows");
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    raw.row(i) = validate_composition(raw.row(i).transpose(), tolerance)
                     .transpose();
  }
  return CompositionSample{node_index, std::move(raw)};
}

}  // namespace comptree
