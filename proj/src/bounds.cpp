#include "comptree/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace comptree {

namespace {

void check_inputs(const BoundInputs& b, bool need_n) {
  if (need_n && b.n < 1) throw InvalidArgument("n must be >= 1");
  if (b.p < 1) throw InvalidArgument("p must be >= 1");
  if (!(b.signal_gap > 0.0)) throw InvalidArgument("signal gap must be > 0");
  if (!(b.prediction_floor > 0.0 && b.prediction_floor < 1.0))
    throw InvalidArgument("prediction floor must lie in (0, 1)");
  if (!(b.diameter > 0.0)) throw InvalidArgument("diameter must be > 0");
  if (b.max_node_dim < 2) throw InvalidArgument("max node dimension must be >= 2");
  if (b.max_param_dim < 1) throw InvalidArgument("max parameter dimension must be >= 1");
}

double covering_radius_log(const BoundInputs& b) {
  // L = d_max * sqrt(D_max) / epsilon_0
  const double l = static_cast<double>(b.max_node_dim) *
                   std::sqrt(static_cast<double>(b.max_param_dim)) /
                   b.prediction_floor;
  return std::log(24.0 * b.diameter * l / b.signal_gap);
}

}  // namespace

void derive_dims(BoundInputs& inputs, const std::vector<int>& dims) {
  if (dims.empty()) throw InvalidArgument("dims must be non-empty");
  for (int d : dims)
    if (d < 2) throw InvalidArgument("node dimensions must be >= 2");
  int d_max = 0;
  long long param_max = 0;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    d_max = std::max(d_max, dims[j]);
    for (std::size_t k = 0; k < dims.size(); ++k) {
      if (dims.size() > 1 && j == k) continue;
      const long long dj = dims[j], dk = dims[k];
      param_max = std::max(param_max, 1 + dj + dj * dk);
    }
  }
  inputs.max_node_dim = d_max;
  inputs.max_param_dim = param_max;
}

double recovery_bound_log(const BoundInputs& b) {
  check_inputs(b, true);
  const double pd = static_cast<double>(b.p);
  const double log_prefactor = std::log(4.0 * (pd * pd + pd));
  const double log_cover =
      static_cast<double>(b.max_param_dim) * covering_radius_log(b);
  const double log_eps = std::log(1.0 / b.prediction_floor);
  const double exponent = -static_cast<double>(b.n) * b.signal_gap * b.signal_gap /
                          (32.0 * log_eps * log_eps);
  return log_prefactor + log_cover + exponent;
}

double recovery_bound(const BoundInputs& b) {
  const double lg = recovery_bound_log(b);
  if (lg >= 0.0) return 1.0;
  return std::exp(lg);
}

long long sample_complexity(const BoundInputs& b, double delta) {
  check_inputs(b, false);
  if (!(delta > 0.0 && delta <= 1.0))
    throw InvalidArgument("delta must lie in (0, 1]");
  const double pd = static_cast<double>(b.p);
  const double log_eps = std::log(1.0 / b.prediction_floor);
  const double rhs =
      (32.0 * log_eps * log_eps / (b.signal_gap * b.signal_gap)) *
      (static_cast<double>(b.max_param_dim) * covering_radius_log(b) +
       std::log(4.0 * (pd * pd + pd) / delta));
  const double n = std::ceil(rhs);
  if (!(n >= 1.0)) return 1;
  return static_cast<long long>(n);
}

}  // namespace comptree
