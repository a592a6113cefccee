#pragma once

#include <vector>

#include "comptree/errors.hpp"

namespace comptree {

/// Inputs to the finite-sample recovery bound. signal_gap separates the
/// weakest true-edge signal from the strongest false-edge signal;
/// prediction_floor is the guaranteed lower bound on predicted parts;
/// diameter bounds the per-pair parameter space; max_param_dim is the
/// largest per-pair parameter count, max over pairs of 1 + d_j + d_j * d_k.
struct BoundInputs {
  long long n = 1;
  int p = 1;
  double signal_gap = 0.1;        // gamma > 0
  double prediction_floor = 1e-6; // epsilon_0 in (0, 1)
  double diameter = 1.0;          // R > 0
  int max_node_dim = 2;           // d_max >= 2
  long long max_param_dim = 7;    // D_max >= 1
};

/// Fills max_node_dim and max_param_dim from per-node part counts.
void derive_dims(BoundInputs& inputs, const std::vector<int>& dims);

/// Natural log of the unclamped bound; evaluated term by term so the
/// clamped value never overflows.
double recovery_bound_log(const BoundInputs& inputs);

/// Probability bound on missing the true structure, clamped to [0, 1].
double recovery_bound(const BoundInputs& inputs);

/// Smallest n making the bound at most delta (at least 1). The n field of
/// the inputs is ignored.
long long sample_complexity(const BoundInputs& inputs, double delta);

}  // namespace comptree
