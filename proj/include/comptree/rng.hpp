#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace comptree {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Folds an ordered list of values into one stream seed. Used to derive
/// independent per-(pair, restart) and per-node streams from a global seed.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6C62272E07BB0142ULL;
  for (std::uint64_t v : parts) h = splitmix64(h ^ v);
  return h;
}

/// Deterministic random stream. Distributions are implemented here rather
/// than taken from <random> so that identical seeds give identical draws on
/// every standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % bound;
  }

  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925287 * u2);
  }

  /// Marsaglia-Tsang, with the usual shape boost for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  Eigen::VectorXd dirichlet(const Eigen::VectorXd& alpha) {
    Eigen::VectorXd g(alpha.size());
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (Eigen::Index r = 0; r < alpha.size(); ++r) g[r] = gamma(alpha[r]);
      const double total = g.sum();
      if (total > 0.0) return g / total;
    }
    // All gamma draws underflowed; put the mass on the largest shape.
    Eigen::Index argmax = 0;
    alpha.maxCoeff(&argmax);
    g.setZero();
    g[argmax] = 1.0;
    return g;
  }

  Eigen::VectorXd dirichlet_symmetric(double alpha, Eigen::Index d) {
    return dirichlet(Eigen::VectorXd::Constant(d, alpha));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace comptree
