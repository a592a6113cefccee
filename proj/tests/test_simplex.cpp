#include <cmath>

#include <comptree/simplex.hpp>

#include "doctest.h"
#include "test_util.hpp"

using namespace comptree;

TEST_CASE("validate_composition accepts and repairs near-simplex vectors") {
  Vector v(2);
  v << 0.5, 0.5;
  const Composition c = validate_composition(v);
  CHECK(testutil::bitwise_equal(c, v));

  Vector w(2);
  w << 0.3, 0.7000000001;
  const Composition cw = validate_composition(w, 1e-9);
  CHECK(std::abs(cw.sum() - 1.0) <= 1e-12);
  CHECK(cw(0) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("validate_composition rejects bad input") {
  Vector v(2);
  v << 0.5, 0.6;
  CHECK_THROWS_AS(validate_composition(v, 1e-9), SumOutOfTolerance);

  Vector neg(2);
  neg << -0.1, 1.1;
  CHECK_THROWS_AS(validate_composition(neg), NegativeEntry);

  Vector one(1);
  one << 1.0;
  CHECK_THROWS_AS(validate_composition(one), DimensionMismatch);
}

TEST_CASE("validate_composition clamps tiny magnitudes to exact zero") {
  Vector v(3);
  v << 1e-13, -1e-13, 1.0;
  const Composition c = validate_composition(v);
  CHECK(c(0) == 0.0);
  CHECK(c(1) == 0.0);
  CHECK(c(2) == 1.0);
}

TEST_CASE("validate_composition is idempotent") {
  RandomStream rng(1234);
  for (int rep = 0; rep < 500; ++rep) {
    const auto d = static_cast<Eigen::Index>(2 + rng.below(14));
    Vector v = testutil::random_composition(rng, d, 0.3);
    if (rng.uniform() < 0.3) {
      // move one part to the clamp boundary, keeping the sum intact
      const double tiny = 1e-12 * rng.uniform(0.5, 1.5);
      Eigen::Index top = 0;
      v.maxCoeff(&top);
      if (top != 0) {
        v(top) += v(0) - tiny;
        v(0) = tiny;
      }
    }
    // rounding noise within tolerance
    v *= 1.0 + 2e-10 * (rng.uniform() - 0.5);
    const Composition once = validate_composition(v);
    const Composition twice = validate_composition(once);
    CHECK(testutil::bitwise_equal(once, twice));
  }
}

TEST_CASE("kl_divergence on worked pairs") {
  Vector x(2), same(2);
  x << 0.5, 0.5;
  same << 0.5, 0.5;
  CHECK(kl_divergence(x, same) == 0.0);

  Vector point(2), half(2);
  point << 1.0, 0.0;
  half << 0.5, 0.5;
  CHECK(kl_divergence(point, half) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  Vector skew(2);
  skew << 0.25, 0.75;
  CHECK(kl_divergence(x, skew) ==
        doctest::Approx(0.1438410362258904).epsilon(1e-13));
}

TEST_CASE("kl_divergence rejects mismatched or non-positive predictions") {
  Vector x(2), y(3);
  x << 0.5, 0.5;
  y << 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(kl_divergence(x, y), DimensionMismatch);

  Vector bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(kl_divergence(x, bad), NonPositivePrediction);
}

TEST_CASE("zero parts of x contribute exactly zero") {
  Vector x(3);
  x << 0.5, 0.5, 0.0;
  Vector h1(3), h2(3);
  h1 << 0.3, 0.6, 0.1;
  h2 << 0.3, 0.6, 1e-9;
  CHECK(kl_divergence(x, h1) == kl_divergence(x, h2));
}

TEST_CASE("kl_divergence is non-negative and bounded by log(1/floor)") {
  RandomStream rng(99);
  const double floor_value = 1e-6;
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = static_cast<Eigen::Index>(2 + rng.below(19));
    const Vector x = testutil::random_composition(rng, d, 0.4);
    const Vector xhat =
        floor_simplex(testutil::random_composition(rng, d), floor_value);
    const double kl = kl_divergence(x, xhat);
    CHECK(kl >= 0.0);
    CHECK(kl <= std::log(1.0 / floor_value) + 1e-9);
  }
}

TEST_CASE("floor_simplex fixes violations and leaves interior points alone") {
  Vector v(2);
  v << 0.4, 0.6;
  CHECK(testutil::bitwise_equal(floor_simplex(v, 1e-6), v));

  Vector corner(2);
  corner << 0.0, 1.0;
  const Vector w = floor_simplex(corner, 1e-6);
  CHECK(w(0) == 1e-6);
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.minCoeff() >= 1e-6);

  RandomStream rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const auto d = static_cast<Eigen::Index>(2 + rng.below(29));
    const Vector f = floor_simplex(testutil::random_composition(rng, d, 0.5), 1e-4);
    CHECK(f.minCoeff() >= 1e-4);
    CHECK(std::abs(f.sum() - 1.0) <= 1e-12);
  }

  CHECK_THROWS_AS(floor_simplex(v, 0.6), InvalidArgument);
}
