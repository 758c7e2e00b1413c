#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "handover/rng.hpp"

using namespace handover;

TEST_SUITE("rng") {
  TEST_CASE("uniform stays in [0, 1) and is seed deterministic") {
    Rng a(42), b(42), c(43);
    bool diverged = false;
    for (int i = 0; i < 10000; ++i) {
      const double x = a.uniform();
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      CHECK(b.uniform() == x);
      if (c.uniform() != x) diverged = true;
    }
    CHECK(diverged);
  }

  TEST_CASE("uniform range respects bounds") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(-3.5, 12.25);
      CHECK(x >= -3.5);
      CHECK(x < 12.25);
    }
  }

  TEST_CASE("index covers [0, n) and hits every value") {
    Rng rng(1);
    std::vector<int> seen(5, 0);
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t k = rng.index(5);
      REQUIRE(k < 5);
      seen[k] += 1;
    }
    for (int count : seen) CHECK(count > 0);
    CHECK(rng.index(1) == 0);
  }

  TEST_CASE("bernoulli extremes never surprise") {
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
      CHECK_FALSE(rng.bernoulli(0.0));
      CHECK(rng.bernoulli(1.0));
    }
  }

  TEST_CASE("gaussian is finite with sane spread") {
    Rng rng(11);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double x = rng.gaussian();
      REQUIRE(std::isfinite(x));
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.05);
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rng.gaussian(100.0, 0.0) == 100.0);
  }

  TEST_CASE("shuffle permutes deterministically") {
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[i] = i;
    std::vector<int> w = v, original = v;
    Rng a(5), b(5);
    a.shuffle(v);
    b.shuffle(w);
    CHECK(v == w);
    CHECK(v != original);
    std::sort(v.begin(), v.end());
    CHECK(v == original);
  }
}
