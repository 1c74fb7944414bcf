#include <doctest.h>

#include <cmath>
#include <random>

#include "mcda/capacity.hpp"
#include "mcda/errors.hpp"
#include "support.hpp"

using namespace mcda;

TEST_CASE("pair index follows lexicographic order") {
  CHECK(MobiusCapacity2Add::pair_index(4, 0, 1) == 4);
  CHECK(MobiusCapacity2Add::pair_index(4, 0, 3) == 6);
  CHECK(MobiusCapacity2Add::pair_index(4, 1, 2) == 7);
  CHECK(MobiusCapacity2Add::pair_index(4, 2, 3) == 9);
  CHECK(MobiusCapacity2Add::coefficient_count(10) == 55);
  std::size_t expected = 10;
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = i + 1; j < 10; ++j) CHECK(MobiusCapacity2Add::pair_index(10, i, j) == expected++);
  }
}

TEST_CASE("evaluation vectors reject values outside the unit interval") {
  CHECK_THROWS_AS(EvaluationVector({0.2, 1.5}), InvalidArgument);
  CHECK_THROWS_AS(EvaluationVector({-0.1}), InvalidArgument);
  CHECK_NOTHROW(EvaluationVector({0.0, 1.0}));
}

TEST_CASE("capacity from Mobius sums the subsets") {
  MobiusCapacity2Add m({0.3, 0.4, 0.5}, {0.1, -0.2, -0.1});
  CHECK(capacity_from_mobius(m, 0b000) == doctest::Approx(0.0));
  CHECK(capacity_from_mobius(m, 0b011) == doctest::Approx(0.8));
  CHECK(capacity_from_mobius(m, 0b101) == doctest::Approx(0.6));
  CHECK(capacity_from_mobius(m, 0b111) == doctest::Approx(1.0));
  CHECK_THROWS_AS(capacity_from_mobius(m, 0b1000), InvalidArgument);
}

TEST_CASE("validate flags normalization and monotonicity") {
  MobiusCapacity2Add ok({0.3, 0.4, 0.5}, {0.1, -0.2, -0.1});
  CHECK(validate(ok).ok());

  MobiusCapacity2Add unnormalized({0.3, 0.4, 0.5}, {0.1, -0.2, 0.0});
  const auto r1 = validate(unnormalized);
  REQUIRE_FALSE(r1.ok());
  CHECK(r1.violations.front().constraint == "normalization");

  // criterion 0: 0.1 - 0.2 - 0.05 < 0
  MobiusCapacity2Add nonmonotone({0.1, 0.6, 0.55}, {-0.2, -0.05, 0.0});
  const auto r2 = validate(nonmonotone);
  REQUIRE_FALSE(r2.ok());
  bool found = false;
  for (const auto& v : r2.violations) {
    if (v.constraint == "monotonicity" && v.criterion == 0u) {
      found = true;
      CHECK(v.residual == doctest::Approx(-0.15));
    }
  }
  CHECK(found);
}

TEST_CASE("closed-form monotonicity agrees with brute force over all subsets") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> sym(-0.4, 0.6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 5;
    std::vector<double> s(n), p(n * (n - 1) / 2);
    for (auto& v : s) v = sym(rng);
    for (auto& v : p) v = sym(rng) / 2.0;
    double total = 0.0;
    for (double v : s) total += v;
    for (double v : p) total += v;
    s[0] += 1.0 - total;  // keep normalization so only monotonicity is in question
    MobiusCapacity2Add m(s, p);
    bool brute = true;
    for (CriteriaMask a = 0; a <= all_criteria(n); ++a) {
      for (std::size_t i = 0; i < n; ++i) {
        if (a & criterion_bit(i)) continue;
        if (capacity_from_mobius(m, a | criterion_bit(i)) < capacity_from_mobius(m, a) - 1e-12) brute = false;
      }
    }
    CHECK(validate(m).ok() == brute);
  }
}

TEST_CASE("Choquet forms agree on random capacities") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto m = testsupport::random_capacity(rng, n);
    REQUIRE(validate(m).ok());
    const EvaluationVector x(testsupport::random_evaluations(rng, n));
    const double fast = choquet_2additive(m, x);
    CHECK(std::abs(fast - choquet_sorted(m, x)) <= 1e-12);
    CHECK(std::abs(fast - choquet_mobius_general(GeneralMobius::from_2additive(m), x)) <= 1e-12);
  }
}

TEST_CASE("Choquet of a constant vector is that constant") {
  std::mt19937_64 rng(3);
  const auto m = testsupport::random_capacity(rng, 5);
  CHECK(choquet_2additive(m, EvaluationVector(std::vector<double>(5, 0.37))) == doctest::Approx(0.37));
}

TEST_CASE("additive capacity gives a weighted sum") {
  const auto m = MobiusCapacity2Add::additive({0.2, 0.3, 0.5});
  const EvaluationVector x({0.9, 0.1, 0.4});
  CHECK(choquet_2additive(m, x) == doctest::Approx(0.2 * 0.9 + 0.3 * 0.1 + 0.5 * 0.4));
}

TEST_CASE("Shapley and interaction indices match exhaustive definitions") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto m = testsupport::random_capacity(rng, n);
    const CapacityFn mu = [&](CriteriaMask s) { return capacity_from_mobius(m, s); };
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double phi = shapley_2additive(m, i);
      sum += phi;
      CHECK(std::abs(phi - shapley_exhaustive(mu, n, i)) <= 1e-12);
      for (std::size_t j = i + 1; j < n; ++j) {
        CHECK(std::abs(interaction_2additive(m, i, j) - interaction_exhaustive(mu, n, i, j)) <= 1e-12);
        CHECK(interaction_2additive(m, i, j) == doctest::Approx(m.pair(i, j)));
      }
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("interaction of a criterion with itself is rejected") {
  const auto m = MobiusCapacity2Add::additive({0.5, 0.5});
  const CapacityFn mu = [&](CriteriaMask s) { return capacity_from_mobius(m, s); };
  CHECK_THROWS_AS(interaction_exhaustive(mu, 2, 1, 1), InvalidArgument);
}
