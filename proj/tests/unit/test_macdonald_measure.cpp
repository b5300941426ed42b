#include <doctest.h>

#include <cmath>
#include <random>

#include "hs6v/errors.hpp"
#include "hs6v/macdonald_measure.hpp"

using hs6v::Partition;
using hs6v::Rational;
using namespace hs6v::macdonald;

namespace {

MacdonaldSpec fixture(const Rational& q) {
  MacdonaldSpec s;
  s.x = {Rational(1, 4)};
  s.rho2 = {{Rational(2)}, {}, Rational(0), q, Rational(1, 4)};
  return s;
}

double qpochhammer(double a, double q) {
  double p = 1.0;
  for (int k = 0; k < 4000; ++k) {
    p *= 1.0 - a;
    a *= q;
    if (std::abs(a) < 1e-300) break;
  }
  return p;
}

MacdonaldSpec random_spec(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> small(1, 9);
  MacdonaldSpec s;
  for (int i = 0; i < n; ++i) s.x.push_back(Rational(small(rng), 20));
  s.rho2.q = Rational(small(rng) - 1, 10);
  s.rho2.t = Rational(small(rng) - 1, 10);
  s.rho2.alphas = {Rational(small(rng), 10)};
  if (small(rng) > 4) s.rho2.betas = {Rational(small(rng), 10)};
  return s;
}

}  // namespace

TEST_CASE("normalization") {
  MacdonaldSpec empty;
  empty.x = {Rational(1, 3), Rational(1, 2)};
  empty.rho2.q = Rational(1, 2);
  empty.rho2.t = Rational(1, 3);
  CHECK(normalization_Pi(empty) == doctest::Approx(1.0).epsilon(1e-15));

  for (double q : {0.0, 0.3, 0.9}) {
    auto s = fixture(Rational(static_cast<long>(q * 10), 10));
    const double expected = qpochhammer(1.0 / 8, q) / qpochhammer(0.5, q);
    CHECK(std::abs(normalization_Pi(s, 1e-16) - expected) < 1e-13 * expected);
  }

  MacdonaldSpec schur;
  schur.x = {Rational(1, 3), Rational(1, 5)};
  schur.rho2 = {{Rational(1, 2), Rational(6, 5)}, {Rational(2, 3)}, Rational(0), Rational(2, 5), Rational(2, 5)};
  auto exact = normalization_Pi_schur(schur);
  REQUIRE(exact.has_value());
  CHECK(*exact == Rational(1, 1) / ((1 - Rational(1, 6)) * (1 - Rational(2, 5)) * (1 - Rational(1, 10)) *
                                    (1 - Rational(6, 25))) *
                      (1 + Rational(2, 9)) * (1 + Rational(2, 15)));
  CHECK(std::abs(normalization_Pi(schur) - hs6v::to_double(*exact)) < 1e-14 * hs6v::to_double(*exact));
  CHECK_FALSE(normalization_Pi_schur(fixture(Rational(1, 2))).has_value());

  auto divergent = fixture(Rational(1, 2));
  divergent.rho2.alphas = {Rational(4)};
  CHECK_THROWS_AS(normalization_Pi(divergent), hs6v::DomainError);
}

TEST_CASE("weights") {
  auto s = fixture(Rational(1, 3));
  auto tr = mm_weights_truncated(s, 40);
  CHECK(tr.weights.at(Partition{}) == doctest::Approx(1.0 / tr.Pi).epsilon(1e-15));
  double expectation = 0.0;
  for (const auto& [lambda, w] : tr.weights) expectation += w * std::pow(1.0 / 3, lambda.size());
  CHECK(std::abs(expectation - 4.0 / 7.0) < 1e-10);
  CHECK(tr.tail_mass < 1e-10);

  std::mt19937_64 rng(2024);
  for (int k = 0; k < 20; ++k) {
    auto spec = random_spec(rng, 1 + k % 3);
    REQUIRE(validate_macdonald_spec(spec).empty());
    double previous_tail = 1.0;
    for (int D : {2, 4, 6}) {
      auto t = mm_weights_truncated(spec, D);
      for (const auto& [lambda, w] : t.weights) {
        CHECK(w >= 0.0);
        CHECK(lambda.length() <= spec.n());
      }
      CHECK(t.tail_mass <= previous_tail + 1e-15);
      previous_tail = t.tail_mass;
    }
  }
  auto big = fixture(Rational(1, 3));
  big.x = {Rational(1, 4), Rational(1, 5)};
  CHECK_THROWS_AS(mm_weights_truncated(big, 13), hs6v::ResourceError);
}

TEST_CASE("elementary expectations") {
  for (const Rational& q : {Rational(0), Rational(1, 3), Rational(1, 4), Rational(9, 10)}) {
    auto e = mm_expect_elementary(fixture(q), 1, 1e-12);
    CHECK(std::abs(e.value - 4.0 / 7.0) < 1e-11);
    CHECK(e.truncation_error() < 1e-12);
    CHECK(mm_expect_elementary(fixture(q), 0, 1e-12).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(elementary_observable(Partition{}, 3, 3, 0.5, 0.25) == doctest::Approx(std::pow(0.25, 3)));
  CHECK_THROWS_AS(mm_expect_elementary(fixture(Rational(1, 2)), 2, 1e-10), hs6v::DomainError);
}

TEST_CASE("q-independence without betas") {
  MacdonaldSpec s;
  s.x = {Rational(1, 10), Rational(1, 20)};
  s.rho2.alphas = {Rational(1, 2), Rational(1, 5)};
  s.rho2.t = Rational(1, 3);
  std::vector<Expectation> values;
  for (const Rational& q : {Rational(0), Rational(1, 3), Rational(1, 2), Rational(9, 10)}) {
    s.rho2.q = q;
    values.push_back(mm_expect_elementary(s, 1, 1e-13));
  }
  for (const auto& v : values) {
    CHECK(std::abs(v.value - values[0].value) <= v.truncation_error() + values[0].truncation_error() + 1e-14);
    CHECK(std::abs(v.value - values[0].value) < 1e-10);
  }
}

TEST_CASE("q-Laplace observable") {
  const double zeta = 0.7, q = 0.3, t = 0.4;
  for (const Partition& lambda : {Partition{}, Partition{2}, Partition{3, 1}}) {
    const int n = 2;
    double inf = 1.0;
    for (int j = 0; j < 200; ++j) inf *= 1.0 + zeta * std::pow(t, j);
    const double v = qlaplace_observable(lambda, n, zeta, q, t);
    CHECK(std::abs(v - match_polynomial_observable(lambda, n, zeta, q, t) / inf) < 1e-15);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(qlaplace_observable(Partition{}, 1, 1e-14, 0.5, 0.5) == doctest::Approx(1.0));
  // t = 0: only the finite product survives.
  CHECK(qlaplace_observable(Partition{1}, 1, 2.0, 0.5, 0.0) == doctest::Approx(2.0 / 3.0));
  auto e = mm_expect_qlaplace(fixture(Rational(1, 2)), 1.0, 1e-12);
  CHECK(e.value > 0.0);
  CHECK(e.value < 1.0);
  CHECK_THROWS_AS(mm_expect_qlaplace(fixture(Rational(1, 2)), 0.0, 1e-12), hs6v::DomainError);
}
