#include <doctest.h>

#include <functional>
#include <map>

#include "hs6v/errors.hpp"
#include "hs6v/symfunc.hpp"

using hs6v::Partition;
using hs6v::Rational;
using namespace hs6v::symfunc;

namespace {

using Monomial = std::vector<int>;
using Poly = std::map<Monomial, Rational>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out[m] += ca * cb;
    }
  return out;
}

// p_lambda as an explicit polynomial in nvars variables.
Poly power_sum_poly(const Partition& lambda, int nvars) {
  Poly out{{Monomial(nvars, 0), Rational(1)}};
  for (int part : lambda.parts()) {
    Poly p;
    for (int i = 0; i < nvars; ++i) {
      Monomial m(nvars, 0);
      m[i] = part;
      p[m] = 1;
    }
    out = multiply(out, p);
  }
  return out;
}

// Number of semistandard tableaux of shape lambda and content mu.
long kostka(const Partition& lambda, const Partition& mu) {
  const int rows = lambda.length();
  std::vector<std::vector<int>> t(rows);
  for (int i = 0; i < rows; ++i) t[i].assign(lambda.part(i + 1), 0);
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < lambda.part(i + 1); ++j) cells.emplace_back(i, j);
  std::vector<int> remaining(mu.parts());
  long count = 0;
  std::function<void(std::size_t)> fill = [&](std::size_t k) {
    if (k == cells.size()) {
      ++count;
      return;
    }
    auto [i, j] = cells[k];
    for (int v = 1; v <= static_cast<int>(remaining.size()); ++v) {
      if (remaining[v - 1] == 0) continue;
      if (j > 0 && t[i][j - 1] > v) continue;
      if (i > 0 && t[i - 1][j] >= v) continue;
      t[i][j] = v;
      --remaining[v - 1];
      fill(k + 1);
      ++remaining[v - 1];
    }
  };
  fill(0);
  return count;
}

// Coefficients of prod_j (t a_j u; q)_inf / (a_j u; q)_inf * prod_j (1 + b_j u)
// up to u^D, by the q-binomial theorem.
std::vector<Rational> cauchy_series(const std::vector<Rational>& as, const std::vector<Rational>& bs,
                                    const Rational& q, const Rational& t, int D) {
  std::vector<Rational> series(D + 1, Rational(0));
  series[0] = 1;
  auto mult = [&](const std::vector<Rational>& f) {
    std::vector<Rational> out(D + 1, Rational(0));
    for (int i = 0; i <= D; ++i)
      for (int j = 0; i + j <= D; ++j) out[i + j] += series[i] * f[j];
    series = out;
  };
  for (const auto& a : as) {
    std::vector<Rational> f(D + 1);
    Rational ratio(1);
    for (int n = 0; n <= D; ++n) {
      f[n] = ratio * hs6v::pow(a, n);
      ratio *= (1 - t * hs6v::pow(q, n)) / (1 - hs6v::pow(q, n + 1));
    }
    mult(f);
  }
  for (const auto& b : bs) {
    std::vector<Rational> f(D + 1, Rational(0));
    f[0] = 1;
    if (D >= 1) f[1] = b;
    mult(f);
  }
  return series;
}

}  // namespace

TEST_CASE("partitions") {
  CHECK(hs6v::partitions_up_to(0).size() == 1);
  auto p3 = hs6v::partitions_up_to(3);
  REQUIRE(p3.size() == 7);
  CHECK(p3[4] == Partition{3});
  CHECK(p3[5] == Partition{2, 1});
  CHECK(p3[6] == Partition{1, 1, 1});
  auto one_row = hs6v::partitions_up_to(3, 1);
  CHECK(one_row.size() == 4);
  CHECK(Partition{3, 1}.dual() == Partition{2, 1, 1});
  CHECK(Partition{4, 2, 1}.dual().dual() == Partition{4, 2, 1});
  CHECK_THROWS_AS(Partition({1, 2}), hs6v::DomainError);
  CHECK(hs6v::partitions_of(7).size() == 15);
}

TEST_CASE("basis transition matches brute-force expansion") {
  for (int d = 1; d <= 5; ++d) {
    auto tr = basis_transition(d);
    const std::size_t n = tr.index.size();
    for (std::size_t i = 0; i < n; ++i) {
      Poly poly = power_sum_poly(tr.index[i], d);
      for (std::size_t j = 0; j < n; ++j) {
        Monomial m(d, 0);
        for (int k = 1; k <= tr.index[j].length(); ++k) m[k - 1] = tr.index[j].part(k);
        auto it = poly.find(m);
        CHECK(tr.p_to_m[i][j] == (it == poly.end() ? Rational(0) : it->second));
      }
      for (std::size_t j = 0; j < n; ++j) {
        Rational s(0);
        for (std::size_t k = 0; k < n; ++k) s += tr.m_to_p[i][k] * tr.p_to_m[k][j];
        CHECK(s == (i == j ? 1 : 0));
      }
    }
  }
  auto tr6 = basis_transition(6);
  CHECK(tr6.p_to_m.back().back() == 720);
  CHECK_THROWS_AS(basis_transition(13), hs6v::ResourceError);
}

TEST_CASE("(q,t) scalar product") {
  const Rational q(1, 3), t(1, 5);
  SymPolyExpansion p1{1, Basis::power_sum, {{Partition{1}, Rational(1)}}};
  CHECK(inner_product_qt(p1, p1, q, t) == (1 - q) / (1 - t));
  SymPolyExpansion p2{2, Basis::power_sum, {{Partition{2}, Rational(1)}}};
  SymPolyExpansion p11{2, Basis::power_sum, {{Partition{1, 1}, Rational(1)}}};
  CHECK(inner_product_qt(p2, p11, q, t) == 0);
  CHECK(inner_product_qt(p11, p11, q, t) == 2 * ((1 - q) / (1 - t)) * ((1 - q) / (1 - t)));
  CHECK_THROWS_AS(inner_product_qt(p1, p1, Rational(1), t), hs6v::DomainError);
  CHECK_THROWS_AS(inner_product_qt(p1, p1, q, Rational(1)), hs6v::DomainError);
}

TEST_CASE("Macdonald P at low degree") {
  const Rational q(1, 3), t(2, 7);
  auto P1 = macdonald_P(Partition{1}, q, t);
  CHECK(P1.power_sum_form.coefficient(Partition{1}) == 1);
  auto P2 = macdonald_P(Partition{2}, q, t);
  CHECK(P2.monomial_form.coefficient(Partition{2}) == 1);
  CHECK(P2.monomial_form.coefficient(Partition{1, 1}) == (1 + q) * (1 - t) / (1 - q * t));
  auto S2 = macdonald_P(Partition{2}, Rational(1, 2), Rational(1, 2));
  CHECK(S2.monomial_form.coefficient(Partition{1, 1}) == 1);
}

TEST_CASE("q = t recovers Schur functions (Kostka numbers)") {
  for (const Rational& q : {Rational(1, 2), Rational(0), Rational(3, 4)}) {
    for (int d = 1; d <= 6; ++d) {
      for (const auto& lambda : hs6v::partitions_of(d)) {
        auto P = macdonald_P(lambda, q, q);
        for (const auto& mu : hs6v::partitions_of(d))
          CHECK(P.monomial_form.coefficient(mu) == Rational(kostka(lambda, mu)));
        CHECK(macdonald_norm(lambda, q, q) == 1);
      }
    }
  }
}

TEST_CASE("orthogonality and order independence") {
  const Rational q(2, 5), t(1, 3);
  for (int d = 2; d <= 6; ++d) {
    auto parts = hs6v::partitions_of(d);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      auto Pi = macdonald_P(parts[i], q, t);
      auto Pn = macdonald_P(parts[i], q, t, default_degree_cap, DominanceExtension::n_statistic);
      CHECK(Pi.monomial_form.coefficients == Pn.monomial_form.coefficients);
      // Unitriangularity.
      for (const auto& [mu, c] : Pi.monomial_form.coefficients) CHECK(parts[i].dominates(mu));
      for (std::size_t j = i + 1; j < parts.size(); ++j) {
        auto Pj = macdonald_P(parts[j], q, t);
        CHECK(inner_product_qt(Pi.power_sum_form, Pj.power_sum_form, q, t) == 0);
      }
    }
  }
}

TEST_CASE("Q_(r) = g_r") {
  const Rational q(1, 4), t(3, 5);
  CHECK(macdonald_Q(Partition{1}, q, t).power_sum_form.coefficient(Partition{1}) == (1 - t) / (1 - q));
  for (int r = 1; r <= 5; ++r) {
    auto Q = macdonald_Q(Partition{r}, q, t);
    for (const auto& lambda : hs6v::partitions_of(r))
      CHECK(Q.power_sum_form.coefficient(lambda) == 1 / z_lambda_qt(lambda, q, t));
  }
  auto Qs = macdonald_Q(Partition{2, 1}, Rational(1, 3), Rational(1, 3));
  auto Ps = macdonald_P(Partition{2, 1}, Rational(1, 3), Rational(1, 3));
  CHECK(Qs.monomial_form.coefficients == Ps.monomial_form.coefficients);
}

TEST_CASE("power sums of specializations agree with the product formula") {
  const Rational q(1, 3), t(1, 2);
  Specialization rho{{Rational(1, 5), Rational(2, 7)}, {Rational(1, 4), Rational(3, 5)}, Rational(0), q, t};
  const int D = 8;
  auto p = power_sums_of_specialization(rho, D);
  auto g = g_series(p, q, t);
  auto oracle = cauchy_series(rho.alphas, rho.betas, q, t, D);
  for (int r = 0; r <= D; ++r) CHECK(g[r] == oracle[r]);
  // The same g_r assembled from z_lambda(q,t)^{-1} p_lambda(rho).
  for (int r = 1; r <= 6; ++r) {
    Rational s(0);
    for (const auto& lambda : hs6v::partitions_of(r)) {
      Rational term = 1 / z_lambda_qt(lambda, q, t);
      for (int part : lambda.parts()) term *= p.p(part);
      s += term;
    }
    CHECK(s == oracle[r]);
  }
  Specialization single_alpha{{Rational(2, 3)}, {}, Rational(0), q, t};
  CHECK(power_sums_of_specialization(single_alpha, 3).p(3) == Rational(8, 27));
  Specialization single_beta{{}, {Rational(2, 3)}, Rational(0), q, q};
  CHECK(power_sums_of_specialization(single_beta, 2).p(2) == Rational(-4, 9));
  // gamma: exp(gamma u) factor.
  Specialization gam{{}, {}, Rational(3), q, t};
  auto gg = g_series(power_sums_of_specialization(gam, 3), q, t);
  CHECK(gg[2] == Rational(9, 2));
}

TEST_CASE("evaluation") {
  const Rational q(1, 3), t(1, 2);
  SymPolyExpansion p1{1, Basis::power_sum, {{Partition{1}, Rational(1)}}};
  std::vector<Rational> x{Rational(1, 2), Rational(2), Rational(-3)};
  CHECK(evaluate_symfunc(p1, power_sums_of_variables(x, 1)) == Rational(-1, 2));
  const Rational xv(3, 7);
  for (int r = 1; r <= 5; ++r) {
    auto P = macdonald_P(Partition{r}, q, t);
    CHECK(evaluate_symfunc(P.power_sum_form, power_sums_of_variables({xv}, r)) == hs6v::pow(xv, r));
  }
  for (const auto& lambda : hs6v::partitions_of(5)) {
    auto P = macdonald_P(lambda, q, t);
    for (int m = 1; m < lambda.length(); ++m) {
      std::vector<Rational> vars(x.begin(), x.begin() + std::min<std::size_t>(m, x.size()));
      if (static_cast<int>(vars.size()) < m) continue;
      CHECK(evaluate_symfunc(P.power_sum_form, power_sums_of_variables(vars, 5)) == 0);
    }
  }
  CHECK_THROWS_AS(evaluate_symfunc(macdonald_P(Partition{3}, q, t).power_sum_form, power_sums_of_variables(x, 2)),
                  hs6v::DomainError);
}

TEST_CASE("Schur evaluation") {
  CHECK(schur_eval(Partition{}, {Rational(2)}) == 1);
  CHECK(schur_eval(Partition{1}, {Rational(1, 2), Rational(3)}) == Rational(7, 2));
  CHECK(schur_eval(Partition{2, 1}, {Rational(1), Rational(1), Rational(1)}) == 8);
  CHECK(schur_ones(Partition{2, 1}, 3) == 8);
  for (int d = 1; d <= 6; ++d)
    for (const auto& lambda : hs6v::partitions_of(d))
      for (int n = 1; n <= 4; ++n) CHECK(schur_eval(lambda, std::vector<Rational>(n, Rational(1))) == schur_ones(lambda, n));
  // Schur consistency of Gram-Schmidt output.
  std::vector<Rational> x{Rational(1, 3), Rational(-2, 5), Rational(7, 4)};
  for (const auto& lambda : hs6v::partitions_of(5)) {
    auto P = macdonald_P(lambda, Rational(2, 9), Rational(2, 9));
    CHECK(evaluate_symfunc(P.power_sum_form, power_sums_of_variables(x, 5)) == schur_eval(lambda, x));
  }
}

TEST_CASE("Cauchy identity") {
  const Rational q(1, 3), t(1, 2);
  std::vector<Rational> x{Rational(1, 3), Rational(1, 5)};
  Specialization rho2{{Rational(1, 2)}, {Rational(1, 3)}, Rational(0), q, t};
  auto p1 = power_sums_of_variables(x, 6);
  auto p2 = power_sums_of_specialization(rho2, 6);
  // Two-variable-times-one-alpha-one-beta product, graded by total degree.
  std::vector<Rational> as, bs;
  for (const auto& xi : x) {
    as.push_back(xi * rho2.alphas[0]);
    bs.push_back(xi * rho2.betas[0]);
  }
  auto oracle = cauchy_series(as, bs, q, t, 6);
  for (int d = 0; d <= 6; ++d) {
    Rational s(0);
    if (d == 0) s = 1;
    for (const auto& lambda : hs6v::partitions_of(d)) {
      if (d == 0) break;
      s += evaluate_symfunc(macdonald_P(lambda, q, t).power_sum_form, p1) *
           evaluate_symfunc(macdonald_Q(lambda, q, t).power_sum_form, p2);
    }
    CHECK(s == oracle[d]);
  }
}

TEST_CASE("JSON layout round trip") {
  auto P = macdonald_P(Partition{2, 1}, Rational(1, 3), Rational(1, 2));
  auto j = to_json(P.monomial_form);
  CHECK(j["basis"] == "monomial");
  CHECK(j["degree"] == 3);
  auto back = expansion_from_json(j);
  CHECK(back.coefficients == P.monomial_form.coefficients);
  CHECK(back.basis == Basis::monomial);
}
