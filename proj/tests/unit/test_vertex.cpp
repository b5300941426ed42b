#include <doctest.h>

#include <cmath>
#include <functional>

#include "hs6v/errors.hpp"
#include "hs6v/vertex.hpp"

using hs6v::Rational;
using namespace hs6v::vertex;

namespace {

VertexSpec single_vertex_spec() {
  VertexSpec spec;
  spec.q = Rational(1, 4);
  spec.columns = {ColumnParams{Rational(4), Rational(2), SpinSign::positive, 1}};
  spec.u = {Rational(4)};
  return spec;
}

VertexSpec mixed_spec() {
  VertexSpec spec;
  spec.q = Rational(1, 3);
  spec.columns = {positive_column(spec.q, 1, Rational(9, 2)), negative_column(Rational(1, 4), Rational(-2)),
                  positive_column(spec.q, 2, Rational(30))};
  spec.u = {Rational(1), Rational(3, 2), Rational(4, 5)};
  return spec;
}

// Column-by-column recursion over every vertex outcome: a different
// traversal order than the row sweep used by the library.
std::vector<Rational> brute_force_distribution(const VertexSpec& spec) {
  const int cols = spec.M() - 1;
  const int rows = spec.N();
  std::vector<Rational> out(rows + 1, Rational(0));
  std::function<void(int, std::vector<int>, Rational, int)> column = [&](int x, std::vector<int> j_in, Rational p,
                                                                           int absorbed) {
    if (x == cols) {
      out[rows - absorbed] += p;
      return;
    }
    std::function<void(int, int, std::vector<int>&, Rational, int)> cell = [&](int y, int i, std::vector<int>& j_out,
                                                                               Rational w, int abs) {
      if (w == 0) return;
      if (y == rows) {
        column(x + 1, j_out, w, abs + i);
        return;
      }
      const int j1 = j_in[y];
      for (int j2 = 0; j2 <= 1; ++j2) {
        const int i2 = i + j1 - j2;
        if (i2 < 0) continue;
        const Rational wt = vertex_weight(i, j1, i2, j2, spec.columns[x], spec.u[y], spec.q);
        j_out[y] = j2;
        cell(y + 1, i2, j_out, w * wt, abs);
      }
    };
    std::vector<int> j_out(rows, 0);
    cell(0, 0, j_out, p, absorbed);
  };
  column(0, std::vector<int>(rows, 1), Rational(1), 0);
  return out;
}

}  // namespace

TEST_CASE("validation") {
  CHECK(validate_vertex_spec(single_vertex_spec()).empty());
  auto bad = single_vertex_spec();
  bad.u = {Rational(1, 2)};
  auto report = validate_vertex_spec(bad);
  REQUIRE(report.size() >= 1);
  CHECK(report[0].column == 1);
  CHECK(report[0].row == 1);
  CHECK(report[0].message.find("xi*u > s fails at (x=1,y=1)") != std::string::npos);

  VertexSpec empty;
  empty.q = Rational(1, 2);
  empty.u = {Rational(1), Rational(2)};
  CHECK(validate_vertex_spec(empty).empty());

  auto wrong_power = single_vertex_spec();
  wrong_power.columns[0].s_squared = 3;
  CHECK_FALSE(validate_vertex_spec(wrong_power).empty());
  CHECK_THROWS_AS(require_valid(wrong_power), hs6v::DomainError);
}

TEST_CASE("vertex weights") {
  const auto spec = single_vertex_spec();
  const auto& col = spec.columns[0];
  CHECK(vertex_weight(0, 0, 0, 0, col, spec.u[0], spec.q) == 1);
  CHECK(vertex_weight(0, 1, 1, 0, col, spec.u[0], spec.q) == Rational(3, 7));
  CHECK(vertex_weight(0, 1, 0, 1, col, spec.u[0], spec.q) == Rational(4, 7));
  CHECK(vertex_weight(0, 1, 0, 0, col, spec.u[0], spec.q) == 0);
  // Capacity blocking.
  CHECK(vertex_weight(1, 1, 2, 0, col, spec.u[0], spec.q) == 0);
  CHECK_THROWS_AS(vertex_weight(2, 0, 2, 0, col, spec.u[0], spec.q), hs6v::DomainError);

  const auto mixed = mixed_spec();
  for (const auto& c : mixed.columns) {
    const int cap = c.capacity ? *c.capacity : 4;
    for (const auto& u : mixed.u)
      for (int i1 = 0; i1 <= cap; ++i1)
        for (int j1 = 0; j1 <= 1; ++j1) {
          Rational total(0);
          for (int j2 = 0; j2 <= 1; ++j2)
            if (i1 + j1 - j2 >= 0) total += vertex_weight(i1, j1, i1 + j1 - j2, j2, c, u, mixed.q);
          CHECK(total == 1);
        }
  }
}

TEST_CASE("exact distribution fixtures") {
  auto d = exact_height_distribution(single_vertex_spec());
  REQUIRE(d.values.size() == 2);
  CHECK(d.values[0] == Rational(3, 7));
  CHECK(d.values[1] == Rational(4, 7));
  CHECK(qmoment_exact(d, Rational(1, 4), 0) == 1);
  CHECK(qmoment_exact(d, Rational(1, 4), 1) == Rational(-3, 7));

  VertexSpec empty;
  empty.q = Rational(1, 2);
  empty.u = {Rational(1), Rational(2), Rational(3)};
  auto e = exact_height_distribution(empty);
  CHECK(e.values[3] == 1);
  CHECK(e.values[0] == 0);
}

TEST_CASE("exact distribution agrees with a column-ordered enumeration") {
  const auto spec = mixed_spec();
  REQUIRE(validate_vertex_spec(spec).empty());
  auto d = exact_height_distribution(spec);
  auto oracle = brute_force_distribution(spec);
  Rational total(0);
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    CHECK(d.values[k] == oracle[k]);
    CHECK(d.values[k] >= 0);
    total += d.values[k];
  }
  CHECK(total == 1);
}

TEST_CASE("state cap is enforced") {
  CHECK_THROWS_AS(exact_height_distribution(mixed_spec(), 2), hs6v::ResourceError);
}

TEST_CASE("q-Laplace transform") {
  auto d = exact_height_distribution(single_vertex_spec());
  const double v = qlaplace_exact(d, Rational(1, 4), 1.0, 1e-12);
  const double w = qlaplace_exact(d, Rational(1, 4), 1.0, 1e-14);
  CHECK(std::abs(v - w) < 1e-12);
  double p0 = 1.0, p1 = 1.0;
  for (int i = 0; i < 60; ++i) {
    p0 /= 1.0 + std::pow(0.25, i);
    p1 /= 1.0 + std::pow(0.25, i + 1);
  }
  CHECK(std::abs(w - (3.0 / 7.0 * p0 + 4.0 / 7.0 * p1)) < 1e-14);
  CHECK(v > 0);
  CHECK(v < 1);
  CHECK(std::abs(qlaplace_exact(d, Rational(1, 4), 1e-14) - 1.0) < 1e-13);
  CHECK_THROWS_AS(qlaplace_exact(d, Rational(1, 4), 0.0), hs6v::DomainError);
}

TEST_CASE("sampling matches the exact law and is reproducible") {
  const auto spec = single_vertex_spec();
  const std::size_t n = 100000;
  auto hs = sample_heights(spec, 12345, n, 1);
  double ones = 0;
  for (int h : hs) ones += h;
  const double p = 4.0 / 7.0;
  CHECK(std::abs(ones / n - p) < 3 * std::sqrt(p * (1 - p) / n));
  CHECK(sample_heights(spec, 12345, 1000, 3) == std::vector<int>(hs.begin(), hs.begin() + 1000));

  const auto mixed = mixed_spec();
  auto d = exact_height_distribution(mixed);
  auto mh = sample_heights(mixed, 7, n, 2);
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    const double pk = hs6v::to_double(d.values[k]);
    double count = 0;
    for (int h : mh) count += (h == static_cast<int>(k));
    CHECK(std::abs(count / n - pk) <= 3 * std::sqrt(pk * (1 - pk) / n) + 1e-12);
  }
}

TEST_CASE("height fields") {
  const auto spec = mixed_spec();
  auto e1 = hs6v::substream(99, 0);
  auto e2 = hs6v::substream(99, 0);
  auto f1 = sample_height_field(spec, e1);
  auto f2 = sample_height_field(spec, e2);
  CHECK(f1.v == f2.v);
  CHECK(f1.j_exit == f2.j_exit);
  for (int s = 0; s < 200; ++s) {
    auto eng = hs6v::substream(5, s);
    auto f = sample_height_field(spec, eng);
    for (int y = 1; y <= f.N; ++y) {
      CHECK(height(f, 1, y) == y);
      for (int m1 = 1; m1 <= f.M; ++m1)
        for (int m2 = 1; m2 <= m1; ++m2) {
          const int diff = height(f, m2, y) - height(f, m1, y);
          int bound = 0;
          for (int x = m2 - 1; x < m1 - 1; ++x) bound += spec.columns[x].capacity.value_or(y);
          CHECK(diff >= 0);
          CHECK(diff <= bound);
        }
      CHECK(height(f, f.M, y) >= 0);
    }
    for (int x = 0; x < f.M - 1; ++x)
      if (spec.columns[x].capacity)
        for (int y = 0; y < f.N; ++y) CHECK(f.v[x][y] <= *spec.columns[x].capacity);
  }
  // Spin-1/2 columns: increments of h along a row are 0 or 1.
  VertexSpec half;
  half.q = Rational(1, 2);
  for (int x = 0; x < 4; ++x) half.columns.push_back(positive_column(half.q, 1, Rational(3 + x)));
  half.u = {Rational(1), Rational(5, 4), Rational(3, 2), Rational(1)};
  REQUIRE(validate_vertex_spec(half).empty());
  for (int s = 0; s < 200; ++s) {
    auto eng = hs6v::substream(6, s);
    auto f = sample_height_field(half, eng);
    for (int y = 1; y <= f.N; ++y)
      for (int m1 = 1; m1 <= f.M; ++m1)
        for (int m2 = 1; m2 <= m1; ++m2) {
          const int diff = height(f, m2, y) - height(f, m1, y);
          CHECK(diff >= 0);
          CHECK(diff <= m1 - m2);
        }
  }
  HeightField manual;
  manual.M = 2;
  manual.N = 1;
  manual.v = {{1}};
  CHECK(height(manual, 2, 1) == 0);
  CHECK_THROWS_AS(height(manual, 3, 1), hs6v::DomainError);

  VertexSpec empty;
  empty.q = Rational(1, 2);
  empty.u = {Rational(1), Rational(2)};
  auto eng = hs6v::substream(1, 1);
  auto f = sample_height_field(empty, eng);
  CHECK(height(f, 1, 2) == 2);
}
