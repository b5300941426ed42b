#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "hs6v/dpp.hpp"
#include "hs6v/errors.hpp"

using hs6v::Partition;
using namespace hs6v::dpp;

namespace {

KernelModel meixner33() { return {SchurModel::meixner, 4, 3, 0.3}; }

// Longest weakly (strict = false) or strictly increasing subsequence.
int longest_increasing(const std::vector<int>& word, bool strict) {
  std::vector<int> best(word.size(), 1);
  int top = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (strict ? word[j] < word[i] : word[j] <= word[i]) best[i] = std::max(best[i], best[j] + 1);
    top = std::max(top, best[i]);
  }
  return top;
}

std::vector<int> biword(const std::vector<std::vector<int>>& w) {
  std::vector<int> out;
  for (const auto& r : w)
    for (std::size_t j = 0; j < r.size(); ++j)
      for (int c = 0; c < r[j]; ++c) out.push_back(static_cast<int>(j));
  return out;
}

// Law of the RSK shape of an i.i.d. matrix, by enumerating every matrix with
// entries in [0, max_entry]; entry_prob[k] = P(entry = k).
std::map<Partition, double> pushforward(int rows, int cols, const std::vector<double>& entry_prob, RskMode mode) {
  std::map<Partition, double> law;
  const int base = static_cast<int>(entry_prob.size());
  const int cells = rows * cols;
  long total = 1;
  for (int i = 0; i < cells; ++i) total *= base;
  for (long code = 0; code < total; ++code) {
    std::vector<std::vector<int>> w(rows, std::vector<int>(cols));
    long c = code;
    double p = 1.0;
    for (int i = 0; i < cells; ++i) {
      const int e = static_cast<int>(c % base);
      c /= base;
      w[i / cols][i % cols] = e;
      p *= entry_prob[e];
    }
    law[rsk_shape(w, mode)] += p;
  }
  return law;
}

}  // namespace

TEST_CASE("point configurations") {
  CHECK(point_configuration(Partition{}, 3) == std::vector<int>{-1, -2, -3});
  CHECK(point_configuration(Partition{2, 1}, 2) == std::vector<int>{1, -1});
  CHECK_THROWS_AS(point_configuration(Partition{2, 1}, 1), hs6v::DomainError);
  for (const Partition& l : {Partition{2, 1}, Partition{}, Partition{3, 3, 1}, Partition{1, 1, 1, 1}}) {
    auto hole = complement_configuration(l, -8, 8);
    REQUIRE(!hole.empty());
    CHECK(hole.front() == -l.length());
  }
}

TEST_CASE("kernel complementation") {
  auto zero = make_kernel([](int, int) { return 0.0; });
  auto id = complement_kernel(zero);
  CHECK(id(2, 2) == 1.0);
  CHECK(id(2, 3) == 0.0);
  auto k = make_kernel([](int x, int y) { return 1.0 / (1.0 + (x - y) * (x - y)) + 0.1 * x; });
  auto back = complement_kernel(complement_kernel(k));
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y) CHECK(back(x, y) == doctest::Approx(k(x, y)).epsilon(1e-15));
}

TEST_CASE("gap probability limits") {
  auto zero = make_kernel([](int, int) { return 0.0; });
  CHECK(discrete_gap_probability(zero, 0, 4, 1e-12).value == 1.0);
  auto id = make_kernel([](int x, int y) { return x == y ? 1.0 : 0.0; });
  CHECK(std::abs(discrete_gap_probability(id, 0, 4, 1e-12).value) < 1e-12);
  CHECK_THROWS_AS(discrete_gap_probability(zero, 0, 0, 1e-12), hs6v::DomainError);
}

TEST_CASE("RSK shapes") {
  CHECK(rsk_shape({{5}}, RskMode::row) == Partition{5});
  CHECK(rsk_shape({{1, 1}, {1, 1}}, RskMode::row) == Partition{3, 1});
  CHECK(rsk_shape({{1, 1}, {1, 1}}, RskMode::dual) == Partition{2, 2});
  CHECK(rsk_shape({{1}}, RskMode::dual) == Partition{1});
  CHECK_THROWS_AS(rsk_shape({{2}}, RskMode::dual), hs6v::DomainError);

  hs6v::Engine e = hs6v::substream(7, 0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<int>> w(3, std::vector<int>(4));
    std::vector<std::vector<int>> b(3, std::vector<int>(4));
    for (auto& r : w)
      for (auto& x : r) x = static_cast<int>(e() % 3);
    for (auto& r : b)
      for (auto& x : r) x = static_cast<int>(e() % 2);
    auto word = biword(w);
    auto shape = rsk_shape(w, RskMode::row);
    CHECK(shape.size() == static_cast<int>(word.size()));
    CHECK(shape.part(1) == longest_increasing(word, false));
    auto dword = biword(b);
    auto dshape = rsk_shape(b, RskMode::dual);
    CHECK(dshape.size() == static_cast<int>(dword.size()));
    CHECK(dshape.part(1) == longest_increasing(dword, true));
  }
}

TEST_CASE("sampler matrix laws push forward to the Schur weights") {
  // Meixner, 2 x 2, geometric entries truncated at 6: compare all shapes of size <= 6.
  {
    const KernelModel m{SchurModel::meixner, 3, 2, 0.3};
    std::vector<double> p;
    for (int k = 0; k <= 6; ++k) p.push_back((1 - m.zeta) * std::pow(m.zeta, k));
    auto law = pushforward(2, 2, p, RskMode::row);
    for (const auto& [lambda, w] : exact_weight_table(m, 6).weights)
      CHECK(law[lambda] == doctest::Approx(w).epsilon(1e-12));
  }
  // Krawtchouk on a non-square 2 x 3 matrix fixes the orientation.
  {
    const KernelModel m{SchurModel::krawtchouk, 4, 2, 0.4};
    const double p1 = m.zeta / (1 + m.zeta);
    auto law = pushforward(2, 3, {1 - p1, p1}, RskMode::dual);
    auto table = exact_weight_table(m, 6);
    CHECK(table.tail_mass < 1e-14);
    CHECK(law.size() == table.weights.size());
    for (const auto& [lambda, w] : table.weights) CHECK(law[lambda] == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("gap probabilities against exact Schur sums") {
  for (const KernelModel& m : {meixner33(), KernelModel{SchurModel::krawtchouk, 4, 3, 0.4}}) {
    auto table = exact_weight_table_to(m, 1e-13);
    REQUIRE(table.tail_mass < 1e-12);
    for (int k = 0; k <= 3; ++k) {
      const auto g = length_cdf(m, k, 1e-10);
      INFO("k=" << k << " det=" << g.value);
      CHECK(std::abs(g.value - exact_length_cdf(table, k)) < 1e-8);
    }
    auto kt = complement_kernel(schur_kernel(m, 1e-12));
    for (int x = -4; x <= 0; ++x) {
      // -l > x  iff  l <= -x - 1
      const double exact = -x - 1 >= 0 ? exact_length_cdf(table, -x - 1) : 0.0;
      CHECK(std::abs(discrete_gap_probability(kt, x, 4, 1e-10).value - exact) < 1e-8);
    }
  }
}

TEST_CASE("one-point function and hole counts") {
  const auto m = meixner33();
  auto table = exact_weight_table_to(m, 1e-13);
  std::vector<int> sites;
  for (int x = -6; x <= 6; ++x) sites.push_back(x);
  auto k = schur_kernel(m, 1e-12);
  auto diag = k.block(sites, sites);
  for (std::size_t i = 0; i < sites.size(); ++i)
    CHECK(std::abs(diag[i][i] - exact_one_point(table, sites[i])) < 1e-9);

  // Expected number of holes in [-8, 2] is the trace of K~ there.
  std::vector<int> window;
  for (int x = -8; x <= 2; ++x) window.push_back(x);
  auto kt = complement_kernel(k).block(window, window);
  double trace = 0.0, holes = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) trace += kt[i][i];
  for (const auto& [lambda, w] : table.weights) holes += w * complement_configuration(lambda, -8, 2).size();
  CHECK(std::abs(trace - holes) < 1e-9);

  auto batch = sample_schur_batch(m, 11, 20000);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    double hits = 0.0;
    for (const auto& l : batch.partitions) {
      auto pts = point_configuration(l, 10);
      hits += std::find(pts.begin(), pts.end(), sites[i]) != pts.end();
    }
    const double p = diag[i][i];
    const double freq = hits / batch.partitions.size();
    const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / batch.partitions.size());
    INFO("site " << sites[i] << " kernel " << p << " empirical " << freq);
    CHECK(std::abs(freq - p) <= 3 * se + 1e-12);
  }
}

TEST_CASE("sampler sanity") {
  const KernelModel one{SchurModel::meixner, 2, 1, 0.3};
  auto batch = sample_schur_batch(one, 3, 100000);
  double empty = 0;
  for (const auto& l : batch.partitions) empty += l.empty();
  const double se = std::sqrt(0.7 * 0.3 / 1e5);
  CHECK(std::abs(empty / 1e5 - 0.7) < 3 * se);

  const KernelModel kr{SchurModel::krawtchouk, 5, 3, 0.5};
  for (const auto& l : sample_schur_batch(kr, 5, 2000).partitions) {
    CHECK(l.length() <= 3);
    CHECK(l.part(1) <= 4);
  }
  for (const auto& l : sample_schur_batch({SchurModel::meixner, 3, 5, 0.5}, 5, 2000).partitions)
    CHECK(l.length() <= 2);
  CHECK_THROWS_AS(sample_schur_batch({SchurModel::meixner, 3, 3, 1.0}, 1, 1), hs6v::DomainError);
}

TEST_CASE("batches are reproducible and worker independent") {
  auto a = sample_schur_batch(meixner33(), 99, 500, 1);
  auto b = sample_schur_batch(meixner33(), 99, 500, 4);
  CHECK(a.partitions == b.partitions);
  std::ostringstream sa, sb;
  write_csv(a, sa);
  write_csv(b, sb);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("sample_index,parts\n0,", 0) == 0);
}

TEST_CASE("Schur kernels are symmetric after a gauge") {
  CHECK(gauge_defect(schur_kernel(meixner33(), 1e-13), -5, 3) < 1e-6);
  auto skew = make_kernel([](int x, int y) { return 1.0 + 0.1 * x * x + 0.05 * y; });
  CHECK(gauge_defect(skew, -3, 3) > 1e-3);
}
