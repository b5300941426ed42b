#include "hs6v/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Dense>

#include "hs6v/errors.hpp"
#include "hs6v/parallel.hpp"
#include "hs6v/symfunc.hpp"

namespace hs6v::dpp {

namespace {

Matrix from_entry(const std::function<double(int, int)>& entry, const std::vector<int>& xs,
                  const std::vector<int>& ys) {
  Matrix m(xs.size(), std::vector<double>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) m[i][j] = entry(xs[i], ys[j]);
  return m;
}

void check_model(const KernelModel& model) {
  if (model.M < 1 || model.N < 0) throw DomainError("Schur model needs M >= 1 and N >= 0");
  if (!(model.zeta > 0.0 && model.zeta < 1.0)) throw DomainError("Schur model needs zeta in (0,1)");
}

}  // namespace

DiscreteKernel make_kernel(std::function<double(int, int)> entry) {
  DiscreteKernel k;
  k.block = [entry](const std::vector<int>& xs, const std::vector<int>& ys) { return from_entry(entry, xs, ys); };
  return k;
}

DiscreteKernel schur_kernel(const KernelModel& model, double tol) {
  check_model(model);
  DiscreteKernel k;
  k.block = [model, tol](const std::vector<int>& xs, const std::vector<int>& ys) {
    return contour::correlation_kernel_matrix(model, xs, ys, tol);
  };
  k.complement_block = [model, tol](const std::vector<int>& xs, const std::vector<int>& ys) {
    return contour::complement_kernel_matrix(model, xs, ys, tol);
  };
  // Every point below -N is occupied, so K = 1 on the diagonal there and 0 off it.
  k.support = {true, -model.N - 1, std::numeric_limits<int>::max(), 0.0};
  k.gauge_note = "symmetric after an unspecified diagonal gauge; see gauge_defect";
  return k;
}

DiscreteKernel complement_kernel(const DiscreteKernel& k) {
  DiscreteKernel out;
  if (k.complement_block) {
    out.block = k.complement_block;
  } else {
    auto base = k.block;
    out.block = [base](const std::vector<int>& xs, const std::vector<int>& ys) {
      Matrix m = base(xs, ys);
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j) m[i][j] = (xs[i] == ys[j] ? 1.0 : 0.0) - m[i][j];
      return m;
    };
  }
  out.complement_block = k.block;
  out.gauge_note = k.gauge_note;
  return out;
}

std::vector<int> point_configuration(const Partition& lambda, int n_cutoff) {
  if (n_cutoff < lambda.length())
    throw DomainError("point_configuration: cutoff " + std::to_string(n_cutoff) + " below length " +
                      std::to_string(lambda.length()));
  std::vector<int> out;
  for (int i = 1; i <= n_cutoff; ++i) out.push_back(lambda.part(i) - i);
  return out;
}

std::vector<int> complement_configuration(const Partition& lambda, int lo, int hi) {
  const int cutoff = std::max(lambda.length(), -lo + 1);
  auto pts = point_configuration(lambda, std::max(cutoff, 0));
  std::vector<int> out;
  for (int y = lo; y <= hi; ++y)
    if (std::find(pts.begin(), pts.end(), y) == pts.end()) out.push_back(y);
  return out;
}

double determinant(Matrix a) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return 1.0;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[i][j];
  return m.fullPivLu().determinant();
}

GapResult discrete_gap_probability(const DiscreteKernel& k_tilde, int x, int depth, double tol, int depth_cap) {
  if (depth < 1) throw DomainError("discrete_gap_probability: depth must be at least 1");
  int d = std::min(depth, depth_cap);
  double prev = std::numeric_limits<double>::quiet_NaN();
  while (true) {
    std::vector<int> pts(d);
    for (int a = 0; a < d; ++a) pts[a] = x - a;
    Matrix m = k_tilde.block(pts, pts);
    const double last_diag = std::abs(m[d - 1][d - 1]);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) m[a][b] = (a == b ? 1.0 : 0.0) - m[a][b];
    const double value = determinant(std::move(m));
    // A gap probability only decreases as the window grows, so a value below
    // tol is final even when the diagonal of K~ has not decayed.
    const bool settled = last_diag < tol * 1e-2 || std::abs(value) < tol;
    if (!std::isnan(prev) && std::abs(value - prev) < tol && settled) {
      GapResult r{value, d, false};
      if (value < 0.0 || value > 1.0) {
        if (value < -tol || value > 1.0 + tol)
          throw AccuracyError("gap probability outside [0,1] beyond tolerance", value, std::abs(value - prev));
        r.value = std::clamp(value, 0.0, 1.0);
        r.clamped = true;
      }
      return r;
    }
    if (d >= depth_cap)
      throw AccuracyError("gap probability did not stabilize at depth " + std::to_string(d), value,
                          std::isnan(prev) ? 1.0 : std::abs(value - prev));
    prev = value;
    d = std::min(2 * d, depth_cap);
  }
}

GapResult length_cdf(const KernelModel& model, int k, double tol) {
  if (k < 0) return {0.0, 0, false};
  auto kt = complement_kernel(schur_kernel(model, tol * 1e-2));
  return discrete_gap_probability(kt, -k - 1, 4, tol);
}

Partition rsk_shape(const std::vector<std::vector<int>>& w, RskMode mode) {
  std::vector<std::vector<int>> rows;
  auto insert = [&](int letter) {
    for (auto& row : rows) {
      auto it = mode == RskMode::row ? std::upper_bound(row.begin(), row.end(), letter)
                                     : std::lower_bound(row.begin(), row.end(), letter);
      if (it == row.end()) {
        row.push_back(letter);
        return;
      }
      std::swap(*it, letter);
    }
    rows.push_back({letter});
  };
  for (const auto& r : w) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] < 0) throw DomainError("rsk_shape: negative entry");
      if (mode == RskMode::dual && r[j] > 1) throw DomainError("rsk_shape: dual mode needs 0/1 entries");
      for (int c = 0; c < r[j]; ++c) insert(static_cast<int>(j));
    }
  }
  std::vector<int> shape;
  for (const auto& row : rows) shape.push_back(static_cast<int>(row.size()));
  return Partition(shape);
}

Partition sample_schur_measure(const KernelModel& model, Engine& engine) {
  check_model(model);
  const int cols = model.M - 1;
  std::vector<std::vector<int>> w(model.N, std::vector<int>(cols));
  if (model.model == SchurModel::meixner) {
    const double log_zeta = std::log(model.zeta);
    for (auto& row : w)
      for (auto& e : row) e = static_cast<int>(std::floor(std::log(1.0 - uniform01(engine)) / log_zeta));
    return rsk_shape(w, RskMode::row);
  }
  const double p = model.zeta / (1.0 + model.zeta);
  for (auto& row : w)
    for (auto& e : row) e = uniform01(engine) < p ? 1 : 0;
  return rsk_shape(w, RskMode::dual);
}

SampleBatch sample_schur_batch(const KernelModel& model, std::uint64_t seed, std::size_t count, unsigned workers) {
  check_model(model);
  SampleBatch batch;
  batch.seed = seed;
  batch.model = model;
  batch.partitions.resize(count);
  parallel_for(count, workers, [&](std::size_t i) {
    Engine e = substream(seed, i);
    batch.partitions[i] = sample_schur_measure(model, e);
  });
  return batch;
}

void write_csv(const SampleBatch& batch, std::ostream& out) {
  out << "sample_index,parts\n";
  for (std::size_t i = 0; i < batch.partitions.size(); ++i) {
    out << i << ',';
    const auto& parts = batch.partitions[i].parts();
    for (std::size_t j = 0; j < parts.size(); ++j) out << (j ? " " : "") << parts[j];
    out << '\n';
  }
}

double schur_weight(const KernelModel& model, const Partition& lambda) {
  check_model(model);
  const int cols = model.M - 1;
  const Partition& first = model.model == SchurModel::meixner ? lambda : lambda.dual();
  const double s1 = to_double(symfunc::schur_ones(first, cols));
  if (s1 == 0.0) return 0.0;
  const double s2 = to_double(symfunc::schur_ones(lambda, model.N));
  if (s2 == 0.0) return 0.0;
  const double area = static_cast<double>(cols) * model.N;
  const double norm = model.model == SchurModel::meixner ? std::pow(1.0 - model.zeta, area)
                                                         : std::pow(1.0 + model.zeta, -area);
  return s1 * s2 * std::pow(model.zeta, lambda.size()) * norm;
}

WeightTable exact_weight_table(const KernelModel& model, int D) {
  check_model(model);
  WeightTable t;
  t.D = D;
  const int cols = model.M - 1;
  const int max_len = model.model == SchurModel::meixner ? std::min(cols, model.N) : model.N;
  double total = 0.0;
  for (const auto& lambda : partitions_up_to(D, max_len)) {
    if (model.model == SchurModel::krawtchouk && lambda.part(1) > cols) continue;
    const double w = schur_weight(model, lambda);
    if (w == 0.0) continue;
    t.weights.emplace(lambda, w);
    total += w;
  }
  t.tail_mass = std::max(0.0, 1.0 - total);
  return t;
}

WeightTable exact_weight_table_to(const KernelModel& model, double tol, int degree_cap) {
  const int support = model.model == SchurModel::krawtchouk ? (model.M - 1) * model.N : -1;
  int D = support >= 0 ? support : 8;
  while (true) {
    auto t = exact_weight_table(model, std::min(D, degree_cap));
    if (t.tail_mass < tol || support >= 0 || D >= degree_cap) return t;
    D += 8;
  }
}

double exact_length_cdf(const WeightTable& table, int k) {
  double s = 0.0;
  for (const auto& [lambda, w] : table.weights)
    if (lambda.length() <= k) s += w;
  return s;
}

double exact_one_point(const WeightTable& table, int x) {
  double s = 0.0;
  for (const auto& [lambda, w] : table.weights) {
    const int len = lambda.length();
    bool hit = x < -len;
    for (int i = 1; i <= len && !hit; ++i) hit = lambda.part(i) - i == x;
    if (hit) s += w;
  }
  return s;
}

double gauge_defect(const DiscreteKernel& k, int lo, int hi) {
  std::vector<int> pts;
  for (int x = lo; x <= hi; ++x) pts.push_back(x);
  const Matrix m = k.block(pts, pts);
  const std::size_t n = pts.size();
  auto ratio = [&](std::size_t a, std::size_t b) -> std::optional<double> {
    if (std::abs(m[a][b]) < 1e-13 || std::abs(m[b][a]) < 1e-13) return std::nullopt;
    return m[a][b] / m[b][a];
  };
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        auto ab = ratio(a, b), bc = ratio(b, c), ac = ratio(a, c);
        if (!ab || !bc || !ac) continue;
        worst = std::max(worst, std::abs(*ab * *bc / *ac - 1.0));
      }
  return worst;
}

}  // namespace hs6v::dpp
