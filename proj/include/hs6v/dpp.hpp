#pragma once

// Discrete determinantal point processes attached to the two homogeneous
// Schur measures: point configurations {lambda_i - i}, complementation,
// Fredholm gap probabilities, and RSK samplers.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hs6v/contour.hpp"
#include "hs6v/partition.hpp"
#include "hs6v/random.hpp"

namespace hs6v::dpp {

using Matrix = std::vector<std::vector<double>>;
using contour::KernelModel;
using contour::SchurModel;

/// Entries outside [lo, hi] x [lo, hi] are below `bound` in absolute value
/// (only meaningful when `known`).
struct SupportHint {
  bool known = false;
  int lo = 0;
  int hi = 0;
  double bound = 0.0;
};

struct DiscreteKernel {
  /// Block [i][j] = K(xs[i], ys[j]). Must be deterministic.
  std::function<Matrix(const std::vector<int>&, const std::vector<int>&)> block;
  /// Block of the complement 1 - K when it can be evaluated more accurately
  /// than by subtraction; empty otherwise.
  std::function<Matrix(const std::vector<int>&, const std::vector<int>&)> complement_block;
  SupportHint support;
  std::string gauge_note;

  double operator()(int x, int y) const { return block({x}, {y})[0][0]; }
};

/// Kernel from a pointwise function.
DiscreteKernel make_kernel(std::function<double(int, int)> entry);

/// K(x, y) of the Schur measure `model` from the double contour integral.
DiscreteKernel schur_kernel(const KernelModel& model, double tol = 1e-12);

/// K~(x, y) = 1_{x=y} - K(x, y).
DiscreteKernel complement_kernel(const DiscreteKernel& k);

/// {lambda_i - i : 1 <= i <= n_cutoff}, decreasing. DomainError if n_cutoff < l(lambda).
std::vector<int> point_configuration(const Partition& lambda, int n_cutoff);

/// Integers in [lo, hi] not of the form lambda_i - i.
std::vector<int> complement_configuration(const Partition& lambda, int lo, int hi);

inline constexpr int default_depth_cap = 256;

struct GapResult {
  double value = 0.0;
  int depth = 0;
  bool clamped = false;  ///< value fell outside [0, 1] by at most tol and was clamped
};

/// det(1 - K~) on l^2({x, x-1, x-2, ...}), grown from `depth` points until
/// two successive depths agree within tol and either the last diagonal entry
/// of K~ is below tol/100 or the value itself is below tol. AccuracyError at depth_cap.
GapResult discrete_gap_probability(const DiscreteKernel& k_tilde, int x, int depth, double tol,
                                   int depth_cap = default_depth_cap);

/// Prob{l(lambda) <= k} = det(1 - K~) on {-k-1, -k-2, ...}.
GapResult length_cdf(const KernelModel& model, int k, double tol);

/// Determinant with full pivoting.
double determinant(Matrix a);

enum class RskMode { row, dual };

/// Shape of the insertion tableau of the biword of W (rows in order, each
/// column index repeated W[i][j] times). Dual mode needs 0/1 entries and
/// bumps the leftmost entry >= the inserted letter.
Partition rsk_shape(const std::vector<std::vector<int>>& w, RskMode mode);

/// Meixner: N x (M-1) i.i.d. geometric entries P(k) = (1-zeta) zeta^k, row RSK.
/// Krawtchouk: N x (M-1) i.i.d. Bernoulli(zeta/(1+zeta)) entries, dual RSK.
Partition sample_schur_measure(const KernelModel& model, Engine& engine);

struct SampleBatch {
  std::vector<Partition> partitions;
  std::uint64_t seed = 0;
  KernelModel model;
};

/// Sample i uses substream(seed, i), so the batch does not depend on workers.
SampleBatch sample_schur_batch(const KernelModel& model, std::uint64_t seed, std::size_t count,
                               unsigned workers = 1);

/// "sample_index,parts" header then one line per sample, parts space-separated.
void write_csv(const SampleBatch& batch, std::ostream& out);

/// s_lambda(1^{M-1}) s_lambda(1^N) zeta^{|lambda|} (1-zeta)^{(M-1)N} (meixner),
/// s_{lambda'}(1^{M-1}) s_lambda(1^N) zeta^{|lambda|} (1+zeta)^{-(M-1)N} (krawtchouk).
double schur_weight(const KernelModel& model, const Partition& lambda);

struct WeightTable {
  std::map<Partition, double> weights;  ///< every nonzero weight with |lambda| <= D
  int D = 0;
  double tail_mass = 1.0;               ///< 1 - sum of weights
};

/// Exact weights up to degree D (all of them when the support is finite).
WeightTable exact_weight_table(const KernelModel& model, int D);

/// Smallest table whose tail mass is below tol (D up to degree_cap).
WeightTable exact_weight_table_to(const KernelModel& model, double tol, int degree_cap = 80);

/// Prob{l(lambda) <= k} from the table; the error is at most tail_mass.
double exact_length_cdf(const WeightTable& table, int k);

/// Prob{x in {lambda_i - i}} from the table.
double exact_one_point(const WeightTable& table, int x);

/// max |r(x,y) r(y,z) / r(x,z) - 1| over x < y < z in [lo, hi], with
/// r(x,y) = K(x,y)/K(y,x). Zero iff K is symmetric after a diagonal gauge
/// on the entries where r is defined.
double gauge_defect(const DiscreteKernel& k, int lo, int hi);

}  // namespace hs6v::dpp
