#pragma once

// Matched pairs of vertex and Macdonald specifications, and the checks that
// the moment and q-Laplace identities between them hold numerically.
//
// A Macdonald spec matches a vertex spec when Q = t, N = n, the rapidities
// are the reciprocals of x as multisets, and rho2 splits into clusters
// {a, t a, ..., t^{k-1} a} (one per positive-spin column) and
// {b, q b, ..., q^{l-1} b} (one per negative-spin column).

#include <string>
#include <vector>

#include <json.hpp>

#include "hs6v/macdonald_measure.hpp"
#include "hs6v/vertex.hpp"

namespace hs6v::matching {

struct AlphaCluster {
  Rational alpha_tilde;
  int k = 1;
};

struct BetaCluster {
  Rational beta_tilde;
  int l = 1;
};

enum class ClusterKind { alpha, beta };

struct ClusterRef {
  ClusterKind kind = ClusterKind::alpha;
  int index = 0;
};

struct ClusterMap {
  std::vector<AlphaCluster> alpha_clusters;
  std::vector<BetaCluster> beta_clusters;
  /// Column x (0-based) receives column_order[x]. Empty means all alpha
  /// clusters in order, then all beta clusters.
  std::vector<ClusterRef> column_order;
  /// Row y receives u_y = 1/x[row_order[y]]. Empty means the identity.
  std::vector<int> row_order;
};

/// {a, t a, ..., t^{k-1} a}.
std::vector<Rational> expand_alpha(const AlphaCluster& c, const Rational& t);
/// {b, q b, ..., q^{l-1} b}.
std::vector<Rational> expand_beta(const BetaCluster& c, const Rational& q);

/// Column order with defaults resolved.
std::vector<ClusterRef> resolved_column_order(const ClusterMap& cmap);

/// Vertex column matched to one cluster: (s^2, s xi) = (t^{-k}, t^{-k}/a)
/// for alpha clusters, (q^l, -1/b) for beta clusters.
vertex::ColumnParams matched_column(const ClusterMap& cmap, const ClusterRef& ref, const Rational& q,
                                    const Rational& t);

/// Throws DomainError if cmap does not decompose mspec; propagates
/// vertex-spec validation errors.
vertex::VertexSpec build_matched_vertex_spec(const macdonald::MacdonaldSpec& mspec, const ClusterMap& cmap);

/// Macdonald spec obtained by expanding the clusters of cmap, with given x, q, t.
macdonald::MacdonaldSpec expand_clusters(const std::vector<Rational>& x, const ClusterMap& cmap,
                                         const Rational& q, const Rational& t);

/// Replaces q by q_tilde with q_tilde^k = q and every beta by
/// {beta, q_tilde beta, ..., q_tilde^{k-1} beta}. Leaves every e_l expectation unchanged.
macdonald::MacdonaldSpec split_betas(const macdonald::MacdonaldSpec& mspec, int k, const Rational& q_tilde);

struct MatchingReport {
  bool ok = true;
  std::vector<std::string> issues;
};

MatchingReport verify_matching(const vertex::VertexSpec& vspec, const macdonald::MacdonaldSpec& mspec,
                               const ClusterMap& cmap);

/// One compared quantity. rhs_contour is NaN when no contour value applies.
struct MatchRecord {
  std::string identity;
  nlohmann::json parameters;
  double lhs = 0.0;
  double rhs_direct = 0.0;
  double rhs_contour = 0.0;
  double abs_error = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const MatchRecord& r);

struct MatchCheckOptions {
  double tol = 1e-8;
  unsigned workers = 1;
  int degree_cap = symfunc::default_degree_cap;
  std::size_t state_cap = vertex::default_state_cap;
};

/// For l = 0..min(l_max, N): (-1)^l E prod_{i=1}^l (Q^h - Q^{i-1})/(1 - Q^i)
/// by exact enumeration, against E e_l(q^{lambda_j} t^{n-j}) by direct
/// summation and by contour integration.
std::vector<MatchRecord> check_match_moments(const vertex::VertexSpec& vspec, const macdonald::MacdonaldSpec& mspec,
                                             int l_max, const MatchCheckOptions& options = {});

/// E prod_{i>=0} 1/(1 + zeta Q^{h+i}) against
/// E prod_{j>=0} (1 + zeta q^{lambda_{n-j}} t^j)/(1 + zeta t^j) for each zeta,
/// followed by the coefficients of the polynomial identity
/// E prod_{i<h} (1 + zeta Q^i) = E prod_{j=1}^n (1 + zeta q^{lambda_j} t^{n-j}),
/// recovered on both sides from values at n+1 Chebyshev nodes.
std::vector<MatchRecord> check_match_qlaplace(const vertex::VertexSpec& vspec, const macdonald::MacdonaldSpec& mspec,
                                              const std::vector<double>& zetas,
                                              const MatchCheckOptions& options = {});

/// max |vertex_factor(w) / macdonald_factor(w) - 1| over the nodes of the
/// Macdonald contours.
double integrand_ratio_deviation(const vertex::VertexSpec& vspec, const macdonald::MacdonaldSpec& mspec,
                                 int nodes = 64);

/// Coefficients c_0..c_d of the degree-d polynomial through (zetas[i], values[i]).
std::vector<double> vandermonde_solve(const std::vector<double>& zetas, const std::vector<double>& values);

/// d + 1 Chebyshev points on [lo, hi].
std::vector<double> chebyshev_nodes(int d, double lo, double hi);

}  // namespace hs6v::matching
