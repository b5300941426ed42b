#include "hs6v/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "hs6v/contour.hpp"
#include "hs6v/errors.hpp"
#include "hs6v/parallel.hpp"

namespace hs6v::matching {

std::vector<Rational> expand_alpha(const AlphaCluster& c, const Rational& t) {
  std::vector<Rational> out;
  Rational a = c.alpha_tilde;
  for (int i = 0; i < c.k; ++i, a *= t) out.push_back(a);
  return out;
}

std::vector<Rational> expand_beta(const BetaCluster& c, const Rational& q) {
  std::vector<Rational> out;
  Rational b = c.beta_tilde;
  for (int i = 0; i < c.l; ++i, b *= q) out.push_back(b);
  return out;
}

std::vector<ClusterRef> resolved_column_order(const ClusterMap& cmap) {
  if (!cmap.column_order.empty()) return cmap.column_order;
  std::vector<ClusterRef> order;
  for (std::size_t i = 0; i < cmap.alpha_clusters.size(); ++i)
    order.push_back({ClusterKind::alpha, static_cast<int>(i)});
  for (std::size_t i = 0; i < cmap.beta_clusters.size(); ++i)
    order.push_back({ClusterKind::beta, static_cast<int>(i)});
  return order;
}

namespace {

std::vector<int> resolved_row_order(const ClusterMap& cmap, int n) {
  if (!cmap.row_order.empty()) return cmap.row_order;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  return order;
}

bool is_permutation_of(std::vector<int> v, int n) {
  if (static_cast<int>(v.size()) != n) return false;
  std::sort(v.begin(), v.end());
  for (int i = 0; i < n; ++i)
    if (v[i] != i) return false;
  return true;
}

std::vector<Rational> sorted(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::string join(const std::vector<Rational>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + "}";
}

// Structural problems with cmap alone (indices, permutations, cluster sizes).
std::vector<std::string> cmap_issues(const ClusterMap& cmap, int n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < cmap.alpha_clusters.size(); ++i) {
    if (cmap.alpha_clusters[i].k < 1) out.push_back("alpha cluster " + std::to_string(i) + " has k < 1");
    if (cmap.alpha_clusters[i].alpha_tilde <= 0)
      out.push_back("alpha cluster " + std::to_string(i) + " has non-positive alpha_tilde");
  }
  for (std::size_t i = 0; i < cmap.beta_clusters.size(); ++i) {
    if (cmap.beta_clusters[i].l < 1) out.push_back("beta cluster " + std::to_string(i) + " has l < 1");
    if (cmap.beta_clusters[i].beta_tilde <= 0)
      out.push_back("beta cluster " + std::to_string(i) + " has non-positive beta_tilde");
  }
  const auto order = resolved_column_order(cmap);
  const std::size_t clusters = cmap.alpha_clusters.size() + cmap.beta_clusters.size();
  std::vector<int> seen_a(cmap.alpha_clusters.size()), seen_b(cmap.beta_clusters.size());
  bool order_ok = order.size() == clusters;
  for (const auto& ref : order) {
    auto& seen = ref.kind == ClusterKind::alpha ? seen_a : seen_b;
    if (ref.index < 0 || ref.index >= static_cast<int>(seen.size())) {
      order_ok = false;
      continue;
    }
    ++seen[ref.index];
  }
  for (int c : seen_a) order_ok = order_ok && c == 1;
  for (int c : seen_b) order_ok = order_ok && c == 1;
  if (!order_ok) out.push_back("column_order must assign every cluster to exactly one column");
  if (!cmap.row_order.empty() && !is_permutation_of(cmap.row_order, n))
    out.push_back("row_order must be a permutation of 0.." + std::to_string(n - 1));
  return out;
}

std::vector<std::string> multiset_issues(const macdonald::MacdonaldSpec& mspec, const ClusterMap& cmap) {
  std::vector<std::string> out;
  std::vector<Rational> alphas, betas;
  for (const auto& c : cmap.alpha_clusters)
    for (auto& a : expand_alpha(c, mspec.t())) alphas.push_back(a);
  for (const auto& c : cmap.beta_clusters)
    for (auto& b : expand_beta(c, mspec.q())) betas.push_back(b);
  alphas = sorted(alphas);
  betas = sorted(betas);
  if (alphas != sorted(mspec.rho2.alphas))
    out.push_back("alpha clusters expand to " + join(alphas) + " but rho2 has alphas " + join(sorted(mspec.rho2.alphas)));
  if (betas != sorted(mspec.rho2.betas))
    out.push_back("beta clusters expand to " + join(betas) + " but rho2 has betas " + join(sorted(mspec.rho2.betas)));
  if (mspec.rho2.gamma != 0) out.push_back("gamma must be zero");
  return out;
}

}  // namespace

vertex::ColumnParams matched_column(const ClusterMap& cmap, const ClusterRef& ref, const Rational& q,
                                    const Rational& t) {
  if (ref.kind == ClusterKind::alpha) {
    const auto& c = cmap.alpha_clusters.at(ref.index);
    const Rational s2 = pow(t, -c.k);
    return vertex::ColumnParams{s2, s2 / c.alpha_tilde, vertex::SpinSign::positive, c.k};
  }
  const auto& c = cmap.beta_clusters.at(ref.index);
  return vertex::ColumnParams{pow(q, c.l), Rational(-1) / c.beta_tilde, vertex::SpinSign::negative, std::nullopt};
}

vertex::VertexSpec build_matched_vertex_spec(const macdonald::MacdonaldSpec& mspec, const ClusterMap& cmap) {
  macdonald::require_valid(mspec);
  auto issues = cmap_issues(cmap, mspec.n());
  for (auto& s : multiset_issues(mspec, cmap)) issues.push_back(std::move(s));
  if (!issues.empty()) {
    std::string msg = "cluster map does not decompose the Macdonald spec:";
    for (const auto& s : issues) msg += " [" + s + "]";
    throw DomainError(msg);
  }
  vertex::VertexSpec v;
  v.q = mspec.t();
  for (const auto& ref : resolved_column_order(cmap)) v.columns.push_back(matched_column(cmap, ref, mspec.q(), mspec.t()));
  for (int i : resolved_row_order(cmap, mspec.n())) v.u.push_back(Rational(1) / mspec.x[i]);
  vertex::require_valid(v);
  return v;
}

macdonald::MacdonaldSpec expand_clusters(const std::vector<Rational>& x, const ClusterMap& cmap, const Rational& q,
                                         const Rational& t) {
  macdonald::MacdonaldSpec m;
  m.x = x;
  m.rho2.q = q;
  m.rho2.t = t;
  for (const auto& c : cmap.alpha_clusters)
    for (auto& a : expand_alpha(c, t)) m.rho2.alphas.push_back(a);
  for (const auto& c : cmap.beta_clusters)
    for (auto& b : expand_beta(c, q)) m.rho2.betas.push_back(b);
  return m;
}

macdonald::MacdonaldSpec split_betas(const macdonald::MacdonaldSpec& mspec, int k, const Rational& q_tilde) {
  if (k < 1) throw DomainError("split_betas: k must be at least 1");
  if (pow(q_tilde, k) != mspec.q())
    throw DomainError("split_betas: " + to_string(q_tilde) + "^" + std::to_string(k) + " != q = " + to_string(mspec.q()));
  macdonald::MacdonaldSpec out = mspec;
  out.rho2.q = q_tilde;
  out.rho2.betas.clear();
  for (const auto& b : mspec.rho2.betas)
    for (auto& v : expand_beta({b, k}, q_tilde)) out.rho2.betas.push_back(v);
  return out;
}

MatchingReport verify_matching(const vertex::VertexSpec& vspec, const macdonald::MacdonaldSpec& mspec,
                               const ClusterMap& cmap) {
  MatchingReport r;
  auto fail = [&](std::string s) {
    r.ok = false;
    r.issues.push_back(std::move(s));
  };
  if (vspec.q != mspec.t()) fail("Q = " + to_string(vspec.q) + " differs from t = " + to_string(mspec.t()));
  if (vspec.N() != mspec.n())
    fail("N = " + std::to_string(vspec.N()) + " differs from n = " + std::to_string(mspec.n()));
  {
    std::vector<Rational> inv;
    for (const auto& x : mspec.x) {
      if (x == 0) {
        fail("x contains zero");
        continue;
      }
      inv.push_back(Rational(1) / x);
    }
    if (sorted(vspec.u) != sorted(inv)) fail("multiset mismatch: u = " + join(sorted(vspec.u)) + " but 1/x = " + join(sorted(inv)));
  }
  for (auto& s : cmap_issues(cmap, mspec.n())) fail(std::move(s));
  for (auto& s : multiset_issues(mspec, cmap)) fail(std::move(s));
  if (!r.ok) return r;

  const auto order = resolved_column_order(cmap);
  if (static_cast<int>(order.size()) != vspec.M() - 1) {
    fail("vertex spec has " + std::to_string(vspec.M() - 1) + " columns but the cluster map has " +
         std::to_string(order.size()) + " clusters");
    return r;
  }
  for (std::size_t x = 0; x < order.size(); ++x) {
    const auto want = matched_column(cmap, order[x], mspec.q(), mspec.t());
    const auto& got = vspec.columns[x];
    const std::string where = "column " + std::to_string(x + 1) + ": ";
    if (got.sign != want.sign) fail(where + "spin sign does not match cluster type");
    if (got.s_squared != want.s_squared)
      fail(where + "s^2 = " + to_string(got.s_squared) + ", expected " + to_string(want.s_squared));
    if (got.s_xi != want.s_xi) fail(where + "s xi = " + to_string(got.s_xi) + ", expected " + to_string(want.s_xi));
    if (got.capacity != want.capacity) fail(where + "capacity does not match cluster size");
  }
  return r;
}

nlohmann::json to_json(const MatchRecord& r) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  return {{"identity", r.identity}, {"parameters", r.parameters}, {"lhs", r.lhs},
          {"rhs_direct", r.rhs_direct}, {"rhs_contour", num(r.rhs_contour)}, {"abs_error", r.abs_error},
          {"pass", r.pass}};
}

std::vector<MatchRecord> check_match_moments(const vertex::VertexSpec& vspec, const macdonald::MacdonaldSpec& mspec,
                                             int l_max, const MatchCheckOptions& options) {
  const auto dist = vertex::exact_height_distribution(vspec, options.state_cap);
  const int top = std::min(l_max, vspec.N());
  std::vector<MatchRecord> out(std::max(0, top + 1));
  parallel_for(out.size(), options.workers, [&](std::size_t idx) {
    const int l = static_cast<int>(idx);
    MatchRecord& r = out[idx];
    r.identity = "moment";
    Rational lhs = vertex::qmoment_exact(dist, vspec.q, l);
    for (int i = 1; i <= l; ++i) lhs /= (Rational(1) - pow(vspec.q, i));
    if (l % 2) lhs = -lhs;
    r.lhs = to_double(lhs);
    if (l == 0) {
      r.rhs_direct = r.rhs_contour = 1.0;
    } else {
      const auto direct = macdonald::mm_expect_elementary(mspec, l, options.tol * 1e-2, options.degree_cap);
      r.rhs_direct = direct.value;
      r.parameters["direct_truncation_error"] = direct.truncation_error();
      r.rhs_contour = contour::macdonald_moment_contour(mspec, l, options.tol * 1e-2).value.real();
    }
    r.parameters["l"] = l;
    r.abs_error = std::max(std::abs(r.lhs - r.rhs_direct), std::abs(r.lhs - r.rhs_contour));
    r.pass = r.abs_error < options.tol;
  });
  return out;
}

std::vector<double> chebyshev_nodes(int d, double lo, double hi) {
  std::vector<double> out(d + 1);
  for (int i = 0; i <= d; ++i) {
    const double c = std::cos(std::numbers::pi * (2 * i + 1) / (2.0 * (d + 1)));
    out[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
  }
  return out;
}

std::vector<double> vandermonde_solve(const std::vector<double>& zetas, const std::vector<double>& values) {
  const int m = static_cast<int>(zetas.size());
  if (static_cast<int>(values.size()) != m || m == 0) throw DomainError("vandermonde_solve: size mismatch");
  Eigen::MatrixXd V(m, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    double p = 1.0;
    for (int j = 0; j < m; ++j, p *= zetas[i]) V(i, j) = p;
    b(i) = values[i];
  }
  Eigen::VectorXd c = V.fullPivLu().solve(b);
  return std::vector<double>(c.data(), c.data() + m);
}

std::vector<MatchRecord> check_match_qlaplace(const vertex::VertexSpec& vspec, const macdonald::MacdonaldSpec& mspec,
                                              const std::vector<double>& zetas, const MatchCheckOptions& options) {
  for (double z : zetas)
    if (!(z > 0)) throw DomainError("zeta values must be positive");
  const auto dist = vertex::exact_height_distribution(vspec, options.state_cap);
  const int n = mspec.n();
  const double Q = to_double(vspec.q);
  const double q = to_double(mspec.q());
  const double t = to_double(mspec.t());
  const auto nodes = chebyshev_nodes(n, 0.25, 2.0);
  const std::size_t jobs = zetas.size() + nodes.size();

  std::vector<MatchRecord> out(zetas.size());
  std::vector<double> poly_lhs(nodes.size()), poly_rhs(nodes.size());
  parallel_for(jobs, options.workers, [&](std::size_t idx) {
    if (idx < zetas.size()) {
      const double zeta = zetas[idx];
      MatchRecord& r = out[idx];
      r.identity = "qlaplace";
      r.parameters["zeta"] = zeta;
      r.lhs = vertex::qlaplace_exact(dist, vspec.q, zeta);
      const auto direct = macdonald::mm_expect_qlaplace(mspec, zeta, options.tol * 1e-2, options.degree_cap);
      r.rhs_direct = direct.value;
      r.parameters["direct_truncation_error"] = direct.truncation_error();
      r.rhs_contour = std::numeric_limits<double>::quiet_NaN();
      r.abs_error = std::abs(r.lhs - r.rhs_direct);
      r.pass = r.abs_error < options.tol;
      return;
    }
    const std::size_t i = idx - zetas.size();
    const double zeta = nodes[i];
    double lhs = 0.0;
    for (std::size_t h = 0; h < dist.values.size(); ++h) {
      double prod = 1.0, qi = 1.0;
      for (std::size_t k = 0; k < h; ++k, qi *= Q) prod *= 1.0 + zeta * qi;
      lhs += to_double(dist.values[h]) * prod;
    }
    poly_lhs[i] = lhs;
    double bound = 1.0, tj = 1.0;
    for (int j = 0; j < n; ++j, tj *= t) bound *= 1.0 + zeta * tj;
    auto obs = [&](const Partition& lambda) { return macdonald::match_polynomial_observable(lambda, n, zeta, q, t); };
    poly_rhs[i] = macdonald::mm_expect(mspec, obs, bound, options.tol * 1e-3, options.degree_cap).value;
  });

  const auto c_lhs = vandermonde_solve(nodes, poly_lhs);
  const auto c_rhs = vandermonde_solve(nodes, poly_rhs);
  for (int l = 0; l <= n; ++l) {
    MatchRecord r;
    r.identity = "qlaplace_polynomial";
    r.parameters["coefficient"] = l;
    r.lhs = c_lhs[l];
    r.rhs_direct = c_rhs[l];
    r.rhs_contour = std::numeric_limits<double>::quiet_NaN();
    r.abs_error = std::abs(r.lhs - r.rhs_direct);
    r.pass = r.abs_error < options.tol;
    out.push_back(std::move(r));
  }
  return out;
}

double integrand_ratio_deviation(const vertex::VertexSpec& vspec, const macdonald::MacdonaldSpec& mspec, int nodes) {
  const auto set = contour::circle_nodes(contour::macdonald_default_contours(mspec), nodes);
  double worst = 0.0;
  for (const auto& z : set.z) {
    const auto ratio = contour::vertex_factor(vspec, z) / contour::macdonald_factor(mspec, z);
    worst = std::max(worst, std::abs(ratio - 1.0));
  }
  return worst;
}

}  // namespace hs6v::matching
