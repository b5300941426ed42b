#include "hs6v/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hs6v/errors.hpp"

namespace hs6v::contour {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

// Disks of radii r1, r2 whose centers are d apart are disjoint with room to spare.
bool disks_apart(double d, double r1, double r2, double margin) { return d > r1 + r2 + margin; }

// Checks every geometric requirement of a candidate system: each enclosed
// point lies in some circle, excluded points lie outside all circles, the
// circles are pairwise disjoint disks, and no disk meets the image of a
// disk under z -> scale z.
bool separates(const ContourSystem& sys, const std::vector<double>& inside, const std::vector<Complex>& outside,
               double scale) {
  for (double p : inside) {
    bool covered = false;
    for (const auto& c : sys) covered = covered || std::abs(Complex(p) - c.center) < c.radius;
    if (!covered) return false;
  }
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& c = sys[i];
    const double margin = 0.05 * c.radius;
    for (const auto& o : outside)
      if (std::abs(o - c.center) <= c.radius + margin) return false;
    for (std::size_t j = 0; j < sys.size(); ++j) {
      const auto& d = sys[j];
      if (i != j && !disks_apart(std::abs(c.center - d.center), c.radius, d.radius, margin)) return false;
      if (scale > 0 && !disks_apart(std::abs(c.center - scale * d.center), c.radius, scale * d.radius, margin))
        return false;
    }
  }
  return true;
}

}  // namespace

NodeSet circle_nodes(const ContourSystem& contours, int nodes) {
  NodeSet out;
  for (const auto& c : contours) {
    for (int k = 0; k < nodes; ++k) {
      const Complex e = std::polar(1.0, two_pi * (k + 0.5) / nodes);
      const Complex z = c.center + c.radius * e;
      out.z.push_back(z);
      // dz / (2 pi i) = (z - c) d theta / (2 pi)
      out.w.push_back(c.radius * e / static_cast<double>(nodes));
    }
  }
  return out;
}

QuadratureResult circle_quadrature(const std::function<Complex(const std::vector<Complex>&)>& f,
                                   const std::vector<ContourSystem>& contours, double tol, int node_cap) {
  const std::size_t l = contours.size();
  if (l == 0) return {f({}), 0.0, 0};
  int nodes = 8;
  for (const auto& sys : contours)
    for (const auto& c : sys) nodes = std::max(nodes, c.nodes);
  QuadratureResult best;
  bool have_previous = false;
  for (; nodes <= node_cap; nodes *= 2) {
    std::vector<NodeSet> sets;
    for (const auto& sys : contours) sets.push_back(circle_nodes(sys, nodes));
    std::vector<std::size_t> idx(l, 0);
    std::vector<Complex> z(l);
    Complex total = 0.0;
    while (true) {
      Complex weight = 1.0;
      for (std::size_t d = 0; d < l; ++d) {
        z[d] = sets[d].z[idx[d]];
        weight *= sets[d].w[idx[d]];
      }
      total += weight * f(z);
      std::size_t d = 0;
      while (d < l && ++idx[d] == sets[d].z.size()) idx[d++] = 0;
      if (d == l) break;
    }
    const double diff = have_previous ? std::abs(total - best.value) : INFINITY;
    best = {total, diff, nodes};
    if (have_previous && diff < tol) return best;
    have_previous = true;
  }
  throw AccuracyError("circle_quadrature: node cap reached before the tolerance", best.value.real(),
                      best.error_estimate);
}

ContourSystem separating_contours(const std::vector<double>& inside_in, const std::vector<Complex>& outside,
                                  double scale) {
  std::vector<double> inside;
  for (double p : inside_in)
    if (std::none_of(inside.begin(), inside.end(), [&](double q) { return close(p, q); })) inside.push_back(p);
  if (inside.empty()) throw ConfigurationError("separating_contours: nothing to enclose");
  for (double p : inside)
    if (!(p > 0)) throw ConfigurationError("separating_contours: enclosed points must be positive");
  std::vector<Complex> excluded = outside;
  excluded.emplace_back(0.0);

  // One circle around everything.
  const auto [lo, hi] = std::minmax_element(inside.begin(), inside.end());
  const double c = 0.5 * (*lo + *hi);
  const double h = 0.5 * (*hi - *lo);
  double rmax = c * (1.0 - scale) / (1.0 + scale);
  for (const auto& o : excluded) rmax = std::min(rmax, std::abs(o - c));
  if (rmax > 1.5 * h) {
    const double r = h > 0 ? 0.5 * (h + rmax) : 0.5 * rmax;
    ContourSystem single{{Complex(c), r, 32}};
    if (separates(single, inside, excluded, scale)) return single;
  }

  // One small circle per point.
  ContourSystem sys;
  for (double p : inside) {
    double r = p * (1.0 - scale) / (1.0 + scale);
    for (const auto& o : excluded) r = std::min(r, std::abs(o - p));
    for (double q : inside) {
      if (q == p) continue;
      r = std::min(r, 0.5 * std::abs(p - q));
      r = std::min(r, std::abs(p - scale * q) / (1.0 + scale));
      r = std::min(r, std::abs(q - scale * p) / (1.0 + scale));
    }
    sys.push_back({Complex(p), 0.5 * r, 32});
  }
  for (int attempt = 0; attempt < 12; ++attempt) {
    if (separates(sys, inside, excluded, scale)) return sys;
    for (auto& circle : sys) circle.radius *= 0.75;
  }
  throw ConfigurationError("separating_contours: the enclosed and excluded pole sets cannot be separated");
}

Complex vertex_factor(const vertex::VertexSpec& spec, Complex w) {
  Complex f = 1.0;
  for (const auto& col : spec.columns) {
    const double b = to_double(col.s_xi);
    const double a_over_b = to_double(col.s_squared / col.s_xi);
    f *= (1.0 - a_over_b * w) / (1.0 - w / b);
  }
  const double q = to_double(spec.q);
  for (const auto& u : spec.u) {
    const double ud = to_double(u);
    f *= (1.0 - q * ud * w) / (1.0 - ud * w);
  }
  return f;
}

Complex macdonald_factor(const macdonald::MacdonaldSpec& spec, Complex z) {
  const double t = to_double(spec.t());
  const double q = to_double(spec.q());
  Complex f = 1.0;
  for (const auto& x : spec.x) {
    const double xd = to_double(x);
    f *= (t * z - xd) / (z - xd);
  }
  for (const auto& a : spec.rho2.alphas) {
    const double ad = to_double(a);
    f *= (1.0 - ad * z) / (1.0 - t * ad * z);
  }
  for (const auto& b : spec.rho2.betas) {
    const double bd = to_double(b);
    f *= (1.0 + q * bd * z) / (1.0 + bd * z);
  }
  return f;
}

ContourSystem vertex_default_contours(const vertex::VertexSpec& spec) {
  std::vector<double> inside;
  for (const auto& u : spec.u) inside.push_back(1.0 / to_double(u));
  std::vector<Complex> outside;
  for (const auto& col : spec.columns) outside.emplace_back(to_double(col.s_xi));
  return separating_contours(inside, outside, to_double(spec.q));
}

ContourSystem macdonald_default_contours(const macdonald::MacdonaldSpec& spec) {
  std::vector<double> inside;
  for (const auto& x : spec.x) inside.push_back(to_double(x));
  std::vector<Complex> outside;
  const double t = to_double(spec.t());
  if (t > 0)
    for (const auto& a : spec.rho2.alphas) outside.emplace_back(1.0 / (t * to_double(a)));
  for (const auto& b : spec.rho2.betas) outside.emplace_back(-1.0 / to_double(b));
  return separating_contours(inside, outside, t);
}

namespace {

enum class Cross { vertex, macdonald };

// Sum over all node l-tuples of prod g(z_i) * cross(z_1..z_l) for l <= 3,
// using the pairwise structure of both cross terms.
Complex structured_sum(const std::vector<Complex>& z, const std::vector<Complex>& g, double s, int l, Cross kind) {
  const std::size_t n = z.size();
  if (l == 1) {
    Complex total = 0.0;
    for (std::size_t a = 0; a < n; ++a) total += g[a] * (kind == Cross::macdonald ? 1.0 / ((s - 1.0) * z[a]) : 1.0);
    return total;
  }
  // X[a][b]: (z_a - z_b)/(z_a - s z_b) for the vertex integrand,
  // 1/(s z_a - z_b) for the Macdonald determinant.
  std::vector<Complex> X(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      X[a * n + b] = kind == Cross::vertex ? (a == b ? Complex(0.0) : (z[a] - z[b]) / (z[a] - s * z[b]))
                                           : 1.0 / (s * z[a] - z[b]);
  auto x = [&](std::size_t a, std::size_t b) { return X[a * n + b]; };
  Complex total = 0.0;
  if (l == 2) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const Complex cross = kind == Cross::vertex ? x(a, b) : x(a, a) * x(b, b) - x(a, b) * x(b, a);
        total += g[a] * g[b] * cross;
      }
    return total;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const Complex gab = g[a] * g[b];
      Complex inner = 0.0;
      if (kind == Cross::vertex) {
        const Complex xab = x(a, b);
        if (xab == 0.0) continue;
        for (std::size_t c = 0; c < n; ++c) inner += g[c] * x(a, c) * x(b, c);
        total += gab * xab * inner;
      } else {
        const Complex daa = x(a, a), dbb = x(b, b), dab = x(a, b), dba = x(b, a);
        for (std::size_t c = 0; c < n; ++c) {
          const Complex dcc = x(c, c), dbc = x(b, c), dcb = x(c, b), dac = x(a, c), dca = x(c, a);
          const Complex det = daa * (dbb * dcc - dbc * dcb) - dab * (dba * dcc - dbc * dca) +
                              dac * (dba * dcb - dbb * dca);
          inner += g[c] * det;
        }
        total += gab * inner;
      }
    }
  }
  return total;
}

QuadratureResult structured_quadrature(const ContourSystem& contours, const std::function<Complex(Complex)>& g_of,
                                       double s, int l, Cross kind, double tol, int node_cap, const char* name) {
  int nodes = 16;
  QuadratureResult best;
  bool have_previous = false;
  // Keep the l = 3 cost (total nodes)^3 bounded.
  const int total_cap = l >= 3 ? 1024 : 1 << 16;
  for (; nodes <= node_cap && nodes * static_cast<int>(contours.size()) <= total_cap; nodes *= 2) {
    NodeSet set = circle_nodes(contours, nodes);
    std::vector<Complex> g(set.z.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = set.w[k] * g_of(set.z[k]);
    const Complex value = structured_sum(set.z, g, s, l, kind);
    const double diff = have_previous ? std::abs(value - best.value) : INFINITY;
    best = {value, diff, nodes};
    if (have_previous && diff < tol) {
      if (std::abs(value.imag()) > tol)
        throw AccuracyError(std::string(name) + ": imaginary part exceeds the tolerance", value.real(),
                            std::abs(value.imag()));
      return best;
    }
    have_previous = true;
  }
  throw AccuracyError(std::string(name) + ": node cap reached before the tolerance", best.value.real(),
                      best.error_estimate);
}

}  // namespace

QuadratureResult vertex_moment_contour(const vertex::VertexSpec& spec, int l, double tol, int max_l, int node_cap) {
  vertex::require_valid(spec);
  if (l < 0) throw DomainError("vertex_moment_contour: l must be nonnegative");
  if (l > max_l)
    throw ResourceError("vertex_moment_contour: l = " + std::to_string(l) + " exceeds the cap of " +
                        std::to_string(max_l));
  if (l == 0) return {Complex(1.0), 0.0, 0};
  if (spec.N() == 0) throw DomainError("vertex_moment_contour: no rows to encircle");
  const double q = to_double(spec.q);
  auto contours = vertex_default_contours(spec);
  auto result = structured_quadrature(
      contours, [&](Complex w) { return vertex_factor(spec, w) / w; }, q, l, Cross::vertex, tol, node_cap,
      "vertex_moment_contour");
  const double pref = std::pow(q, l * (l - 1) / 2);
  result.value *= pref;
  result.error_estimate *= pref;
  return result;
}

QuadratureResult macdonald_moment_contour(const macdonald::MacdonaldSpec& spec, int l, double tol, int max_l,
                                          int node_cap) {
  macdonald::require_valid(spec);
  if (l < 0 || l > spec.n()) throw DomainError("macdonald_moment_contour: l must satisfy 0 <= l <= n");
  if (l > max_l)
    throw ResourceError("macdonald_moment_contour: l = " + std::to_string(l) + " exceeds the cap of " +
                        std::to_string(max_l));
  if (l == 0) return {Complex(1.0), 0.0, 0};
  auto contours = macdonald_default_contours(spec);
  double factorial = 1.0;
  for (int i = 2; i <= l; ++i) factorial *= i;
  auto result = structured_quadrature(
      contours, [&](Complex z) { return macdonald_factor(spec, z); }, to_double(spec.t()), l, Cross::macdonald,
      tol * factorial, node_cap, "macdonald_moment_contour");
  result.value /= factorial;
  result.error_estimate /= factorial;
  return result;
}

std::pair<double, double> kernel_radii(const KernelModel& model) {
  if (!(model.zeta > 0 && model.zeta < 1)) throw DomainError("kernel: zeta must lie in (0,1)");
  const double sz = std::sqrt(model.zeta);
  const double r1 = 0.5 * (1.0 + 1.0 / sz);
  const double r2 = 0.5 * (1.0 + sz);
  if (!(r1 > 1.0 && 1.0 > r2 && r2 > sz && r1 < 1.0 / sz))
    throw ConfigurationError("kernel: radii do not separate the singularities");
  return {r1, r2};
}

namespace {

// (2 pi i)^{-2} oint oint J(z)/J(w) dz dw / ((z - w) z^{x+1} w^{-y}) with
// |z| = rz and |w| = rw, for all x in xs and y in ys.
std::vector<std::vector<double>> kernel_integral(const KernelModel& model, const std::vector<int>& xs,
                                                 const std::vector<int>& ys, double rz, double rw, double tol,
                                                 int node_cap) {
  const double sz = std::sqrt(model.zeta);
  auto J = [&](Complex z) {
    if (model.model == SchurModel::meixner)
      return std::pow(1.0 - sz / z, model.N) / std::pow(1.0 - sz * z, model.M - 1);
    return std::pow(1.0 + sz * z, model.M - 1) * std::pow(1.0 - sz / z, model.N);
  };
  std::vector<std::vector<double>> previous;
  double diff = INFINITY;
  for (int nodes = 64; nodes <= node_cap; nodes *= 2) {
    NodeSet zs = circle_nodes({{Complex(0.0), rz, nodes}}, nodes);
    NodeSet ws = circle_nodes({{Complex(0.0), rw, nodes}}, nodes);
    const std::size_t K = zs.z.size();
    // A[i][k] = weight J(z) z^{-x-1}; B[j][m] = weight w^y / J(w).
    std::vector<std::vector<Complex>> A(xs.size(), std::vector<Complex>(K));
    std::vector<std::vector<Complex>> B(ys.size(), std::vector<Complex>(K));
    for (std::size_t k = 0; k < K; ++k) {
      const Complex jz = zs.w[k] * J(zs.z[k]);
      const Complex jw = ws.w[k] / J(ws.z[k]);
      for (std::size_t i = 0; i < xs.size(); ++i) A[i][k] = jz * std::pow(zs.z[k], -xs[i] - 1);
      for (std::size_t j = 0; j < ys.size(); ++j) B[j][k] = jw * std::pow(ws.z[k], ys[j]);
    }
    std::vector<Complex> C(K * K);
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t m = 0; m < K; ++m) C[k * K + m] = 1.0 / (zs.z[k] - ws.z[m]);
    std::vector<std::vector<double>> out(xs.size(), std::vector<double>(ys.size(), 0.0));
    std::vector<Complex> AC(K);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::fill(AC.begin(), AC.end(), Complex(0.0));
      for (std::size_t k = 0; k < K; ++k) {
        const Complex a = A[i][k];
        const Complex* row = &C[k * K];
        for (std::size_t m = 0; m < K; ++m) AC[m] += a * row[m];
      }
      for (std::size_t j = 0; j < ys.size(); ++j) {
        Complex s = 0.0;
        for (std::size_t m = 0; m < K; ++m) s += AC[m] * B[j][m];
        out[i][j] = s.real();
      }
    }
    if (!previous.empty()) {
      diff = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j) diff = std::max(diff, std::abs(out[i][j] - previous[i][j]));
      if (diff < tol) return out;
    }
    previous = std::move(out);
  }
  throw AccuracyError("correlation_kernel: node cap reached before the tolerance",
                      previous.empty() ? 0.0 : previous[0][0], diff);
}

// K (complement = false) or 1 - K (complement = true). Entries with x + y >= 0
// use the nested contours |z| > |w|; the others use the swapped contours,
// whose integral is -(1 - K) and stays small where K is close to the identity.
std::vector<std::vector<double>> kernel_entries(const KernelModel& model, const std::vector<int>& xs,
                                                const std::vector<int>& ys, double tol, int node_cap,
                                                bool complement) {
  if (model.M < 1 || model.N < 0) throw DomainError("kernel: need M >= 1 and N >= 0");
  const auto [r1, r2] = kernel_radii(model);
  bool need_direct = false, need_swapped = false;
  for (int x : xs)
    for (int y : ys) (x + y >= 0 ? need_direct : need_swapped) = true;
  std::vector<std::vector<double>> direct, swapped;
  if (need_direct) direct = kernel_integral(model, xs, ys, r1, r2, tol, node_cap);
  if (need_swapped) swapped = kernel_integral(model, xs, ys, r2, r1, tol, node_cap);
  std::vector<std::vector<double>> out(xs.size(), std::vector<double>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double delta = xs[i] == ys[j] ? 1.0 : 0.0;
      const bool use_direct = xs[i] + ys[j] >= 0;
      const double k = use_direct ? direct[i][j] : delta + swapped[i][j];
      out[i][j] = complement ? (use_direct ? delta - direct[i][j] : -swapped[i][j]) : k;
    }
  return out;
}

}  // namespace

std::vector<std::vector<double>> correlation_kernel_matrix(const KernelModel& model, const std::vector<int>& xs,
                                                           const std::vector<int>& ys, double tol, int node_cap) {
  return kernel_entries(model, xs, ys, tol, node_cap, false);
}

std::vector<std::vector<double>> complement_kernel_matrix(const KernelModel& model, const std::vector<int>& xs,
                                                          const std::vector<int>& ys, double tol, int node_cap) {
  return kernel_entries(model, xs, ys, tol, node_cap, true);
}

double correlation_kernel(const KernelModel& model, int x, int y, double tol) {
  return correlation_kernel_matrix(model, {x}, {y}, tol)[0][0];
}

}  // namespace hs6v::contour
