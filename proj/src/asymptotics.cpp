#include "hs6v/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "hs6v/contour.hpp"
#include "hs6v/dpp.hpp"
#include "hs6v/errors.hpp"
#include "hs6v/macdonald_measure.hpp"
#include "hs6v/parallel.hpp"
#include "hs6v/random.hpp"

namespace hs6v::asymptotics {

namespace {

using cd = std::complex<double>;

// +1 for negative_s (ln(1 + a z)), -1 for spin_half (ln(1 - a z)).
double eps_of(ModelVariant v) { return v == ModelVariant::negative_s ? 1.0 : -1.0; }

void require_parameters(double mu, double nu, double zeta) {
  if (!(mu > 0.0) || !(nu > 0.0)) throw DomainError("mu and nu must be positive");
  if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("zeta must lie in (0, 1)");
}

bool admissible(double mu, double nu, double zeta, ModelVariant v) {
  const double r = mu / nu;
  if (v == ModelVariant::spin_half) return zeta < r && r < 1.0 / zeta;
  return r < 1.0 / zeta;
}

// z A(z), where A = G' + c/z does not depend on c.
double zA(double z, double mu, double nu, double a, double e) {
  return mu * a * z / (1.0 + e * a * z) + nu * a / (z - a);
}

double zA_prime(double z, double mu, double nu, double a, double e) {
  const double p = 1.0 + e * a * z;
  return mu * a / (p * p) - nu * a / ((z - a) * (z - a));
}

double zA_second(double z, double mu, double nu, double a, double e) {
  const double p = 1.0 + e * a * z;
  const double d = z - a;
  return -2.0 * mu * a * e * a / (p * p * p) + 2.0 * nu * a / (d * d * d);
}

double log_tail_stop(double term, double base) { return term / (1.0 - base); }

}  // namespace

std::string to_string(ModelVariant v) { return v == ModelVariant::spin_half ? "spin_half" : "negative_s"; }

ModelVariant variant_from_string(const std::string& s) {
  if (s == "spin_half") return ModelVariant::spin_half;
  if (s == "negative_s") return ModelVariant::negative_s;
  throw ConfigurationError("unknown model variant '" + s + "' (expected spin_half or negative_s)");
}

cd action_G(cd z, double mu, double nu, double zeta, double c, ModelVariant variant, int k) {
  if (k < 0 || k > 3) throw DomainError("action_G: derivative order must be 0..3");
  if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("action_G: zeta must lie in (0, 1)");
  const double a = std::sqrt(zeta);
  const double e = eps_of(variant);
  const cd p = 1.0 + e * a * z;
  const cd d = z - a;
  if (std::abs(z) == 0.0 || std::abs(p) == 0.0 || std::abs(d) == 0.0)
    throw DomainError("action_G: z is a singular point");
  if (k == 0) {
    const cd r = 1.0 - a / z;
    auto on_cut = [](cd w) { return w.imag() == 0.0 && w.real() <= 0.0; };
    if (on_cut(p) || on_cut(r)) throw DomainError("action_G: z lies on a branch cut");
    return e * mu * std::log(p) + nu * std::log(r) - c * std::log(z);
  }
  // d^k ln(1 + b z) = (-1)^{k-1} (k-1)! b^k / (1 + b z)^k
  double fact = 1.0;
  for (int i = 2; i < k; ++i) fact *= i;
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  const cd t1 = e * mu * sign * fact * std::pow(e * a, k) / std::pow(p, k);
  const cd t2 = nu * sign * fact * (1.0 / std::pow(d, k) - 1.0 / std::pow(z, k));
  const cd t3 = -c * sign * fact / std::pow(z, k);
  return t1 + t2 + t3;
}

double limit_shape_H(double mu, double nu, double zeta, ModelVariant variant) {
  require_parameters(mu, nu, zeta);
  const double r = mu / nu;
  const double gap = std::sqrt(nu) - std::sqrt(zeta * mu);
  if (r >= 1.0 / zeta) return 0.0;
  if (variant == ModelVariant::spin_half) {
    if (r <= zeta) return nu - mu;
    return gap * gap / (1.0 - zeta);
  }
  return gap * gap / (1.0 + zeta);
}

double sigma_formula(double mu, double nu, double zeta, ModelVariant variant) {
  require_parameters(mu, nu, zeta);
  const double e = eps_of(variant);
  return std::pow(zeta * mu * nu, 1.0 / 6.0) * std::pow(1.0 - std::sqrt(zeta * mu / nu), 2.0 / 3.0) *
         std::pow(1.0 + e * std::sqrt(zeta * nu / mu), 2.0 / 3.0) / (1.0 + e * zeta);
}

CriticalData critical_data(double mu, double nu, double zeta, ModelVariant variant) {
  require_parameters(mu, nu, zeta);
  if (!admissible(mu, nu, zeta, variant))
    throw DomainError("critical_data: mu/nu outside the admissible cone of " + to_string(variant));
  const double a = std::sqrt(zeta);
  const double e = eps_of(variant);

  // G' = G'' = 0 eliminates c = z A(z) and leaves (z A)' = 0, i.e.
  // mu (z - a)^2 = nu (1 + e a z)^2. Take the real root with the smaller edge.
  const double A2 = mu - nu * a * a;
  const double B1 = -2.0 * a * (mu + nu * e);
  const double C0 = mu * a * a - nu;
  std::vector<double> roots;
  if (std::abs(A2) < 1e-300) {
    roots.push_back(-C0 / B1);
  } else {
    const double disc = B1 * B1 - 4.0 * A2 * C0;
    if (disc < 0.0) throw AccuracyError("critical_data: no real critical point", 0.0, -disc);
    const double qq = -0.5 * (B1 + std::copysign(std::sqrt(disc), B1));
    roots.push_back(qq / A2);
    if (qq != 0.0) roots.push_back(C0 / qq);
  }
  double z = 0.0, c = std::numeric_limits<double>::infinity();
  for (double r : roots) {
    if (!std::isfinite(r) || r == 0.0 || r == a || 1.0 + e * a * r == 0.0) continue;
    const double cr = zA(r, mu, nu, a, e);
    if (cr < c) {
      c = cr;
      z = r;
    }
  }
  if (!std::isfinite(c)) throw AccuracyError("critical_data: no admissible critical point", 0.0, 1.0);
  // Newton polish on (z A)' = 0.
  for (int it = 0; it < 8; ++it) {
    const double f = zA_prime(z, mu, nu, a, e);
    const double fp = zA_second(z, mu, nu, a, e);
    if (fp == 0.0) break;
    const double step = f / fp;
    z -= step;
    if (std::abs(step) < 1e-17 * std::max(1.0, std::abs(z))) break;
  }
  c = zA(z, mu, nu, a, e);

  CriticalData out;
  out.variant = variant;
  out.mu = mu;
  out.nu = nu;
  out.zeta = zeta;
  out.z_c = z;
  out.x_c = c;
  out.H = limit_shape_H(mu, nu, zeta, variant);
  const double g3 = action_G(z, mu, nu, zeta, c, variant, 3).real();
  out.sigma = -z * std::cbrt(g3 / 2.0);

  auto& cert = out.certificate;
  const double scale = mu + nu + std::abs(c);
  cert.g1 = std::abs(action_G(z, mu, nu, zeta, c, variant, 1)) / scale;
  cert.g2 = std::abs(action_G(z, mu, nu, zeta, c, variant, 2)) / scale;
  const double sigma_closed_form = sigma_formula(mu, nu, zeta, variant);
  cert.sigma_residual = std::abs(out.sigma - sigma_closed_form) / sigma_closed_form;
  const double rm = std::sqrt(mu), rn = std::sqrt(nu), rzm = std::sqrt(zeta * mu), rzn = std::sqrt(zeta * nu);
  if (variant == ModelVariant::spin_half)
    cert.z_closed_form = (rzm - rn) / (rm - rzn);
  else
    cert.z_closed_form = (rzm - rn) / (mu + rzn);
  cert.z_deviation = std::abs(cert.z_closed_form - z);
  cert.x_deviation = std::abs(out.x_c - (out.H - nu));

  if (cert.g1 > 1e-10 || cert.g2 > 1e-10)
    throw AccuracyError("critical_data: G' or G'' not small at the critical point", out.x_c,
                        std::max(cert.g1, cert.g2));
  if (cert.sigma_residual > 1e-10)
    throw AccuracyError("critical_data: sigma disagrees with its closed form", out.sigma, cert.sigma_residual);
  if (cert.x_deviation > 1e-8)
    throw AccuracyError("critical_data: x_c disagrees with H - nu", out.x_c, cert.x_deviation);
  if (variant == ModelVariant::spin_half && cert.z_deviation > 1e-8)
    throw AccuracyError("critical_data: z_c disagrees with its closed form", out.z_c, cert.z_deviation);
  return out;
}

double spread_metric(std::vector<double> samples) {
  if (samples.empty()) throw DomainError("spread_metric: no samples");
  std::sort(samples.begin(), samples.end());
  std::size_t best = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    // Window (s_i - 1, s_i]; an optimal window can be slid until its right end is a sample.
    const auto lo = std::upper_bound(samples.begin(), samples.end(), samples[i] - 1.0);
    const auto hi = std::upper_bound(samples.begin(), samples.end(), samples[i]);
    best = std::max<std::size_t>(best, static_cast<std::size_t>(hi - lo));
  }
  return static_cast<double>(best) / static_cast<double>(samples.size());
}

double spread_metric(const std::function<double(double)>& F, double lo, double hi, double grid_step) {
  if (!(hi >= lo) || !(grid_step > 0.0)) throw DomainError("spread_metric: bad grid");
  const long n = static_cast<long>(std::ceil((hi - lo) / grid_step));
  double best = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double x = n == 0 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    best = std::max(best, F(x + 1.0) - F(x));
  }
  return best;
}

double phi_product_q(double x, double Q, double tol) {
  if (!(Q > 0.0 && Q < 1.0)) throw DomainError("phi_product_q: Q must lie in (0, 1)");
  double log_sum = 0.0;
  for (long i = 0;; ++i) {
    const double term = std::pow(Q, x + static_cast<double>(i));
    if (term < 1.0 && log_tail_stop(term, Q) < tol) break;
    log_sum += std::log1p(term);
  }
  return std::exp(-log_sum);
}

double phi_column(const Partition& lambda, int n, double x, double q, double t, double tol) {
  if (!(q >= 0.0 && q < 1.0) || !(t > 0.0 && t < 1.0)) throw DomainError("phi_column: need 0 <= q < 1, 0 < t < 1");
  if (n < lambda.length()) throw DomainError("phi_column: lambda has more than n parts");
  double log_sum = 0.0;
  for (long j = 0;; ++j) {
    const double p = j < n ? std::pow(q, lambda.part(n - static_cast<int>(j))) : 0.0;
    const double ex = static_cast<double>(j) + x;
    const double T = std::pow(t, ex);
    if (j >= n && T < 1.0 && log_tail_stop(T, t) < tol) break;
    if (T <= 1.0) {
      log_sum += std::log1p(p * T) - std::log1p(T);
    } else {
      const double y = std::pow(t, -ex);
      log_sum += std::log(p + y) - std::log1p(y);
    }
  }
  return std::exp(log_sum);
}

double phi_t_zero(const Partition& lambda, int n, double x, double q) {
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("phi_t_zero: q must lie in [0, 1)");
  double prod = 1.0;
  for (long j = 0; static_cast<double>(j) < -x; ++j) {
    if (n - j <= 0) return 0.0;
    prod *= std::pow(q, lambda.part(n - static_cast<int>(j)));
  }
  return prod;
}

double phi_min_set(const std::vector<int>& finite, double x, double q, int tail_from, double tol) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("phi_min_set: q must lie in (0, 1)");
  double log_sum = 0.0;
  for (int j : finite) {
    if (j < 0) throw DomainError("phi_min_set: J must lie in the nonnegative integers");
    if (tail_from >= 0 && j >= tail_from) continue;
    log_sum += std::log1p(std::pow(q, x + j));
  }
  if (tail_from >= 0) {
    for (long j = tail_from;; ++j) {
      const double term = std::pow(q, x + static_cast<double>(j));
      if (term < 1.0 && log_tail_stop(term, q) < tol) break;
      log_sum += std::log1p(term);
    }
  }
  return std::exp(-log_sum);
}

std::pair<std::vector<int>, int> column_set(const Partition& lambda, int n) {
  if (n < lambda.length()) throw DomainError("column_set: lambda has more than n parts");
  const int top = lambda.part(1) + n;
  std::vector<bool> taken(static_cast<std::size_t>(top), false);
  for (int i = 0; i < n; ++i) taken[static_cast<std::size_t>(lambda.part(n - i) + i)] = true;
  std::vector<int> finite;
  for (int j = 0; j < top; ++j)
    if (!taken[static_cast<std::size_t>(j)]) finite.push_back(j);
  return {finite, top};
}

EquivalenceReport equivalence_report(const std::vector<EquivalenceInput>& inputs) {
  EquivalenceReport rep;
  for (const auto& in : inputs) {
    if (in.grid.size() != in.F.size() || in.grid.size() < 2)
      throw DomainError("equivalence_report: grid and F must match and hold at least two points");
    if (!std::is_sorted(in.grid.begin(), in.grid.end()))
      throw DomainError("equivalence_report: grid must be increasing");
    auto Fi = [&](double x) {
      if (x <= in.grid.front()) return in.F.front();
      if (x >= in.grid.back()) return in.F.back();
      const auto it = std::upper_bound(in.grid.begin(), in.grid.end(), x);
      const std::size_t j = static_cast<std::size_t>(it - in.grid.begin());
      const double w = (x - in.grid[j - 1]) / (in.grid[j] - in.grid[j - 1]);
      return in.F[j - 1] + w * (in.F[j] - in.F[j - 1]);
    };
    EquivalenceRow row;
    row.index = in.index;
    row.spread_lhs = spread_metric(in.samples);
    for (double x : in.grid) row.spread_rhs = std::max(row.spread_rhs, Fi(x + 1.0) - Fi(x));
    std::vector<double> s = in.samples;
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    for (std::size_t i = 0; i < in.grid.size(); ++i) {
      const double emp =
          static_cast<double>(std::upper_bound(s.begin(), s.end(), in.grid[i]) - s.begin()) / n;
      row.sup_distance = std::max(row.sup_distance, std::abs(emp - in.F[i]));
    }
    rep.rows.push_back(row);
  }
  rep.sup_distance_decreasing = rep.rows.size() >= 2;
  rep.spreads = rep.rows.size() >= 2;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const auto& p = rep.rows[i - 1];
    const auto& r = rep.rows[i];
    if (!(r.sup_distance < p.sup_distance)) rep.sup_distance_decreasing = false;
    if (!(r.spread_lhs < p.spread_lhs && r.spread_rhs < p.spread_rhs)) rep.spreads = false;
  }
  return rep;
}

vertex::VertexSpec homogeneous_spec(ModelVariant variant, const Rational& zeta, const Rational& sqrt_q, int m,
                                    int n) {
  if (!(sqrt_q > 0 && sqrt_q < 1)) throw DomainError("homogeneous_spec: sqrt_q must lie in (0, 1)");
  if (!(zeta > 0 && zeta < 1)) throw DomainError("homogeneous_spec: zeta must lie in (0, 1)");
  if (m < 1 || n < 0) throw DomainError("homogeneous_spec: need m >= 1 and n >= 0");
  vertex::VertexSpec spec;
  spec.q = sqrt_q * sqrt_q;
  const vertex::ColumnParams col = variant == ModelVariant::spin_half
                                       ? vertex::positive_column(spec.q, 1, Rational(1) / sqrt_q)
                                       : vertex::negative_column(spec.q, -sqrt_q);
  spec.columns.assign(static_cast<std::size_t>(m - 1), col);
  spec.u.assign(static_cast<std::size_t>(n), Rational(1) / (zeta * sqrt_q));
  vertex::require_valid(spec);
  return spec;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& F) {
  if (samples.empty()) throw DomainError("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double f = F(samples[i]);
    d = std::max({d, std::abs(static_cast<double>(j) / n - f), std::abs(static_cast<double>(i) / n - f)});
    i = j;
  }
  return d;
}

std::vector<TWExperimentRow> tw_experiment(const TWExperimentConfig& config, const airy::TWTable& table) {
  if (config.n_samples == 0) throw ConfigurationError("tw_experiment: n_samples must be positive");
  const double zeta = to_double(config.zeta);
  const auto crit = critical_data(config.mu, config.nu, zeta, config.variant);
  std::vector<TWExperimentRow> rows;
  for (int L : config.L_list) {
    if (L < 1) throw ConfigurationError("tw_experiment: L must be positive");
    TWExperimentRow row;
    row.L = L;
    row.M = static_cast<int>(std::ceil(config.mu * L - 1e-9));
    row.N = static_cast<int>(std::ceil(config.nu * L - 1e-9));
    row.M = std::max(row.M, 1);
    row.n_samples = config.n_samples;
    row.H_target = crit.H;
    row.sigma = crit.sigma;
    const auto spec = homogeneous_spec(config.variant, config.zeta, config.sqrt_q, row.M, row.N);
    const std::uint64_t seed_L = substream(config.seed, static_cast<std::uint64_t>(L))();
    const auto h = vertex::sample_heights(spec, seed_L, config.n_samples, config.workers);
    const double scale = crit.sigma * std::cbrt(static_cast<double>(L));
    std::vector<double> y(h.size());
    double total = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      total += h[i];
      y[i] = -(h[i] - crit.H * L) / scale;
    }
    row.mean_h_over_L = total / static_cast<double>(h.size()) / L;
    row.ks_distance = ks_distance(y, [&](double s) { return table.cdf(s); });
    if (config.keep_samples) row.rescaled = std::move(y);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(const std::vector<TWExperimentRow>& rows, std::ostream& out) {
  out << "L,M,N,n_samples,mean_h_over_L,H_target,sigma,ks_distance\n";
  out.precision(17);
  for (const auto& r : rows)
    out << r.L << ',' << r.M << ',' << r.N << ',' << r.n_samples << ',' << r.mean_h_over_L << ',' << r.H_target
        << ',' << r.sigma << ',' << r.ks_distance << '\n';
}

namespace {

dpp::KernelModel schur_model(ModelVariant variant, const Rational& zeta, int m, int n) {
  return {variant == ModelVariant::spin_half ? dpp::SchurModel::meixner : dpp::SchurModel::krawtchouk, m, n,
          to_double(zeta)};
}

std::pair<double, double> mean_se(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double s = 0.0, s2 = 0.0;
  for (double x : v) s += x;
  const double m = s / n;
  for (double x : v) s2 += (x - m) * (x - m);
  return {m, n > 1 ? std::sqrt(s2 / (n - 1) / n) : 0.0};
}

}  // namespace

std::vector<CrossModelRow> cross_model_qlaplace(ModelVariant variant, const Rational& zeta, const Rational& sqrt_q,
                                                int size, const std::vector<double>& observable_zetas,
                                                std::size_t n_samples, std::uint64_t seed, unsigned workers) {
  if (size < 1 || n_samples < 2) throw ConfigurationError("cross_model_qlaplace: need size >= 1 and two samples");
  const int m = size + 1, n = size;
  const auto spec = homogeneous_spec(variant, zeta, sqrt_q, m, n);
  const auto heights = vertex::sample_heights(spec, substream(seed, 0)(), n_samples, workers);
  const auto batch = dpp::sample_schur_batch(schur_model(variant, zeta, m, n), substream(seed, 1)(), n_samples, workers);
  const double Q = to_double(spec.q);
  std::vector<CrossModelRow> rows;
  for (double z : observable_zetas) {
    std::vector<double> lhs(n_samples), rhs(n_samples);
    parallel_for(n_samples, workers, [&](std::size_t i) {
      lhs[i] = vertex::qlaplace_factor(Q, heights[i], z);
      rhs[i] = macdonald::qlaplace_observable(batch.partitions[i], n, z, Q, Q);
    });
    CrossModelRow row;
    row.zeta_observable = z;
    std::tie(row.vertex_mean, row.vertex_se) = mean_se(lhs);
    std::tie(row.schur_mean, row.schur_se) = mean_se(rhs);
    const double se = std::hypot(row.vertex_se, row.schur_se);
    row.z_score = se > 0.0 ? (row.vertex_mean - row.schur_mean) / se : 0.0;
    rows.push_back(row);
  }
  return rows;
}

EquivalenceReport vertex_schur_equivalence(ModelVariant variant, const Rational& zeta, const Rational& sqrt_q,
                                           const std::vector<int>& sizes, std::size_t n_samples, std::uint64_t seed,
                                           unsigned workers) {
  std::vector<EquivalenceInput> inputs;
  for (int size : sizes) {
    if (size < 1) throw ConfigurationError("vertex_schur_equivalence: sizes must be positive");
    const int m = size + 1, n = size;
    const auto spec = homogeneous_spec(variant, zeta, sqrt_q, m, n);
    const auto key = static_cast<std::uint64_t>(size);
    const auto heights = vertex::sample_heights(spec, substream(seed, 2 * key)(), n_samples, workers);
    const auto batch =
        dpp::sample_schur_batch(schur_model(variant, zeta, m, n), substream(seed, 2 * key + 1)(), n_samples, workers);
    const double Q = to_double(spec.q);
    EquivalenceInput in;
    in.index = size;
    for (int h : heights) in.samples.push_back(-static_cast<double>(h));
    for (double x = -n - 3.0; x <= 3.0 + 1e-12; x += 0.25) in.grid.push_back(x);
    in.F.assign(in.grid.size(), 0.0);
    parallel_for(in.grid.size(), workers, [&](std::size_t g) {
      double s = 0.0;
      for (const auto& l : batch.partitions) s += phi_column(l, n, in.grid[g], Q, Q);
      in.F[g] = s / static_cast<double>(batch.partitions.size());
    });
    inputs.push_back(std::move(in));
  }
  return equivalence_report(inputs);
}

}  // namespace hs6v::asymptotics
