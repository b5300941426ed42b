#include "hs6v/symfunc.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <tuple>

#include "hs6v/errors.hpp"

namespace hs6v::symfunc {

Rational SymPolyExpansion::coefficient(const Partition& lambda) const {
  auto it = coefficients.find(lambda);
  return it == coefficients.end() ? Rational(0) : it->second;
}

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// Ways to place the parts of lambda into the ordered rows of mu so that
// row j sums to mu_j: the coefficient of m_mu in p_lambda.
long long count_placements(const std::vector<int>& parts, std::size_t idx, std::vector<int>& remaining,
                           std::map<std::pair<std::size_t, std::vector<int>>, long long>& memo) {
  if (idx == parts.size()) {
    for (int r : remaining)
      if (r != 0) return 0;
    return 1;
  }
  auto key = std::make_pair(idx, remaining);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  long long total = 0;
  for (std::size_t j = 0; j < remaining.size(); ++j) {
    if (remaining[j] >= parts[idx]) {
      remaining[j] -= parts[idx];
      total += count_placements(parts, idx + 1, remaining, memo);
      remaining[j] += parts[idx];
    }
  }
  memo.emplace(std::move(key), total);
  return total;
}

Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw DomainError("basis transition matrix is singular");
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational scale = 1 / a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] *= scale;
      inv[col][k] *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        if (a[col][k] != 0) a[r][k] -= f * a[col][k];
        if (inv[col][k] != 0) inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

void check_qt(const Rational& q, const Rational& t) {
  if (q == 1 || t == 1) throw DomainError("(q,t) scalar product undefined at q=1 or t=1");
}

// Power-sum coordinates of every P_lambda at one degree, indexed like
// BasisTransition::index, together with <P_lambda, P_lambda>.
struct MacdonaldFamily {
  std::shared_ptr<const BasisTransition> transition;
  std::vector<std::vector<Rational>> p_coords;
  std::vector<Rational> norms;
};

std::shared_ptr<const BasisTransition> cached_transition(int degree, int degree_cap) {
  if (degree > degree_cap)
    throw ResourceError("symmetric function degree " + std::to_string(degree) + " exceeds the cap of " +
                        std::to_string(degree_cap));
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const BasisTransition>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(degree); it != cache.end()) return it->second;
  }
  auto computed = std::make_shared<const BasisTransition>(basis_transition(degree, degree_cap));
  std::lock_guard lock(mutex);
  return cache.emplace(degree, computed).first->second;
}

int n_statistic(const Partition& p) {
  int s = 0;
  for (int i = 1; i <= p.length(); ++i) s += (i - 1) * p.part(i);
  return s;
}

std::vector<std::size_t> extension_order(const std::vector<Partition>& index, DominanceExtension order) {
  // index is reverse lexicographic, so reading it backwards is lexicographic.
  std::vector<std::size_t> seq(index.size());
  for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = index.size() - 1 - i;
  if (order == DominanceExtension::n_statistic) {
    std::stable_sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) {
      const int na = n_statistic(index[a]);
      const int nb = n_statistic(index[b]);
      if (na != nb) return na > nb;
      return index[a] > index[b];
    });
  }
  return seq;
}

std::shared_ptr<const MacdonaldFamily> compute_family(int degree, const Rational& q, const Rational& t,
                                                      int degree_cap, DominanceExtension order) {
  auto tr = cached_transition(degree, degree_cap);
  const std::size_t n = tr->index.size();
  std::vector<Rational> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = z_lambda_qt(tr->index[i], q, t);
  auto dot = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s(0);
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != 0 && b[i] != 0) s += a[i] * b[i] * z[i];
    return s;
  };

  auto fam = std::make_shared<MacdonaldFamily>();
  fam->transition = tr;
  fam->p_coords.assign(n, {});
  fam->norms.assign(n, Rational(0));
  std::vector<std::size_t> done;
  for (std::size_t k : extension_order(tr->index, order)) {
    const std::vector<Rational>& m_lambda = tr->m_to_p[k];
    std::vector<Rational> v = m_lambda;
    for (std::size_t j : done) {
      const Rational c = dot(m_lambda, fam->p_coords[j]) / fam->norms[j];
      if (c == 0) continue;
      for (std::size_t i = 0; i < n; ++i)
        if (fam->p_coords[j][i] != 0) v[i] -= c * fam->p_coords[j][i];
    }
    fam->norms[k] = dot(v, v);
    fam->p_coords[k] = std::move(v);
    done.push_back(k);
  }
  return fam;
}

std::shared_ptr<const MacdonaldFamily> cached_family(int degree, const Rational& q, const Rational& t,
                                                     int degree_cap, DominanceExtension order) {
  check_qt(q, t);
  using Key = std::tuple<int, std::string, std::string, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const MacdonaldFamily>> cache;
  Key key{degree, q.get_str(), t.get_str(), static_cast<int>(order)};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto fam = compute_family(degree, q, t, degree_cap, order);
  std::lock_guard lock(mutex);
  return cache.emplace(key, fam).first->second;
}

MacdonaldFunction make_function(const MacdonaldFamily& fam, std::size_t k, const Rational& scale) {
  const BasisTransition& tr = *fam.transition;
  const std::size_t n = tr.index.size();
  MacdonaldFunction out;
  out.lambda = tr.index[k];
  out.power_sum_form.degree = out.monomial_form.degree = tr.degree;
  out.power_sum_form.basis = Basis::power_sum;
  out.monomial_form.basis = Basis::monomial;
  std::vector<Rational> m_coords(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& c = fam.p_coords[k][i];
    if (c == 0) continue;
    out.power_sum_form.coefficients.emplace(tr.index[i], c * scale);
    for (std::size_t j = 0; j < n; ++j)
      if (tr.p_to_m[i][j] != 0) m_coords[j] += c * tr.p_to_m[i][j];
  }
  for (std::size_t j = 0; j < n; ++j)
    if (m_coords[j] != 0) out.monomial_form.coefficients.emplace(tr.index[j], m_coords[j] * scale);
  return out;
}

std::size_t index_of(const BasisTransition& tr, const Partition& lambda) {
  auto it = std::find(tr.index.begin(), tr.index.end(), lambda);
  return static_cast<std::size_t>(it - tr.index.begin());
}

Rational determinant(Matrix a) {
  const std::size_t n = a.size();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  return det;
}

}  // namespace

BasisTransition basis_transition(int degree, int degree_cap) {
  if (degree < 0) throw DomainError("basis_transition: negative degree");
  if (degree > degree_cap)
    throw ResourceError("basis_transition: degree " + std::to_string(degree) + " exceeds the cap of " +
                        std::to_string(degree_cap));
  BasisTransition tr;
  tr.degree = degree;
  tr.index = partitions_of(degree);
  const std::size_t n = tr.index.size();
  tr.p_to_m.assign(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Only coarsenings of lambda (which dominate it) can appear.
      if (!tr.index[j].dominates(tr.index[i])) continue;
      std::vector<int> remaining = tr.index[j].parts();
      std::map<std::pair<std::size_t, std::vector<int>>, long long> memo;
      tr.p_to_m[i][j] = Rational(static_cast<long>(count_placements(tr.index[i].parts(), 0, remaining, memo)));
    }
  }
  tr.m_to_p = invert(tr.p_to_m);
  return tr;
}

Rational z_lambda(const Partition& lambda) {
  mpz_class z = 1;
  auto m = lambda.multiplicities();
  for (std::size_t i = 1; i < m.size(); ++i) {
    for (int k = 0; k < m[i]; ++k) z *= static_cast<unsigned long>(i);
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m[i]));
    z *= f;
  }
  return Rational(z);
}

Rational z_lambda_qt(const Partition& lambda, const Rational& q, const Rational& t) {
  check_qt(q, t);
  Rational z = z_lambda(lambda);
  for (int part : lambda.parts()) z *= (1 - pow(q, part)) / (1 - pow(t, part));
  return z;
}

Rational inner_product_qt(const SymPolyExpansion& f, const SymPolyExpansion& g, const Rational& q,
                          const Rational& t) {
  check_qt(q, t);
  if (f.basis != Basis::power_sum || g.basis != Basis::power_sum)
    throw DomainError("inner_product_qt expects power-sum expansions");
  if (f.degree != g.degree) return Rational(0);
  Rational s(0);
  for (const auto& [lambda, c] : f.coefficients) {
    auto it = g.coefficients.find(lambda);
    if (it != g.coefficients.end()) s += c * it->second * z_lambda_qt(lambda, q, t);
  }
  return s;
}

MacdonaldFunction macdonald_P(const Partition& lambda, const Rational& q, const Rational& t, int degree_cap,
                              DominanceExtension order) {
  auto fam = cached_family(lambda.size(), q, t, degree_cap, order);
  return make_function(*fam, index_of(*fam->transition, lambda), Rational(1));
}

MacdonaldFunction macdonald_Q(const Partition& lambda, const Rational& q, const Rational& t, int degree_cap) {
  auto fam = cached_family(lambda.size(), q, t, degree_cap, DominanceExtension::lexicographic);
  const std::size_t k = index_of(*fam->transition, lambda);
  return make_function(*fam, k, 1 / fam->norms[k]);
}

Rational macdonald_norm(const Partition& lambda, const Rational& q, const Rational& t, int degree_cap) {
  auto fam = cached_family(lambda.size(), q, t, degree_cap, DominanceExtension::lexicographic);
  return fam->norms[index_of(*fam->transition, lambda)];
}

PowerSumValues power_sums_of_specialization(const Specialization& rho, int D) {
  if (D < 0) throw DomainError("power_sums_of_specialization: negative degree");
  PowerSumValues out;
  for (int n = 1; n <= D; ++n) {
    Rational p(0);
    for (const auto& a : rho.alphas) p += pow(a, n);
    if (!rho.betas.empty()) {
      check_qt(rho.q, rho.t);
      Rational b(0);
      for (const auto& beta : rho.betas) b += pow(beta, n);
      const Rational ratio = (1 - pow(rho.q, n)) / (1 - pow(rho.t, n));
      p += (n % 2 == 1 ? 1 : -1) * ratio * b;
    }
    if (n == 1 && rho.gamma != 0) {
      check_qt(rho.q, rho.t);
      p += rho.gamma * (1 - rho.q) / (1 - rho.t);
    }
    out.values.push_back(p);
  }
  return out;
}

PowerSumValues power_sums_of_variables(const std::vector<Rational>& x, int D) {
  PowerSumValues out;
  std::vector<Rational> powers(x.size(), Rational(1));
  for (int n = 1; n <= D; ++n) {
    Rational p(0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      powers[i] *= x[i];
      p += powers[i];
    }
    out.values.push_back(p);
  }
  return out;
}

Rational evaluate_symfunc(const SymPolyExpansion& f, const PowerSumValues& p_values) {
  if (f.basis != Basis::power_sum) throw DomainError("evaluate_symfunc expects a power-sum expansion");
  if (f.degree > p_values.degree())
    throw DomainError("evaluate_symfunc: expansion degree " + std::to_string(f.degree) +
                      " exceeds the available power sums (" + std::to_string(p_values.degree()) + ")");
  Rational total(0);
  for (const auto& [lambda, c] : f.coefficients) {
    Rational term = c;
    for (int part : lambda.parts()) term *= p_values.p(part);
    total += term;
  }
  return total;
}

std::vector<Rational> g_series(const PowerSumValues& p_values, const Rational& q, const Rational& t) {
  check_qt(q, t);
  const int D = p_values.degree();
  std::vector<Rational> g(static_cast<std::size_t>(D) + 1, Rational(0));
  g[0] = 1;
  std::vector<Rational> c(static_cast<std::size_t>(D) + 1);
  for (int k = 1; k <= D; ++k) c[k] = (1 - pow(t, k)) / (1 - pow(q, k)) * p_values.p(k);
  for (int r = 1; r <= D; ++r) {
    Rational s(0);
    for (int k = 1; k <= r; ++k) s += c[k] * g[r - k];
    g[r] = s / r;
  }
  return g;
}

Rational schur_eval(const Partition& lambda, const std::vector<Rational>& x) {
  const int len = lambda.length();
  if (len == 0) return Rational(1);
  const int kmax = lambda.part(1) + len;
  // h[k] over the variables processed so far.
  std::vector<Rational> h(static_cast<std::size_t>(kmax) + 1, Rational(0));
  h[0] = 1;
  for (const auto& xi : x) {
    for (int k = 1; k <= kmax; ++k) h[k] += xi * h[k - 1];
  }
  Matrix jt(len, std::vector<Rational>(len, Rational(0)));
  for (int i = 0; i < len; ++i) {
    for (int j = 0; j < len; ++j) {
      const int k = lambda.part(i + 1) - (i + 1) + (j + 1);
      if (k >= 0 && k <= kmax) jt[i][j] = h[k];
    }
  }
  return determinant(std::move(jt));
}

Rational schur_ones(const Partition& lambda, int n) {
  Rational value(1);
  const Partition dual = lambda.dual();
  for (int i = 1; i <= lambda.length(); ++i) {
    for (int j = 1; j <= lambda.part(i); ++j) {
      const int hook = lambda.part(i) - j + dual.part(j) - i + 1;
      value *= Rational(n + j - i, hook);
    }
  }
  value.canonicalize();
  return value;
}

nlohmann::json to_json(const SymPolyExpansion& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [lambda, c] : f.coefficients)
    terms.push_back({{"partition", lambda.parts()}, {"value", to_string(c)}});
  return {{"degree", f.degree},
          {"basis", f.basis == Basis::power_sum ? "power_sum" : "monomial"},
          {"coefficients", terms}};
}

SymPolyExpansion expansion_from_json(const nlohmann::json& j) {
  SymPolyExpansion f;
  f.degree = j.at("degree").get<int>();
  const std::string basis = j.at("basis").get<std::string>();
  if (basis == "power_sum")
    f.basis = Basis::power_sum;
  else if (basis == "monomial")
    f.basis = Basis::monomial;
  else
    throw DomainError("unknown basis '" + basis + "'");
  for (const auto& term : j.at("coefficients")) {
    Partition lambda(term.at("partition").get<std::vector<int>>());
    if (lambda.size() != f.degree) throw DomainError("coefficient partition size differs from the degree");
    f.coefficients.emplace(std::move(lambda), parse_rational(term.at("value").get<std::string>()));
  }
  return f;
}

}  // namespace hs6v::symfunc
