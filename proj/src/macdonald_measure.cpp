#include "hs6v/macdonald_measure.hpp"

#include <algorithm>
#include <cmath>

#include "hs6v/errors.hpp"

namespace hs6v::macdonald {

using symfunc::PowerSumValues;

std::vector<std::string> validate_macdonald_spec(const MacdonaldSpec& spec) {
  std::vector<std::string> out;
  if (spec.n() < 1) out.push_back("n must be at least 1");
  for (std::size_t i = 0; i < spec.x.size(); ++i)
    if (spec.x[i] <= 0) out.push_back("x_" + std::to_string(i + 1) + " must be positive");
  for (std::size_t j = 0; j < spec.rho2.alphas.size(); ++j)
    if (spec.rho2.alphas[j] <= 0) out.push_back("alpha_" + std::to_string(j + 1) + " must be positive");
  for (std::size_t j = 0; j < spec.rho2.betas.size(); ++j)
    if (spec.rho2.betas[j] <= 0) out.push_back("beta_" + std::to_string(j + 1) + " must be positive");
  if (spec.rho2.gamma != 0) out.push_back("gamma must be zero for a Macdonald measure specification");
  if (spec.q() < 0 || spec.q() >= 1) out.push_back("q must lie in [0,1)");
  if (spec.t() < 0 || spec.t() >= 1) out.push_back("t must lie in [0,1)");
  for (std::size_t i = 0; i < spec.x.size(); ++i)
    for (std::size_t j = 0; j < spec.rho2.alphas.size(); ++j)
      if (spec.x[i] * spec.rho2.alphas[j] >= 1)
        out.push_back("x_" + std::to_string(i + 1) + " * alpha_" + std::to_string(j + 1) + " >= 1 (divergent Pi)");
  return out;
}

void require_valid(const MacdonaldSpec& spec) {
  auto report = validate_macdonald_spec(spec);
  if (report.empty()) return;
  std::string msg = "invalid Macdonald spec:";
  for (const auto& m : report) msg += " [" + m + "]";
  throw DomainError(msg);
}

double normalization_Pi(const MacdonaldSpec& spec, double tol) {
  require_valid(spec);
  const double q = to_double(spec.q());
  const double t = to_double(spec.t());
  const std::size_t pairs = std::max<std::size_t>(1, spec.x.size() * spec.rho2.alphas.size());
  double log_pi = 0.0;
  for (const auto& xi : spec.x) {
    for (const auto& a : spec.rho2.alphas) {
      const double r = to_double(xi * a);
      // |(1-t^n)/(1-q^n)| <= 1/(1-q), so the tail after n terms is at most
      // r^{n+1} / ((n+1)(1-q)(1-r)).
      double rn = 1.0, qn = 1.0, tn = 1.0;
      for (int n = 1;; ++n) {
        rn *= r;
        qn *= q;
        tn *= t;
        log_pi += (1.0 - tn) / (1.0 - qn) * rn / n;
        const double tail = rn * r / ((n + 1) * (1.0 - q) * (1.0 - r));
        if (tail < tol / static_cast<double>(pairs)) break;
      }
    }
    for (const auto& b : spec.rho2.betas) log_pi += std::log1p(to_double(xi * b));
  }
  return std::exp(log_pi);
}

std::optional<Rational> normalization_Pi_schur(const MacdonaldSpec& spec) {
  require_valid(spec);
  if (spec.q() != spec.t()) return std::nullopt;
  Rational pi(1);
  for (const auto& xi : spec.x) {
    for (const auto& a : spec.rho2.alphas) pi /= 1 - xi * a;
    for (const auto& b : spec.rho2.betas) pi *= 1 + xi * b;
  }
  return pi;
}

namespace {

// Produces the unnormalized weights P_lambda(x) Q_lambda(rho2) one degree at a time.
class WeightStream {
 public:
  WeightStream(const MacdonaldSpec& spec, int degree_cap) : spec_(spec), degree_cap_(degree_cap) {
    require_valid(spec);
    cap_ = spec.n() == 1 ? one_row_degree_cap : degree_cap;
    g_.push_back(Rational(1));
  }

  int cap() const { return cap_; }

  std::vector<std::pair<Partition, Rational>> degree(int d) {
    if (d > cap_)
      throw ResourceError("Macdonald weights: degree " + std::to_string(d) + " exceeds the cap of " +
                          std::to_string(cap_));
    std::vector<std::pair<Partition, Rational>> out;
    if (d == 0) {
      out.emplace_back(Partition{}, Rational(1));
      return out;
    }
    if (spec_.n() == 1) {
      extend_one_row(d);
      out.emplace_back(Partition{d}, pow(spec_.x[0], d) * g_[d]);
      return out;
    }
    ensure_power_sums(d);
    for (const auto& lambda : partitions_of(d, spec_.n())) {
      auto P = symfunc::macdonald_P(lambda, spec_.q(), spec_.t(), degree_cap_);
      const Rational px = symfunc::evaluate_symfunc(P.power_sum_form, p_x_);
      if (px == 0) continue;
      const Rational prho = symfunc::evaluate_symfunc(P.power_sum_form, p_rho_);
      out.emplace_back(lambda, px * prho / symfunc::macdonald_norm(lambda, spec_.q(), spec_.t(), degree_cap_));
    }
    return out;
  }

 private:
  void ensure_power_sums(int d) {
    if (p_x_.degree() >= d) return;
    const int target = std::max(d, std::min(cap_, 2 * p_x_.degree()));
    p_x_ = symfunc::power_sums_of_variables(spec_.x, target);
    p_rho_ = symfunc::power_sums_of_specialization(spec_.rho2, target);
  }

  // One-row weights need g_r(rho2) = Q_(r)(rho2) only:
  // r g_r = sum_k (1-t^k)/(1-q^k) p_k(rho2) g_{r-k}.
  void extend_one_row(int d) {
    const Rational& q = spec_.q();
    const Rational& t = spec_.t();
    while (static_cast<int>(g_.size()) <= d) {
      const int r = static_cast<int>(g_.size());
      Rational pk(0);
      for (const auto& a : spec_.rho2.alphas) pk += pow(a, r);
      Rational pb(0);
      for (const auto& b : spec_.rho2.betas) pb += pow(b, r);
      pk += (r % 2 == 1 ? 1 : -1) * (1 - pow(q, r)) / (1 - pow(t, r)) * pb;
      c_.push_back((1 - pow(t, r)) / (1 - pow(q, r)) * pk);
      Rational s(0);
      for (int k = 1; k <= r; ++k) s += c_[k - 1] * g_[r - k];
      g_.push_back(s / r);
    }
  }

  const MacdonaldSpec& spec_;
  int degree_cap_;
  int cap_;
  PowerSumValues p_x_, p_rho_;
  std::vector<Rational> g_;
  std::vector<Rational> c_;
};

}  // namespace

MeasureTruncation mm_weights_truncated(const MacdonaldSpec& spec, int D, int degree_cap) {
  if (D < 0) throw DomainError("mm_weights_truncated: D must be nonnegative");
  WeightStream stream(spec, degree_cap);
  MeasureTruncation out;
  out.D = D;
  out.Pi = normalization_Pi(spec);
  double total = 0.0;
  for (int d = 0; d <= D; ++d) {
    for (auto& [lambda, w] : stream.degree(d)) {
      const double weight = to_double(w) / out.Pi;
      total += weight;
      out.weights.emplace(lambda, weight);
    }
  }
  out.tail_mass = std::clamp(1.0 - total, 0.0, 1.0);
  return out;
}

Expectation mm_expect(const MacdonaldSpec& spec, const std::function<double(const Partition&)>& observable,
                      double bound, double tol, int degree_cap) {
  WeightStream stream(spec, degree_cap);
  const double pi = normalization_Pi(spec);
  Expectation out;
  out.bound = bound;
  double total = 0.0;
  double value = 0.0;
  for (int d = 0; d <= stream.cap(); ++d) {
    for (auto& [lambda, w] : stream.degree(d)) {
      const double weight = to_double(w) / pi;
      total += weight;
      value += weight * observable(lambda);
    }
    out.degree = d;
    out.tail_mass = std::clamp(1.0 - total, 0.0, 1.0);
    out.value = value;
    if (out.truncation_error() < tol) break;
  }
  return out;
}

double elementary_observable(const Partition& lambda, int n, int l, double q, double t) {
  if (l < 0 || l > n) throw DomainError("elementary observable needs 0 <= l <= n");
  // e[k] over the arguments processed so far.
  std::vector<double> e(static_cast<std::size_t>(l) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double arg = std::pow(q, lambda.part(i)) * std::pow(t, n - i);
    for (int k = l; k >= 1; --k) e[k] += arg * e[k - 1];
  }
  return e[l];
}

double qlaplace_observable(const Partition& lambda, int n, double zeta, double q, double t, double tol) {
  if (!(zeta > 0)) throw DomainError("q-Laplace observable needs zeta > 0");
  double log_value = 0.0;
  for (int j = 0; j < n; ++j) {
    const double tj = std::pow(t, j);
    log_value += std::log1p(zeta * std::pow(q, lambda.part(n - j)) * tj) - std::log1p(zeta * tj);
  }
  if (t > 0) {
    // Remaining factors 1/(1 + zeta t^j), j >= n; log-tail <= zeta t^j / (1 - t).
    double tj = std::pow(t, n);
    while (zeta * tj / (1.0 - t) > tol) {
      log_value -= std::log1p(zeta * tj);
      tj *= t;
    }
  }
  return std::exp(log_value);
}

double match_polynomial_observable(const Partition& lambda, int n, double zeta, double q, double t) {
  double value = 1.0;
  for (int j = 1; j <= n; ++j) value *= 1.0 + zeta * std::pow(q, lambda.part(j)) * std::pow(t, n - j);
  return value;
}

Expectation mm_expect_elementary(const MacdonaldSpec& spec, int l, double tol, int degree_cap) {
  const int n = spec.n();
  if (l < 0 || l > n) throw DomainError("mm_expect_elementary: l must satisfy 0 <= l <= n");
  const double q = to_double(spec.q());
  const double t = to_double(spec.t());
  // Each argument is at most 1, so |e_l| <= binomial(n, l).
  double bound = 1.0;
  for (int i = 0; i < l; ++i) bound = bound * (n - i) / (i + 1);
  return mm_expect(
      spec, [&](const Partition& lambda) { return elementary_observable(lambda, n, l, q, t); }, bound, tol,
      degree_cap);
}

Expectation mm_expect_qlaplace(const MacdonaldSpec& spec, double zeta, double tol, int degree_cap) {
  if (!(zeta > 0)) throw DomainError("mm_expect_qlaplace: zeta must be positive");
  const int n = spec.n();
  const double q = to_double(spec.q());
  const double t = to_double(spec.t());
  return mm_expect(
      spec, [&](const Partition& lambda) { return qlaplace_observable(lambda, n, zeta, q, t, 1e-17); }, 1.0, tol,
      degree_cap);
}

}  // namespace hs6v::macdonald
