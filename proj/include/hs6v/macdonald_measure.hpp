#pragma once

// Macdonald measures MM(x_1..x_n; rho2)(lambda) = P_lambda(x) Q_lambda(rho2) / Pi
// and direct expectations of bounded observables by truncated summation.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hs6v/partition.hpp"
#include "hs6v/rational.hpp"
#include "hs6v/symfunc.hpp"

namespace hs6v::macdonald {

/// rho1 = (x_1, ..., x_n) and rho2 given by finitely many alphas / betas
/// (gamma must be zero), with the measure's (q, t) stored inside rho2.
struct MacdonaldSpec {
  std::vector<Rational> x;
  symfunc::Specialization rho2;

  int n() const { return static_cast<int>(x.size()); }
  const Rational& q() const { return rho2.q; }
  const Rational& t() const { return rho2.t; }
};

/// Empty iff the spec is valid; otherwise one message per violated constraint.
std::vector<std::string> validate_macdonald_spec(const MacdonaldSpec& spec);
void require_valid(const MacdonaldSpec& spec);

/// Pi(rho1; rho2) in floating point. The alpha part is summed as the
/// exponential of power sums with a geometric tail bound below tol; the
/// beta part is prod (1 + x_i beta_j).
double normalization_Pi(const MacdonaldSpec& spec, double tol = 1e-16);

/// Exact Pi when q = t (Schur case): prod 1/(1 - x_i alpha_j) prod (1 + x_i beta_j).
std::optional<Rational> normalization_Pi_schur(const MacdonaldSpec& spec);

struct MeasureTruncation {
  int D = 0;
  std::map<Partition, double> weights;  ///< l(lambda) <= n, |lambda| <= D
  double tail_mass = 1.0;               ///< 1 - sum of weights, clamped at 0
  double Pi = 1.0;
};

/// Largest D accepted by mm_weights_truncated: one-row weights for n = 1
/// need no Gram-Schmidt and go much further.
inline constexpr int one_row_degree_cap = 512;

MeasureTruncation mm_weights_truncated(const MacdonaldSpec& spec, int D,
                                       int degree_cap = symfunc::default_degree_cap);

/// Truncated expectation and its certified truncation error bound * tail_mass.
struct Expectation {
  double value = 0.0;
  double tail_mass = 1.0;
  int degree = 0;
  double bound = 1.0;  ///< sup |observable|

  double truncation_error() const { return bound * tail_mass; }
};

/// Sums observable(lambda) * weight with D doubled until bound * tail_mass < tol
/// or the degree cap is hit (in which case truncation_error() exceeds tol).
Expectation mm_expect(const MacdonaldSpec& spec, const std::function<double(const Partition&)>& observable,
                      double bound, double tol, int degree_cap = symfunc::default_degree_cap);

/// e_l(q^{lambda_1} t^{n-1}, ..., q^{lambda_n}).
double elementary_observable(const Partition& lambda, int n, int l, double q, double t);

/// prod_{j>=0} (1 + zeta q^{lambda_{n-j}} t^j) / (1 + zeta t^j), with
/// q^{lambda_m} = 0 for m <= 0; in (0, 1].
double qlaplace_observable(const Partition& lambda, int n, double zeta, double q, double t, double tol = 1e-16);

/// prod_{j=1}^n (1 + zeta q^{lambda_j} t^{n-j}).
double match_polynomial_observable(const Partition& lambda, int n, double zeta, double q, double t);

Expectation mm_expect_elementary(const MacdonaldSpec& spec, int l, double tol,
                                 int degree_cap = symfunc::default_degree_cap);

Expectation mm_expect_qlaplace(const MacdonaldSpec& spec, double zeta, double tol,
                               int degree_cap = symfunc::default_degree_cap);

}  // namespace hs6v::macdonald
