#pragma once

// Exact symmetric-function engine at small degree: power-sum / monomial
// transitions, the (q,t) scalar product, Macdonald P and Q by Gram-Schmidt,
// specializations given by (alpha, beta, gamma) data, and Schur evaluation.
//
// q and t are fixed rationals for each computation; there is no symbolic
// rational-function field.

#include <map>
#include <vector>

#include <json.hpp>

#include "hs6v/partition.hpp"
#include "hs6v/rational.hpp"

namespace hs6v::symfunc {

inline constexpr int default_degree_cap = 12;

enum class Basis { power_sum, monomial };

/// Homogeneous symmetric function of one degree, as coefficients in a basis.
struct SymPolyExpansion {
  int degree = 0;
  Basis basis = Basis::power_sum;
  std::map<Partition, Rational> coefficients;

  Rational coefficient(const Partition& lambda) const;
};

/// Specialization with finitely many alpha / beta parameters and gamma >= 0.
struct Specialization {
  std::vector<Rational> alphas;
  std::vector<Rational> betas;
  Rational gamma{0};
  Rational q{0};
  Rational t{0};
};

/// p_1(rho), ..., p_D(rho); values[n-1] holds p_n.
struct PowerSumValues {
  std::vector<Rational> values;
  int degree() const { return static_cast<int>(values.size()); }
  const Rational& p(int n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

/// Transition matrices at one degree. Rows and columns follow `index`
/// (reverse lexicographic). p_to_m[i][j] is the coefficient of m_{index[j]}
/// in p_{index[i]}; m_to_p is its inverse.
struct BasisTransition {
  int degree = 0;
  std::vector<Partition> index;
  std::vector<std::vector<Rational>> p_to_m;
  std::vector<std::vector<Rational>> m_to_p;
};

BasisTransition basis_transition(int degree, int degree_cap = default_degree_cap);

/// z_lambda = prod_i i^{m_i} m_i!.
Rational z_lambda(const Partition& lambda);
/// z_lambda * prod_i (1 - q^{lambda_i}) / (1 - t^{lambda_i}).
Rational z_lambda_qt(const Partition& lambda, const Rational& q, const Rational& t);

/// <f, g>_{q,t} for two power-sum expansions of equal degree.
Rational inner_product_qt(const SymPolyExpansion& f, const SymPolyExpansion& g, const Rational& q,
                          const Rational& t);

/// Order in which Gram-Schmidt visits the partitions of one degree. Both
/// are linear extensions of dominance (smaller partitions first).
enum class DominanceExtension {
  lexicographic,  ///< (1^n), (2,1^{n-2}), ..., (n)
  n_statistic,    ///< decreasing n(lambda) = sum (i-1) lambda_i, ties anti-lexicographic
};

struct MacdonaldFunction {
  Partition lambda;
  SymPolyExpansion monomial_form;
  SymPolyExpansion power_sum_form;
};

/// P_lambda(q, t) by Gram-Schmidt of the monomial basis.
MacdonaldFunction macdonald_P(const Partition& lambda, const Rational& q, const Rational& t,
                              int degree_cap = default_degree_cap,
                              DominanceExtension order = DominanceExtension::lexicographic);

/// Q_lambda = P_lambda / <P_lambda, P_lambda>_{q,t}.
MacdonaldFunction macdonald_Q(const Partition& lambda, const Rational& q, const Rational& t,
                              int degree_cap = default_degree_cap);

/// <P_lambda, P_lambda>_{q,t}, i.e. 1 / b_lambda.
Rational macdonald_norm(const Partition& lambda, const Rational& q, const Rational& t,
                        int degree_cap = default_degree_cap);

/// p_n(rho) = sum alpha^n + (-1)^{n-1} (1-q^n)/(1-t^n) sum beta^n + gamma (1-q)/(1-t) [n=1].
PowerSumValues power_sums_of_specialization(const Specialization& rho, int D);

/// p_n(x_1, ..., x_k) for n = 1..D.
PowerSumValues power_sums_of_variables(const std::vector<Rational>& x, int D);

/// Substitutes p_n -> p_n(rho) in a power-sum expansion.
Rational evaluate_symfunc(const SymPolyExpansion& f, const PowerSumValues& p_values);

/// g_0..g_D from power sums through r g_r = sum_k (1-t^k)/(1-q^k) p_k g_{r-k}.
std::vector<Rational> g_series(const PowerSumValues& p_values, const Rational& q, const Rational& t);

/// s_lambda(x) by the Jacobi-Trudi determinant in complete homogeneous h_k(x).
Rational schur_eval(const Partition& lambda, const std::vector<Rational>& x);

/// s_lambda(1^n) by the hook-content formula.
Rational schur_ones(const Partition& lambda, int n);

nlohmann::json to_json(const SymPolyExpansion& f);
SymPolyExpansion expansion_from_json(const nlohmann::json& j);

}  // namespace hs6v::symfunc
