#pragma once

// Edge asymptotics of the homogeneous vertex models: the action G(z), its
// double critical point, the limit shape H(mu, nu), spread and asymptotic
// equivalence diagnostics, and Monte Carlo Tracy-Widom experiments.

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hs6v/airy_tw.hpp"
#include "hs6v/partition.hpp"
#include "hs6v/rational.hpp"
#include "hs6v/vertex.hpp"

namespace hs6v::asymptotics {

/// spin_half: s = Q^{-1/2}; negative_s: s = -Q^{1/2}. Both with xi = 1.
enum class ModelVariant { spin_half, negative_s };

std::string to_string(ModelVariant v);
ModelVariant variant_from_string(const std::string& s);

/// d^k/dz^k of G(z) = -mu ln(1 - sqrt(zeta) z) + nu ln(1 - sqrt(zeta)/z) - c ln z
/// (spin_half) or mu ln(1 + sqrt(zeta) z) + nu ln(1 - sqrt(zeta)/z) - c ln z
/// (negative_s), k = 0..3. Principal logarithms for k = 0; DomainError on a
/// branch cut of the first two logarithms (k = 0) or at a singular point.
std::complex<double> action_G(std::complex<double> z, double mu, double nu, double zeta, double c,
                              ModelVariant variant, int derivative_order);

struct Certificate {
  double g1 = 0.0;             ///< |G'(z_c)| at the reported (z_c, x_c)
  double g2 = 0.0;             ///< |G''(z_c)|
  double sigma_residual = 0.0; ///< |sigma + z_c (G'''(z_c)/2)^{1/3}| / sigma
  double z_closed_form = 0.0;  ///< z_c from the closed form
  double z_deviation = 0.0;    ///< |z_closed_form - z_c|
  double x_deviation = 0.0;    ///< |x_c from the closed form - x_c from the root|
};

struct CriticalData {
  ModelVariant variant = ModelVariant::spin_half;
  double mu = 1.0, nu = 1.0, zeta = 0.25;
  double x_c = 0.0;    ///< left edge, in units of L
  double z_c = 0.0;    ///< double critical point
  double sigma = 0.0;  ///< fluctuation scale
  double H = 0.0;      ///< limit shape
  Certificate certificate;
};

/// Throws DomainError outside the open admissible cone (zeta < mu/nu < 1/zeta
/// for spin_half, mu/nu < 1/zeta for negative_s) and AccuracyError when the
/// certificate exceeds 1e-10 (or 1e-8 for the closed-form comparison).
/// z_c comes from solving G' = G'' = 0 numerically; for spin_half it must
/// agree with the closed form, for negative_s the deviation from the closed-form
/// formula is only recorded.
CriticalData critical_data(double mu, double nu, double zeta, ModelVariant variant);

/// Piecewise limit shape including the frozen regions.
double limit_shape_H(double mu, double nu, double zeta, ModelVariant variant);

/// Closed-form fluctuation scale sigma_{mu,nu}.
double sigma_formula(double mu, double nu, double zeta, ModelVariant variant);

/// sup_x P{x < eta <= x + 1} of the empirical distribution (exact).
double spread_metric(std::vector<double> samples);

/// sup_x (F(x + 1) - F(x)) over x in [lo, hi] on a grid of step <= grid_step.
double spread_metric(const std::function<double(double)>& F, double lo, double hi, double grid_step);

/// prod_{i>=0} 1/(1 + Q^{x+i}).
double phi_product_q(double x, double Q, double tol = 1e-16);

/// prod_{j>=0} (1 + q^{lambda_{n-j}} t^{j+x}) / (1 + t^{j+x}), q^{lambda_m} = 0 for m <= 0.
double phi_column(const Partition& lambda, int n, double x, double q, double t, double tol = 1e-16);

/// prod_{0 <= j < -x} q^{lambda_{n-j}}, q^{lambda_m} = 0 for m <= 0, empty product 1.
double phi_t_zero(const Partition& lambda, int n, double x, double q);

/// prod_{j in J} 1/(1 + q^{x+j}), where J holds `finite` plus every j >= tail_from
/// (no tail when tail_from < 0).
double phi_min_set(const std::vector<int>& finite, double x, double q, int tail_from = -1, double tol = 1e-16);

/// Z_{>=0} minus {lambda_n, lambda_{n-1} + 1, ..., lambda_1 + n - 1}, as
/// (finite part below lambda_1 + n, tail start lambda_1 + n).
std::pair<std::vector<int>, int> column_set(const Partition& lambda, int n);

struct EquivalenceInput {
  double index = 0.0;
  std::vector<double> samples;  ///< draws of eta_n
  std::vector<double> grid;     ///< increasing evaluation points
  std::vector<double> F;        ///< F_n on the grid
};

struct EquivalenceRow {
  double index = 0.0;
  double spread_lhs = 0.0;
  double spread_rhs = 0.0;
  double sup_distance = 0.0;  ///< sup over the grid of |P{eta <= x} - F(x)|
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  bool sup_distance_decreasing = false;  ///< strictly along the sequence
  bool spreads = false;                  ///< both spread metrics strictly decrease
};

EquivalenceReport equivalence_report(const std::vector<EquivalenceInput>& inputs);

/// Homogeneous vertex spec with Q = sqrt_q^2, xi = 1, u = 1/(zeta sqrt_q),
/// m - 1 columns and n rows.
vertex::VertexSpec homogeneous_spec(ModelVariant variant, const Rational& zeta, const Rational& sqrt_q, int m,
                                    int n);

struct TWExperimentConfig {
  ModelVariant variant = ModelVariant::spin_half;
  Rational zeta{1, 4};
  Rational sqrt_q{1, 2};
  double mu = 1.0;
  double nu = 1.0;
  std::vector<int> L_list{100, 256};
  std::size_t n_samples = 5000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool keep_samples = false;
};

struct TWExperimentRow {
  int L = 0;
  int M = 0;
  int N = 0;
  std::size_t n_samples = 0;
  double mean_h_over_L = 0.0;
  double H_target = 0.0;
  double sigma = 0.0;
  double ks_distance = 0.0;
  std::vector<double> rescaled;  ///< -(h - H L)/(sigma L^{1/3}) when keep_samples
};

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and a
/// continuous cdf F.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& F);

/// For each L: n_samples draws of h(ceil(mu L), ceil(nu L)), rescaled by
/// chi = (h - H L)/(sigma L^{1/3}); since P{chi >= -x} -> F_GUE(x), the KS
/// distance is between the law of -chi and F_GUE. Batch for L uses the
/// seed derived from (seed, L).
std::vector<TWExperimentRow> tw_experiment(const TWExperimentConfig& config, const airy::TWTable& table);

/// "L,M,N,n_samples,mean_h_over_L,H_target,sigma,ks_distance".
void write_csv(const std::vector<TWExperimentRow>& rows, std::ostream& out);

struct CrossModelRow {
  double zeta_observable = 0.0;
  double vertex_mean = 0.0, vertex_se = 0.0;
  double schur_mean = 0.0, schur_se = 0.0;
  double z_score = 0.0;
};

/// Monte Carlo of both sides of E prod 1/(1 + z Q^{h+i}) = E prod (1 + z q^{lambda_{N-j}} t^j)/(1 + z t^j)
/// for the homogeneous pair with q = t = Q (a Schur measure), M - 1 = N = size.
std::vector<CrossModelRow> cross_model_qlaplace(ModelVariant variant, const Rational& zeta, const Rational& sqrt_q,
                                                int size, const std::vector<double>& observable_zetas,
                                                std::size_t n_samples, std::uint64_t seed, unsigned workers = 1);

/// Equivalence series for eta = -h(M, N) against F(x) = E_Schur phi_column(lambda, N, x)
/// with q = t = Q, at M - 1 = N = each size.
EquivalenceReport vertex_schur_equivalence(ModelVariant variant, const Rational& zeta, const Rational& sqrt_q,
                                           const std::vector<int>& sizes, std::size_t n_samples, std::uint64_t seed,
                                           unsigned workers = 1);

}  // namespace hs6v::asymptotics
