#pragma once

// Trapezoid quadrature on circles for (2 pi i)^{-l} iterated contour
// integrals, and the three contour-integral formulas built on it: q-moments
// of the vertex model height, e_l expectations of Macdonald measures, and
// the Schur-measure correlation kernels.

#include <complex>
#include <functional>
#include <vector>

#include "hs6v/macdonald_measure.hpp"
#include "hs6v/vertex.hpp"

namespace hs6v::contour {

using Complex = std::complex<double>;

struct ContourSpec {
  Complex center;
  double radius = 1.0;
  int nodes = 32;  ///< starting node count per circle; doubled by the solvers
};

struct QuadratureResult {
  Complex value;
  double error_estimate = 0.0;  ///< |difference| between the last two node levels
  int nodes_used = 0;           ///< nodes per circle at the last level
};

inline constexpr int default_node_cap = 4096;
inline constexpr int default_max_l = 3;

/// A union of circles traversed positively. Integrating over it sums the
/// integrals over the individual circles.
using ContourSystem = std::vector<ContourSpec>;

/// Nodes z_k and weights such that sum w_k f(z_k) approximates
/// (2 pi i)^{-1} integral of f(z) dz over the system, with `nodes` points per circle.
struct NodeSet {
  std::vector<Complex> z;
  std::vector<Complex> w;
};
NodeSet circle_nodes(const ContourSystem& contours, int nodes);

/// (2 pi i)^{-l} iterated integral of f over contours[0] x ... x contours[l-1],
/// doubling the node count until successive levels agree within tol.
/// Throws AccuracyError at the node cap.
QuadratureResult circle_quadrature(const std::function<Complex(const std::vector<Complex>&)>& f,
                                   const std::vector<ContourSystem>& contours, double tol,
                                   int node_cap = default_node_cap);

/// Circles enclosing every point of `inside`, excluding every point of
/// `outside`, and such that scale * (contour) does not meet the contour.
/// One circle around all of `inside` when possible, else one per point.
/// Throws ConfigurationError if no separation exists.
ContourSystem separating_contours(const std::vector<double>& inside, const std::vector<Complex>& outside,
                                  double scale);

/// Pointwise single-variable factor of the vertex q-moment integrand (without w^{-1}):
/// prod_x (1 - (s^2/(s xi)) w)/(1 - w/(s xi)) * prod_y (1 - Q u_y w)/(1 - u_y w).
Complex vertex_factor(const vertex::VertexSpec& spec, Complex w);

/// Pointwise single-variable factor of the Macdonald e_l integrand:
/// prod_m (t z - x_m)/(z - x_m) prod_j (1 - alpha_j z)/(1 - t alpha_j z) (1 + q beta_j z)/(1 + beta_j z).
Complex macdonald_factor(const macdonald::MacdonaldSpec& spec, Complex z);

/// Contours used by vertex_moment_contour: around {1/u_y}, away from 0 and
/// every column pole w = s xi, with Q * contour disjoint from the contour.
ContourSystem vertex_default_contours(const vertex::VertexSpec& spec);
/// Contours used by macdonald_moment_contour: around {x_m}, away from 0,
/// 1/(t alpha_j), -1/beta_j, with t * contour disjoint from the contour.
ContourSystem macdonald_default_contours(const macdonald::MacdonaldSpec& spec);

/// E prod_{i=1}^l (Q^h - Q^{i-1}) via the l-fold contour integral
/// Q^{l(l-1)/2} oint prod_{a<b} (w_a - w_b)/(w_a - Q w_b) prod_i vertex_factor(w_i)/w_i.
/// Returns the real part; AccuracyError if the imaginary part exceeds tol.
QuadratureResult vertex_moment_contour(const vertex::VertexSpec& spec, int l, double tol,
                                       int max_l = default_max_l, int node_cap = default_node_cap);

/// E e_l(q^{lambda_1} t^{n-1}, ..., q^{lambda_n}) via
/// (1/l!) oint det[1/(t z_a - z_b)] prod_i macdonald_factor(z_i).
QuadratureResult macdonald_moment_contour(const macdonald::MacdonaldSpec& spec, int l, double tol,
                                          int max_l = default_max_l, int node_cap = default_node_cap);

enum class SchurModel { meixner, krawtchouk };

/// Schur measure of the homogeneous models: weights
/// s_lambda(1^{M-1}) s_lambda(1^N) zeta^{|lambda|} (meixner) or
/// s_{lambda'}(1^{M-1}) s_lambda(1^N) zeta^{|lambda|} (krawtchouk).
struct KernelModel {
  SchurModel model = SchurModel::meixner;
  int M = 2;  ///< M - 1 columns
  int N = 1;
  double zeta = 0.5;
};

/// Radii r1 = (1 + zeta^{-1/2})/2 > 1 > r2 = (1 + zeta^{1/2})/2 of the z and w circles.
std::pair<double, double> kernel_radii(const KernelModel& model);

/// K(x, y) for x in xs, y in ys, from the double contour integral
/// (2 pi i)^{-2} oint oint J(z)/J(w) dz dw / ((z - w) z^{x+1} w^{-y}),
/// J(z) = (1 - sqrt(zeta)/z)^N / (1 - sqrt(zeta) z)^{M-1} (meixner) or
/// (1 + sqrt(zeta) z)^{M-1} (1 - sqrt(zeta)/z)^N (krawtchouk).
/// Entry [i][j] is K(xs[i], ys[j]).
std::vector<std::vector<double>> correlation_kernel_matrix(const KernelModel& model, const std::vector<int>& xs,
                                                           const std::vector<int>& ys, double tol,
                                                           int node_cap = 4096);

/// 1 - K on the same index sets, evaluated without cancellation where K is
/// close to the identity (swapped contours, x + y < 0).
std::vector<std::vector<double>> complement_kernel_matrix(const KernelModel& model, const std::vector<int>& xs,
                                                          const std::vector<int>& ys, double tol,
                                                          int node_cap = 4096);

double correlation_kernel(const KernelModel& model, int x, int y, double tol);

}  // namespace hs6v::contour
