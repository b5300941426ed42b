#pragma once

// Airy function, Airy kernel and the GUE Tracy-Widom distribution
// F_GUE(s) = det(1 - K_Airy) on L^2(s, infinity).

#include <iosfwd>
#include <utility>
#include <vector>

namespace hs6v::airy {

inline constexpr double airy_range = 40.0;

struct AiryValue {
  double value = 0.0;       ///< Ai(x)
  double derivative = 0.0;  ///< Ai'(x)
};

/// Ai and Ai' for |x| <= 40: Maclaurin series in extended precision for
/// |x| <= 8, asymptotic expansions beyond. DomainError outside the range.
AiryValue airy_ai(double x);

/// Bi and Bi' from the Maclaurin series, |x| <= 8.
AiryValue airy_bi(double x);

/// (Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y); Ai'(x)^2 - x Ai(x)^2 on the diagonal.
double airy_kernel(double x, double y);

/// Gauss-Legendre nodes and weights on [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order, double a, double b);

/// Right end of the truncated interval: K_Airy(x, x) < 1e-16 beyond it.
inline constexpr double fgue_cutoff = 12.0;

/// det(1 - K_Airy) on L^2(s, max(s, cutoff)) by Nystrom discretization with
/// `order` Gauss-Legendre points. No convergence check.
double fgue_nystrom(double s, int order);

/// F_GUE(s) at `order`, checked against 2 * order; AccuracyError if they
/// differ by more than tol. Requires s >= -10 and order in [20, 200].
double tracy_widom_fgue(double s, int order = 80, double tol = 1e-8);

struct TWTable {
  std::vector<double> grid;
  std::vector<double> values;
  int order = 80;
  double lo = -8.0;
  double hi = 4.0;

  /// Linear interpolation; 0 left of the grid, 1 right of it.
  double cdf(double s) const;
  /// Mean and variance of the distribution restricted to [lo, hi].
  std::pair<double, double> moments() const;
};

/// F_GUE on `points` equispaced points of [lo, hi] at the given order.
TWTable tw_table(int points = 601, double lo = -8.0, double hi = 4.0, int order = 80, unsigned workers = 1);

/// "s,F_GUE" header then one row per grid point.
void write_csv(const TWTable& table, std::ostream& out);

}  // namespace hs6v::airy
