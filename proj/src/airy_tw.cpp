#include "hs6v/airy_tw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>

#include "hs6v/errors.hpp"
#include "hs6v/parallel.hpp"

namespace hs6v::airy {

namespace {

using ld = long double;

constexpr ld ai0 = 0.355028053887817239260063186004183176L;   // Ai(0)
constexpr ld aip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
constexpr double series_limit = 8.0;

// Maclaurin pieces f, f', g, g' with Ai = c1 f - c2 g, Bi = sqrt3 (c1 f + c2 g).
struct SeriesPair {
  ld f, fp, g, gp;
};

SeriesPair maclaurin(double xd) {
  const ld x = xd;
  const ld x3 = x * x * x;
  SeriesPair s{1, 0, x, 1};
  ld tf = 1, tg = x, tfp = x * x / 2, tgp = 1;
  s.fp = tfp;
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3 * k - 1) * static_cast<ld>(3 * k));
    tg *= x3 / ((3 * k) * static_cast<ld>(3 * k + 1));
    tgp *= x3 / ((3 * k) * static_cast<ld>(3 * k - 2));
    if (k >= 2) {
      tfp *= x3 / ((3 * k - 3) * static_cast<ld>(3 * k - 1));
      s.fp += tfp;
    }
    s.f += tf;
    s.g += tg;
    s.gp += tgp;
    const ld scale = 1 + std::fabs(s.f) + std::fabs(s.g) + std::fabs(s.fp) + std::fabs(s.gp);
    if (std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp) < 1e-22L * scale && k > 3) break;
  }
  return s;
}

// u_k and v_k of the standard asymptotic expansions.
struct AsymptoticCoefficients {
  std::vector<ld> u, v;
  AsymptoticCoefficients() {
    u.push_back(1);
    v.push_back(1);
    for (int k = 1; k < 60; ++k) {
      u.push_back(u.back() * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (static_cast<ld>(2 * k - 1) * 216 * k));
      v.push_back(-u.back() * (6 * k + 1) / (6 * k - 1));
    }
  }
};

const AsymptoticCoefficients& coefficients() {
  static const AsymptoticCoefficients c;
  return c;
}

// Sum of sign^k c[k] / z^k over k = start, start + step, ..., stopping at the smallest term.
ld asymptotic_sum(const std::vector<ld>& c, ld z, int start, int step, bool alternate) {
  ld sum = 0, prev = INFINITY;
  int sign = 1;
  for (std::size_t k = start; k < c.size(); k += step) {
    const ld term = c[k] / std::pow(z, static_cast<ld>(k));
    if (std::fabs(term) > prev) break;
    sum += sign * term;
    prev = std::fabs(term);
    if (prev < 1e-21L * std::fabs(sum)) break;
    if (alternate) sign = -sign;
  }
  return sum;
}

AiryValue asymptotic_ai(double xd) {
  const auto& c = coefficients();
  const ld x = xd;
  const ld pi = std::numbers::pi_v<ld>;
  if (x > 0) {
    const ld z = 2 * x * std::sqrt(x) / 3;
    const ld e = std::exp(-z);
    const ld q = std::pow(x, 0.25L);
    const ld su = asymptotic_sum(c.u, z, 0, 1, true);
    const ld sv = asymptotic_sum(c.v, z, 0, 1, true);
    return {static_cast<double>(e / (2 * std::sqrt(pi) * q) * su),
            static_cast<double>(-q * e / (2 * std::sqrt(pi)) * sv)};
  }
  const ld ax = -x;
  const ld z = 2 * ax * std::sqrt(ax) / 3;
  const ld q = std::pow(ax, 0.25L);
  const ld th = z + pi / 4;
  const ld u_even = asymptotic_sum(c.u, z, 0, 2, true);
  const ld u_odd = asymptotic_sum(c.u, z, 1, 2, true);
  const ld v_even = asymptotic_sum(c.v, z, 0, 2, true);
  const ld v_odd = asymptotic_sum(c.v, z, 1, 2, true);
  const ld ai = (std::sin(th) * u_even - std::cos(th) * u_odd) / (std::sqrt(pi) * q);
  const ld aip = -q * (std::cos(th) * v_even + std::sin(th) * v_odd) / std::sqrt(pi);
  return {static_cast<double>(ai), static_cast<double>(aip)};
}

}  // namespace

AiryValue airy_ai(double x) {
  if (!(std::abs(x) <= airy_range)) throw DomainError("airy_ai: |x| must be at most 40");
  if (std::abs(x) > series_limit) return asymptotic_ai(x);
  const auto s = maclaurin(x);
  return {static_cast<double>(ai0 * s.f - aip0 * s.g), static_cast<double>(ai0 * s.fp - aip0 * s.gp)};
}

AiryValue airy_bi(double x) {
  if (!(std::abs(x) <= series_limit)) throw DomainError("airy_bi: |x| must be at most 8");
  const auto s = maclaurin(x);
  const ld r3 = std::sqrt(3.0L);
  return {static_cast<double>(r3 * (ai0 * s.f + aip0 * s.g)), static_cast<double>(r3 * (ai0 * s.fp + aip0 * s.gp))};
}

double airy_kernel(double x, double y) {
  const auto a = airy_ai(x);
  if (x == y) return a.derivative * a.derivative - x * a.value * a.value;
  const auto b = airy_ai(y);
  return (a.value * b.derivative - a.derivative * b.value) / (x - y);
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order, double a, double b) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  std::vector<double> nodes(order), weights(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    ld z = std::cos(std::numbers::pi_v<ld> * (i + 0.75L) / (order + 0.5L));
    ld dp = 0;
    for (int it = 0; it < 100; ++it) {
      ld p0 = 1, p1 = z;
      for (int k = 2; k <= order; ++k) {
        const ld p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1;
      dp = order * (z * p1 - p0) / (z * z - 1);
      const ld step = p1 / dp;
      z -= step;
      if (std::fabs(step) < 1e-19L) break;
    }
    if (order == 1) {
      z = 0;
      dp = 1;
    }
    const ld w = 2 / ((1 - z * z) * dp * dp);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    nodes[i] = static_cast<double>(mid - half * z);
    nodes[order - 1 - i] = static_cast<double>(mid + half * z);
    weights[i] = weights[order - 1 - i] = static_cast<double>(w * half);
  }
  return {nodes, weights};
}

double fgue_nystrom(double s, int order) {
  const double b = std::max(s, fgue_cutoff);
  if (b <= s) return 1.0;
  const auto [x, w] = gauss_legendre(order, s, b);
  std::vector<AiryValue> ai(order);
  for (int i = 0; i < order; ++i) ai[i] = airy_ai(x[i]);
  Eigen::MatrixXd m(order, order);
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      double k;
      if (i == j)
        k = ai[i].derivative * ai[i].derivative - x[i] * ai[i].value * ai[i].value;
      else
        k = (ai[i].value * ai[j].derivative - ai[i].derivative * ai[j].value) / (x[i] - x[j]);
      m(i, j) = (i == j ? 1.0 : 0.0) - std::sqrt(w[i] * w[j]) * k;
    }
  }
  return m.partialPivLu().determinant();
}

double tracy_widom_fgue(double s, int order, double tol) {
  if (s < -10.0) throw DomainError("tracy_widom_fgue: s must be at least -10");
  if (order < 20 || order > 200) throw DomainError("tracy_widom_fgue: order must lie in [20, 200]");
  const double coarse = fgue_nystrom(s, order);
  const double fine = fgue_nystrom(s, 2 * order);
  if (std::abs(fine - coarse) > tol)
    throw AccuracyError("F_GUE did not stabilize under order doubling", fine, std::abs(fine - coarse));
  return std::clamp(fine, 0.0, 1.0);
}

double TWTable::cdf(double s) const {
  if (grid.empty()) return 0.0;
  if (s <= grid.front()) return s < grid.front() ? 0.0 : values.front();
  if (s >= grid.back()) return 1.0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - grid.begin());
  const double t = (s - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return values[j - 1] + t * (values[j] - values[j - 1]);
}

std::pair<double, double> TWTable::moments() const {
  // E X = [s F] - int F, E X^2 = [s^2 F] - 2 int s F, integrals by Simpson
  // (trapezoid on a leftover interval).
  const std::size_t n = grid.size();
  if (n < 3) throw DomainError("TWTable::moments: need at least three grid points");
  auto integrate = [&](auto f) {
    double total = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2)
      total += (grid[i + 2] - grid[i]) / 6.0 * (f(i) + 4 * f(i + 1) + f(i + 2));
    if (i + 1 < n) total += 0.5 * (grid[i + 1] - grid[i]) * (f(i) + f(i + 1));
    return total;
  };
  const double a = grid.front(), b = grid.back();
  const double fa = values.front(), fb = values.back();
  const double i0 = integrate([&](std::size_t i) { return values[i]; });
  const double i1 = integrate([&](std::size_t i) { return grid[i] * values[i]; });
  const double mass = fb - fa;
  const double m1 = (b * fb - a * fa - i0) / mass;
  const double m2 = (b * b * fb - a * a * fa - 2 * i1) / mass;
  return {m1, m2 - m1 * m1};
}

TWTable tw_table(int points, double lo, double hi, int order, unsigned workers) {
  if (points < 2 || !(hi > lo)) throw DomainError("tw_table: need at least two points on a proper interval");
  TWTable t;
  t.order = order;
  t.lo = lo;
  t.hi = hi;
  t.grid.resize(points);
  t.values.resize(points);
  for (int i = 0; i < points; ++i) t.grid[i] = lo + (hi - lo) * i / (points - 1);
  parallel_for(points, workers,
               [&](std::size_t i) { t.values[i] = std::clamp(fgue_nystrom(t.grid[i], order), 0.0, 1.0); });
  return t;
}

void write_csv(const TWTable& table, std::ostream& out) {
  out << "s,F_GUE\n";
  out.precision(17);
  for (std::size_t i = 0; i < table.grid.size(); ++i) out << table.grid[i] << ',' << table.values[i] << '\n';
}

}  // namespace hs6v::airy
