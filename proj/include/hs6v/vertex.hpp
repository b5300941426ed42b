#pragma once

// Stochastic higher-spin six vertex model in a quadrant with step boundary
// data: one path enters from the left at every row, none from the bottom.
//
// Column x carries spin data (s_x, xi_x) and row y a rapidity u_y. Only the
// combinations s_x^2, s_x*xi_x and sign(s_x) ever enter the weights or the
// moment formula, so that is what ColumnParams stores; it keeps every
// quantity rational even when s_x = Q^{-m/2} is not.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hs6v/random.hpp"
#include "hs6v/rational.hpp"

namespace hs6v::vertex {

enum class SpinSign { positive = 1, negative = -1 };

struct ColumnParams {
  Rational s_squared;           ///< s_x^2
  Rational s_xi;                ///< s_x * xi_x
  SpinSign sign = SpinSign::positive;
  std::optional<int> capacity;  ///< m when s_x = Q^{-m/2}; empty when s_x < 0
};

struct VertexSpec {
  Rational q;                        ///< Q in (0, 1)
  std::vector<ColumnParams> columns; ///< M - 1 columns
  std::vector<Rational> u;           ///< N row rapidities

  int M() const { return static_cast<int>(columns.size()) + 1; }
  int N() const { return static_cast<int>(u.size()); }
};

/// Column with s = Q^{-m/2}: s^2 = Q^{-m}, s*xi given, capacity m.
ColumnParams positive_column(const Rational& q, int m, const Rational& s_xi);
/// Column with s in (-1, 0): s^2 in (0, 1), s*xi < 0, unbounded capacity.
ColumnParams negative_column(const Rational& s_squared, const Rational& s_xi);

/// One violated constraint, located at column x / row y (1-based, 0 if n/a).
struct Violation {
  int column = 0;
  int row = 0;
  std::string message;
};

std::vector<Violation> validate_vertex_spec(const VertexSpec& spec);
/// Throws DomainError listing every violation.
void require_valid(const VertexSpec& spec);

/// Transition probability (i1, j1) -> (i2, j2). Zero unless i1 + j1 = i2 + j2.
Rational vertex_weight(int i1, int j1, int i2, int j2, const ColumnParams& column, const Rational& u,
                       const Rational& q);

/// v[x][y] = paths on the vertical edge (x+1, y+1) -> (x+1, y+2), 0-based
/// storage of the 1-based lattice.
struct HeightField {
  int M = 1;
  int N = 0;
  std::vector<std::vector<int>> v;  ///< (M-1) x N
  std::vector<int> j_exit;          ///< horizontal output right of column M-1, per row
};

/// h(m, y) = y - sum_{x<m} v[x][y] for 1 <= m <= M, 1 <= y <= N.
int height(const HeightField& field, int m, int y);

/// Draws the occupations of the (M-1) x N rectangle row by row.
HeightField sample_height_field(const VertexSpec& spec, Engine& engine);

/// h(m, y) of one fresh sample without storing the field. Consumes the
/// engine exactly like sample_height_field restricted to m-1 columns and y rows.
int sample_height(const VertexSpec& spec, int m, int y, Engine& engine);

/// h(M, N) for samples 0..count-1 of the batch keyed by master_seed.
std::vector<int> sample_heights(const VertexSpec& spec, std::uint64_t master_seed, std::size_t count,
                                unsigned workers = 1);

struct HeightDistribution {
  std::vector<Rational> values;  ///< values[k] = Prob{h(M,N) = k}, k = 0..N
};

inline constexpr std::size_t default_state_cap = 2'000'000;

/// Exact law of h(M, N) by propagating the occupation-vector distribution.
HeightDistribution exact_height_distribution(const VertexSpec& spec,
                                             std::size_t state_cap = default_state_cap);

/// E prod_{i=1}^{l} (Q^h - Q^{i-1}).
Rational qmoment_exact(const HeightDistribution& dist, const Rational& q, int l);

/// E prod_{i>=0} 1/(1 + zeta Q^{h+i}), truncated once the log-tail bound
/// zeta Q^{h+I} / (1 - Q) falls below tol.
double qlaplace_exact(const HeightDistribution& dist, const Rational& q, double zeta, double tol = 1e-15);

/// prod_{i>=0} 1/(1 + zeta Q^{h+i}) for one height value.
double qlaplace_factor(double q, int h, double zeta, double tol = 1e-15);

}  // namespace hs6v::vertex
