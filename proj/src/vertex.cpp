#include "hs6v/vertex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "hs6v/errors.hpp"
#include "hs6v/parallel.hpp"

namespace hs6v::vertex {

ColumnParams positive_column(const Rational& q, int m, const Rational& s_xi) {
  return ColumnParams{pow(q, -m), s_xi, SpinSign::positive, m};
}

ColumnParams negative_column(const Rational& s_squared, const Rational& s_xi) {
  return ColumnParams{s_squared, s_xi, SpinSign::negative, std::nullopt};
}

std::vector<Violation> validate_vertex_spec(const VertexSpec& spec) {
  std::vector<Violation> out;
  std::set<std::tuple<Rational, Rational, int, Rational>> checked;
  auto add = [&](int x, int y, std::string msg) { out.push_back({x, y, std::move(msg)}); };
  if (spec.q <= 0 || spec.q >= 1) add(0, 0, "Q must lie in (0,1), got " + to_string(spec.q));
  for (int y = 0; y < spec.N(); ++y)
    if (spec.u[y] <= 0) add(0, y + 1, "u_y must be positive at row " + std::to_string(y + 1));

  for (int x = 0; x < spec.M() - 1; ++x) {
    const ColumnParams& c = spec.columns[x];
    const int col = x + 1;
    bool column_ok = true;
    if (c.s_squared <= 0) {
      add(col, 0, "s^2 must be positive at column " + std::to_string(col));
      column_ok = false;
    }
    const int expected_sign = c.sign == SpinSign::positive ? 1 : -1;
    if (sgn(c.s_xi) != expected_sign) {
      add(col, 0, "sign(s*xi) disagrees with the sign of s at column " + std::to_string(col));
      column_ok = false;
    }
    if (c.sign == SpinSign::positive) {
      if (!c.capacity || *c.capacity < 1) {
        add(col, 0, "positive s requires a capacity m >= 1 at column " + std::to_string(col));
        column_ok = false;
      } else if (spec.q > 0 && spec.q < 1 && c.s_squared != pow(spec.q, -*c.capacity)) {
        add(col, 0, "s^2 != Q^{-m} for m=" + std::to_string(*c.capacity) + " at column " + std::to_string(col));
        column_ok = false;
      }
      if (column_ok) {
        for (int y = 0; y < spec.N(); ++y) {
          if (spec.u[y] > 0 && !(c.s_xi * spec.u[y] > c.s_squared)) {
            std::ostringstream msg;
            msg << "xi*u > s fails at (x=" << col << ",y=" << y + 1 << ")";
            add(col, y + 1, msg.str());
            column_ok = false;
          }
        }
      }
    } else {
      if (c.capacity) {
        add(col, 0, "negative s has unbounded capacity at column " + std::to_string(col));
        column_ok = false;
      }
      if (!(c.s_squared > 0 && c.s_squared < 1)) {
        add(col, 0, "negative s needs 0 < s^2 < 1 at column " + std::to_string(col));
        column_ok = false;
      }
    }
    if (!column_ok || spec.q <= 0 || spec.q >= 1) continue;
    // Occupancy never exceeds the number of rows.
    const int max_i = c.capacity ? std::min(*c.capacity, spec.N()) : spec.N();
    for (int y = 0; y < spec.N(); ++y) {
      if (spec.u[y] <= 0) continue;
      // Identical (column, u) pairs have identical weights.
      if (!checked.insert({c.s_squared, c.s_xi, c.capacity.value_or(-1), spec.u[y]}).second) continue;
      for (int i1 = 0; i1 <= max_i; ++i1) {
        for (int j1 = 0; j1 <= 1; ++j1) {
          for (int j2 = 0; j2 <= 1; ++j2) {
            int i2 = i1 + j1 - j2;
            if (i2 < 0) continue;
            if (vertex_weight(i1, j1, i2, j2, c, spec.u[y], spec.q) < 0) {
              std::ostringstream msg;
              msg << "negative weight (" << i1 << "," << j1 << ")->(" << i2 << "," << j2 << ") at (x=" << col
                  << ",y=" << y + 1 << ")";
              add(col, y + 1, msg.str());
            }
          }
        }
      }
    }
  }
  return out;
}

void require_valid(const VertexSpec& spec) {
  auto report = validate_vertex_spec(spec);
  if (report.empty()) return;
  std::string msg = "invalid vertex spec:";
  for (const auto& v : report) msg += " [" + v.message + "]";
  throw DomainError(msg);
}

Rational vertex_weight(int i1, int j1, int i2, int j2, const ColumnParams& column, const Rational& u,
                       const Rational& q) {
  if (i1 < 0 || i2 < 0 || j1 < 0 || j1 > 1 || j2 < 0 || j2 > 1)
    throw DomainError("vertex_weight: occupations must be nonnegative and j in {0,1}");
  if (column.capacity && i1 > *column.capacity)
    throw DomainError("vertex_weight: i1 = " + std::to_string(i1) + " exceeds column capacity " +
                      std::to_string(*column.capacity));
  if (i1 + j1 != i2 + j2) return Rational(0);
  const Rational bu = column.s_xi * u;
  const Rational denom = 1 - bu;
  if (denom == 0) throw DomainError("vertex_weight: s*xi*u = 1 makes the weights singular");
  const Rational qi = pow(q, i1);
  if (j1 == 0) {
    if (j2 == 0) return (1 - qi * bu) / denom;
    return (qi - 1) * bu / denom;
  }
  if (j2 == 1) return (qi * column.s_squared - bu) / denom;
  return (1 - qi * column.s_squared) / denom;
}

int height(const HeightField& field, int m, int y) {
  if (m < 1 || m > field.M || y < 1 || y > field.N)
    throw DomainError("height: (m,y) = (" + std::to_string(m) + "," + std::to_string(y) + ") outside [1," +
                      std::to_string(field.M) + "]x[1," + std::to_string(field.N) + "]");
  int h = y;
  for (int x = 0; x < m - 1; ++x) h -= field.v[x][y - 1];
  return h;
}

namespace {

// Double-precision weights for the Monte Carlo path: per-column (a, b),
// per-row u, and powers of Q up to the largest reachable occupancy.
struct SweepTables {
  std::vector<double> a, b;
  std::vector<int> capacity;  // -1 when unbounded
  std::vector<double> u;
  std::vector<double> qpow;

  explicit SweepTables(const VertexSpec& spec) {
    for (const auto& c : spec.columns) {
      a.push_back(to_double(c.s_squared));
      b.push_back(to_double(c.s_xi));
      capacity.push_back(c.capacity ? *c.capacity : -1);
    }
    for (const auto& uy : spec.u) u.push_back(to_double(uy));
    const double qd = to_double(spec.q);
    qpow.resize(static_cast<std::size_t>(spec.N()) + 2);
    qpow[0] = 1.0;
    for (std::size_t i = 1; i < qpow.size(); ++i) qpow[i] = qpow[i - 1] * qd;
  }

  // Probability that the horizontal input is kept: (i,j) -> (i,j).
  double stay(int x, int y, int i1, int j1) const {
    const double bu = b[x] * u[y];
    if (j1 == 0) return (1.0 - qpow[i1] * bu) / (1.0 - bu);
    if (capacity[x] == i1) return 1.0;
    return (qpow[i1] * a[x] - bu) / (1.0 - bu);
  }
};

// Sweeps rows 0..rows-1 and columns 0..cols-1. occupancy has size cols.
template <class RowHook>
void sweep(const SweepTables& tab, int cols, int rows, Engine& engine, std::vector<int>& occupancy, RowHook&& hook) {
  for (int y = 0; y < rows; ++y) {
    int j = 1;
    for (int x = 0; x < cols; ++x) {
      const int i1 = occupancy[x];
      const double p = tab.stay(x, y, i1, j);
      if (uniform01(engine) >= p) {
        // j=1 moves into the column, j=0 releases one path sideways.
        occupancy[x] = i1 + (j == 1 ? 1 : -1);
        j = 1 - j;
      }
    }
    hook(y, j);
  }
}

}  // namespace

HeightField sample_height_field(const VertexSpec& spec, Engine& engine) {
  require_valid(spec);
  const int cols = spec.M() - 1;
  const int rows = spec.N();
  HeightField field;
  field.M = spec.M();
  field.N = rows;
  field.v.assign(cols, std::vector<int>(rows, 0));
  field.j_exit.assign(rows, 1);
  SweepTables tab(spec);
  std::vector<int> occupancy(cols, 0);
  sweep(tab, cols, rows, engine, occupancy, [&](int y, int j) {
    for (int x = 0; x < cols; ++x) field.v[x][y] = occupancy[x];
    field.j_exit[y] = j;
  });
  return field;
}

int sample_height(const VertexSpec& spec, int m, int y, Engine& engine) {
  if (m < 1 || m > spec.M() || y < 1 || y > spec.N())
    throw DomainError("sample_height: (m,y) outside the specified rectangle");
  SweepTables tab(spec);
  std::vector<int> occupancy(m - 1, 0);
  sweep(tab, m - 1, y, engine, occupancy, [](int, int) {});
  int h = y;
  for (int v : occupancy) h -= v;
  return h;
}

std::vector<int> sample_heights(const VertexSpec& spec, std::uint64_t master_seed, std::size_t count,
                                unsigned workers) {
  require_valid(spec);
  SweepTables tab(spec);
  const int cols = spec.M() - 1;
  const int rows = spec.N();
  std::vector<int> out(count);
  parallel_for(count, workers, [&](std::size_t k) {
    Engine engine = substream(master_seed, k);
    std::vector<int> occupancy(cols, 0);
    sweep(tab, cols, rows, engine, occupancy, [](int, int) {});
    int h = rows;
    for (int v : occupancy) h -= v;
    out[k] = h;
  });
  return out;
}

HeightDistribution exact_height_distribution(const VertexSpec& spec, std::size_t state_cap) {
  require_valid(spec);
  const int cols = spec.M() - 1;
  const int rows = spec.N();
  // Key: occupations of all columns followed by the horizontal arrow j.
  using State = std::vector<int>;
  std::map<State, Rational> dist;
  dist.emplace(State(cols + 1, 0), Rational(1));

  // Weight cache keyed by (x, y, i1, j1) -> probability of keeping j.
  std::map<std::array<int, 4>, Rational> stay_cache;
  auto stay = [&](int x, int y, int i1, int j1) -> const Rational& {
    auto key = std::array<int, 4>{x, y, i1, j1};
    auto it = stay_cache.find(key);
    if (it == stay_cache.end())
      it = stay_cache.emplace(key, vertex_weight(i1, j1, i1, j1, spec.columns[x], spec.u[y], spec.q)).first;
    return it->second;
  };

  for (int y = 0; y < rows; ++y) {
    std::map<State, Rational> entering;
    for (auto& [state, p] : dist) {
      State s = state;
      s[cols] = 1;
      entering[s] += p;
    }
    dist = std::move(entering);
    for (int x = 0; x < cols; ++x) {
      std::map<State, Rational> next;
      for (auto& [state, p] : dist) {
        const int i1 = state[x];
        const int j1 = state[cols];
        const Rational& keep = stay(x, y, i1, j1);
        if (keep != 0) next[state] += p * keep;
        const Rational moved = 1 - keep;
        if (moved != 0) {
          State s = state;
          s[x] = i1 + (j1 == 1 ? 1 : -1);
          s[cols] = 1 - j1;
          next[s] += p * moved;
        }
        if (next.size() > state_cap)
          throw ResourceError("exact_height_distribution: state space exceeds the cap of " +
                              std::to_string(state_cap) + " states");
      }
      dist = std::move(next);
    }
  }

  HeightDistribution out;
  out.values.assign(rows + 1, Rational(0));
  for (auto& [state, p] : dist) {
    int h = rows;
    for (int x = 0; x < cols; ++x) h -= state[x];
    out.values[h] += p;
  }
  return out;
}

Rational qmoment_exact(const HeightDistribution& dist, const Rational& q, int l) {
  if (l < 0) throw DomainError("qmoment_exact: l must be nonnegative");
  Rational total(0);
  for (std::size_t k = 0; k < dist.values.size(); ++k) {
    if (dist.values[k] == 0) continue;
    const Rational qk = pow(q, static_cast<long>(k));
    Rational term = dist.values[k];
    for (int i = 1; i <= l; ++i) term *= qk - pow(q, i - 1);
    total += term;
  }
  return total;
}

double qlaplace_factor(double q, int h, double zeta, double tol) {
  double log_prod = 0.0;
  double term = zeta * std::pow(q, h);
  // Remaining log-tail is at most term / (1 - q).
  while (term / (1.0 - q) > tol) {
    log_prod -= std::log1p(term);
    term *= q;
  }
  return std::exp(log_prod);
}

double qlaplace_exact(const HeightDistribution& dist, const Rational& q, double zeta, double tol) {
  if (!(zeta > 0)) throw DomainError("qlaplace_exact: zeta must be positive");
  const double qd = to_double(q);
  double total = 0.0;
  for (std::size_t k = 0; k < dist.values.size(); ++k)
    total += to_double(dist.values[k]) * qlaplace_factor(qd, static_cast<int>(k), zeta, tol);
  return total;
}

}  // namespace hs6v::vertex
