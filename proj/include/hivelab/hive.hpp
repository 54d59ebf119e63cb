#pragma once
// Gelfand-Tsetlin patterns, hives on the lattice triangle, and the shift that
// turns a pattern into a hive.
//
// The side-n triangle is the set of integer points (x, y) with
// 0 <= x <= y <= n. A hive is a function on those points whose second
// difference across every parallelogram of the three lattice types is
// nonpositive. Tolerances are relative to the value scale throughout.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hivelab/philox.hpp"
#include "hivelab/randmat.hpp"
#include "hivelab/stats.hpp"

namespace hivelab {

inline bool in_triangle(int n, int x, int y) { return 0 <= x && x <= y && y <= n; }

inline std::size_t triangle_vertex_count(int n) {
  return std::size_t(n + 1) * std::size_t(n + 2) / 2;
}

struct hive_t {
  int n = 0;
  std::vector<double> values;  // index y*(y+1)/2 + x for 0 <= x <= y <= n

  double at(int x, int y) const { return values[index(x, y)]; }
  double& at(int x, int y) { return values[index(x, y)]; }

  std::size_t index(int x, int y) const {
    if (!in_triangle(n, x, y))
      throw std::out_of_range("hive: vertex outside the triangle");
    return std::size_t(y) * (std::size_t(y) + 1) / 2 + std::size_t(x);
  }
};

inline hive_t make_hive(int n) {
  if (n < 1) throw std::invalid_argument("make_hive: n must be positive");
  hive_t h;
  h.n = n;
  h.values.assign(triangle_vertex_count(n), 0.0);
  return h;
}

// A parallelogram is anchored at the vertex (v1, v2) and carries one of three
// orientations. Stencil points and signs of the second difference:
//   type 0:  +(v1,v2)  -(v1+1,v2)    -(v1+1,v2+1)  +(v1+2,v2+1)
//   type 1:  -(v1,v2)  +(v1+1,v2)    +(v1,v2+1)    -(v1+1,v2+1)
//   type 2:  +(v1,v2)  -(v1+1,v2+1)  -(v1,v2+1)    +(v1+1,v2+2)
struct cell {
  int type = 0;
  int v1 = 0;
  int v2 = 0;
};

struct cell_stencil {
  int x[4];
  int y[4];
  double sign[4];
};

inline cell_stencil stencil_of(const cell& c) {
  const int a = c.v1, b = c.v2;
  switch (c.type) {
    case 0:
      return {{a, a + 1, a + 1, a + 2}, {b, b, b + 1, b + 1}, {1.0, -1.0, -1.0, 1.0}};
    case 1:
      return {{a, a + 1, a, a + 1}, {b, b, b + 1, b + 1}, {-1.0, 1.0, 1.0, -1.0}};
    case 2:
      return {{a, a + 1, a, a + 1}, {b, b + 1, b + 1, b + 2}, {1.0, -1.0, -1.0, 1.0}};
    default:
      throw std::invalid_argument("stencil_of: cell type must be 0, 1 or 2");
  }
}

// second difference of an arbitrary lattice function; no domain restriction
inline double discrete_hessian(const std::function<double(int, int)>& f, const cell& c) {
  const cell_stencil s = stencil_of(c);
  double v = 0.0;
  for (int k = 0; k < 4; ++k) v += s.sign[k] * f(s.x[k], s.y[k]);
  return v;
}

// hive overload: every stencil point must lie in the triangle
inline double discrete_hessian(const hive_t& h, const cell& c) {
  const cell_stencil s = stencil_of(c);
  double v = 0.0;
  for (int k = 0; k < 4; ++k) v += s.sign[k] * h.at(s.x[k], s.y[k]);
  return v;
}

// All parallelograms contained in the side-n triangle, scanned type by type
// and then by anchor, v2 outer. Containment reduces to v1+1 <= v2 <= n-1 for
// types 0 and 1 and v1 <= v2 <= n-2 for type 2.
inline std::vector<cell> cells_in_triangle(int n) {
  std::vector<cell> out;
  out.reserve(std::size_t(3 * n) * std::size_t(n - 1) / 2);
  for (int t = 0; t < 2; ++t)
    for (int v2 = 1; v2 <= n - 1; ++v2)
      for (int v1 = 0; v1 + 1 <= v2; ++v1) out.push_back({t, v1, v2});
  for (int v2 = 0; v2 <= n - 2; ++v2)
    for (int v1 = 0; v1 <= v2; ++v1) out.push_back({2, v1, v2});
  return out;
}

struct concavity_report {
  bool ok = true;
  cell first_violation;  // meaningful only when !ok
  double violation = 0.0;
};

// Nonpositivity of all second differences, up to tol_rel times the value
// scale. The reported violation is the first in cells_in_triangle order.
inline concavity_report is_rhombus_concave(const hive_t& h, double tol_rel = 1e-9) {
  double scale = 1.0;
  for (double v : h.values) scale = std::max(scale, std::abs(v));
  const double tol = tol_rel * scale;
  for (const cell& c : cells_in_triangle(h.n)) {
    const double d = discrete_hessian(h, c);
    if (d > tol) return {false, c, d};
  }
  return {true, {}, 0.0};
}

struct gt_pattern {
  // rows[k-1] holds (lam_{1,k}, ..., lam_{k,k}), non-increasing
  std::vector<std::vector<double>> rows;

  int n() const { return int(rows.size()); }
  double lam(int j, int k) const { return rows[std::size_t(k) - 1][std::size_t(j) - 1]; }
};

inline spectrum gt_top_row(const gt_pattern& g) {
  if (g.rows.empty()) throw std::invalid_argument("gt_top_row: empty pattern");
  return spectrum{g.rows.back()};
}

// Interlacing lam_{j,k+1} >= lam_{j,k} >= lam_{j+1,k+1} within tol_rel of the
// value scale. Within-row monotonicity follows from these, so it is not
// checked separately.
inline void validate_gt(const gt_pattern& g, double tol_rel = 1e-9) {
  const int n = g.n();
  if (n < 1) throw std::invalid_argument("validate_gt: empty pattern");
  double scale = 1.0;
  for (int k = 1; k <= n; ++k) {
    if (int(g.rows[std::size_t(k) - 1].size()) != k)
      throw std::invalid_argument("validate_gt: row " + std::to_string(k) +
                                  " must have " + std::to_string(k) + " entries");
    for (double v : g.rows[std::size_t(k) - 1]) scale = std::max(scale, std::abs(v));
  }
  const double tol = tol_rel * scale;
  for (int k = 1; k <= n - 1; ++k)
    for (int j = 1; j <= k; ++j) {
      if (g.lam(j, k + 1) < g.lam(j, k) - tol || g.lam(j, k) < g.lam(j + 1, k + 1) - tol)
        throw std::invalid_argument("validate_gt: interlacing fails at entry (" +
                                    std::to_string(j) + "," + std::to_string(k) + ")");
    }
}

// partial row sums; entry k is lam_{1,k} + ... + lam_{k,k}
inline std::vector<double> gt_row_sums(const gt_pattern& g) {
  std::vector<double> s(std::size_t(g.n()));
  for (int k = 1; k <= g.n(); ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += g.lam(j, k);
    s[std::size_t(k) - 1] = acc;
  }
  return s;
}

// the diagonal tuple the pattern encodes: a_k = S_k - S_{k-1}
inline std::vector<double> gt_diagonal(const gt_pattern& g) {
  std::vector<double> a = gt_row_sums(g);
  for (int k = g.n() - 1; k >= 1; --k) a[std::size_t(k)] -= a[std::size_t(k) - 1];
  return a;
}

// The minor spectra already form a pattern (Cauchy interlacing); copy rows
// and validate.
inline gt_pattern gt_from_minors(const minor_process_t& p, double tol_rel = 1e-9) {
  if (p.n < 1 || int(p.rows.size()) != p.n)
    throw std::invalid_argument("gt_from_minors: process must carry rows 1..n");
  gt_pattern g;
  g.rows = p.rows;
  validate_gt(g, tol_rel);
  return g;
}

struct large_gap_tuple {
  spectrum values;
};

// Consecutive gaps 2*(lam_1 - lam_n) + 1 clear the large-gap condition with
// room to spare and stay integer for integer spectra.
inline large_gap_tuple default_shift(const spectrum& lam) {
  const std::size_t n = lam.values.size();
  if (n == 0) throw std::invalid_argument("default_shift: empty spectrum");
  const double g = 2.0 * (lam.values.front() - lam.values.back()) + 1.0;
  large_gap_tuple t;
  t.values.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.values.values[i] = double(n - i) * g;
  return t;
}

// h(i,j) = Lambda_1 + ... + Lambda_j + lam_{1,j} + ... + lam_{i,j}.
// Requires min_i (Lambda_i - Lambda_{i+1}) > lam_{1,n} - lam_{n,n}; that gap
// is what makes the type-2 differences nonpositive, the other two types hold
// for any shift.
inline hive_t hive_from_gt(const gt_pattern& g, const large_gap_tuple& shift,
                           double tol_rel = 1e-9) {
  validate_gt(g, tol_rel);
  const int n = g.n();
  if (int(shift.values.values.size()) != n)
    throw std::invalid_argument("hive_from_gt: shift length must match the pattern");
  const double spread = g.lam(1, n) - g.lam(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double gap = shift.values.values[std::size_t(i)] - shift.values.values[std::size_t(i) + 1];
    if (!(gap > spread))
      throw std::invalid_argument("hive_from_gt: shift gaps must exceed the spectral spread");
  }
  hive_t h = make_hive(n);
  double lpref = 0.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) lpref += shift.values.values[std::size_t(j) - 1];
    double row = 0.0;
    h.at(0, j) = lpref;
    for (int i = 1; i <= j; ++i) {
      row += g.lam(i, j);
      h.at(i, j) = lpref + row;
    }
  }
  return h;
}

// boundary differences along the left edge, the top edge, and the diagonal
inline std::vector<double> hive_left_boundary(const hive_t& h) {
  std::vector<double> out(std::size_t(h.n));
  for (int i = 1; i <= h.n; ++i) out[std::size_t(i) - 1] = h.at(0, i) - h.at(0, i - 1);
  return out;
}

inline std::vector<double> hive_top_boundary(const hive_t& h) {
  std::vector<double> out(std::size_t(h.n));
  for (int i = 1; i <= h.n; ++i) out[std::size_t(i) - 1] = h.at(i, h.n) - h.at(i - 1, h.n);
  return out;
}

inline std::vector<double> hive_diagonal_boundary(const hive_t& h) {
  std::vector<double> out(std::size_t(h.n));
  for (int i = 1; i <= h.n; ++i) out[std::size_t(i) - 1] = h.at(i, i) - h.at(i - 1, i - 1);
  return out;
}

// Trace equality plus the sorted prefix test: sum of the k largest entries of
// a never exceeds the k largest of lam. Subset sums reduce to sorted
// prefixes, so this is the full family.
inline bool majorization_check(const std::vector<double>& a, const spectrum& lam,
                               double tol_rel = 1e-9) {
  const std::size_t n = lam.values.size();
  if (a.size() != n) throw std::invalid_argument("majorization_check: length mismatch");
  if (n == 0) return true;
  double scale = 1.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (double v : lam.values) scale = std::max(scale, std::abs(v));
  const double tol = tol_rel * scale * double(n);
  std::vector<double> b = a;
  std::sort(b.begin(), b.end(), std::greater<double>());
  double pa = 0.0, pl = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    pa += b[k];
    pl += lam.values[k];
    if (pa > pl + tol) return false;
  }
  return std::abs(pa - pl) <= tol;
}

struct weyl_triple {
  int i = 0;
  int j = 0;
  double excess = 0.0;
};

struct weyl_report {
  bool ok = true;
  std::vector<weyl_triple> violations;
};

// nu_{i+j-1} <= lam_i + mu_j over all admissible pairs. Trace equality is a
// precondition, not one of the inequalities.
inline weyl_report weyl_check(const spectrum& lam, const spectrum& mu, const spectrum& nu,
                              double tol_rel = 1e-9) {
  const std::size_t n = lam.values.size();
  if (mu.values.size() != n || nu.values.size() != n)
    throw std::invalid_argument("weyl_check: length mismatch");
  double scale = 1.0, tr = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    scale = std::max({scale, std::abs(lam.values[k]), std::abs(mu.values[k]),
                      std::abs(nu.values[k])});
    tr += lam.values[k] + mu.values[k] - nu.values[k];
  }
  const double tol = tol_rel * scale;
  if (std::abs(tr) > tol * double(n))
    throw std::invalid_argument("weyl_check: traces do not match");
  weyl_report rep;
  for (int i = 1; i <= int(n); ++i)
    for (int j = 1; i + j - 1 <= int(n); ++j) {
      const double lhs = nu.values[std::size_t(i + j - 2)];
      const double rhs = lam.values[std::size_t(i) - 1] + mu.values[std::size_t(j) - 1];
      if (lhs > rhs + tol) {
        rep.ok = false;
        rep.violations.push_back({i, j, lhs - rhs});
      }
    }
  return rep;
}

// product of pairwise differences prod_{i<j} (lam_i - lam_j)
inline double vandermonde(const spectrum& lam) {
  const std::size_t n = lam.values.size();
  double v = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) v *= lam.values[i] - lam.values[j];
  return v;
}

struct volume_estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Monte Carlo volume of the polytope of patterns under a fixed top row. Rows
// are drawn top down, each entry uniform in its interlacing interval, and the
// product of all interval lengths is an importance weight whose mean over
// proposals is the volume. Desk scale only: the weight variance grows fast
// with n.
inline volume_estimate gt_polytope_volume_mc(const spectrum& lam, std::uint64_t trials,
                                             std::uint64_t seed) {
  const int n = int(lam.values.size());
  if (n < 1 || n > 4) throw std::invalid_argument("gt_polytope_volume_mc: need 1 <= n <= 4");
  if (trials < 2) throw std::invalid_argument("gt_polytope_volume_mc: need at least 2 trials");
  for (int i = 0; i + 1 < n; ++i)
    if (!(lam.values[std::size_t(i)] > lam.values[std::size_t(i) + 1]))
      throw std::invalid_argument("gt_polytope_volume_mc: entries must be strictly decreasing");
  running_stats acc;
  std::vector<double> above, row;
  for (std::uint64_t t = 0; t < trials; ++t) {
    above = lam.values;
    double w = 1.0;
    for (int k = n - 1; k >= 1; --k) {
      row.resize(std::size_t(k));
      for (int j = 1; j <= k; ++j) {
        const double hi = above[std::size_t(j) - 1];
        const double lo = above[std::size_t(j)];
        const double u = uniform_at(seed, t, std::uint32_t(k), std::uint32_t(j));
        row[std::size_t(j) - 1] = lo + u * (hi - lo);
        w *= hi - lo;
      }
      above = row;
    }
    acc.push(w);
  }
  volume_estimate est;
  est.value = acc.mean;
  est.std_error = acc.stddev() / std::sqrt(double(trials));
  est.trials = trials;
  return est;
}

}  // namespace hivelab
