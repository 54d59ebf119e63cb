#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "hivelab/hive.hpp"

namespace hivelab {

// Excavation hexagons live inside the integer square {0..n}^2, which the
// anti-diagonal x+y = n (the equator) splits into the upper region U and the
// lower region U'.  The triangular mesh is the unit-square grid with every
// square cut by its anti-diagonal.

struct lattice_pt {
  int x = 0;
  int y = 0;
};

inline bool operator==(lattice_pt p, lattice_pt q) { return p.x == q.x && p.y == q.y; }

inline bool operator<(lattice_pt p, lattice_pt q) {
  return std::tie(p.x, p.y) < std::tie(q.x, q.y);
}

struct hexagon_t {
  int n = 0;
  int vi = 0;  // v = (vi, vj), strictly interior to {0..n}^2
  int vj = 0;
  lattice_pt a, b, c, d, e, f;

  // Closed-hexagon membership.  The six corner-to-corner edges are exactly the
  // tight cases of these bounds; both corner-case formulas satisfy them.
  bool contains(int x, int y) const {
    const int di = vi - vj;
    return x >= std::max(0, di) && x <= std::min(n, n + di) && y >= std::max(0, -di) &&
           y <= std::min(n, n - di) && x + y >= std::max(vi, vj) &&
           x + y <= n + std::min(vi, vj);
  }
  bool in_upper(int x, int y) const { return contains(x, y) && x + y >= n; }
  bool in_lower(int x, int y) const { return contains(x, y) && x + y <= n; }

  // Equator vertices (k, n-k) for k in [equator_first, equator_last]; border
  // edges join consecutive ones.
  int equator_first() const { return std::max(0, vi - vj); }
  int equator_last() const { return n - std::max(0, vj - vi); }
};

inline hexagon_t excavation_hexagon(int vi, int vj, int n) {
  if (vi <= 0 || vi >= n || vj <= 0 || vj >= n)
    throw std::out_of_range("excavation_hexagon: vertex must be strictly interior");
  hexagon_t h;
  h.n = n;
  h.vi = vi;
  h.vj = vj;
  const int i = vi, j = vj;
  if (i <= j) {
    h.a = {0, n};
    h.b = {0, j};
    h.c = {i, j - i};
    h.d = {n + i - j, j - i};
    h.e = {n + i - j, j};
    h.f = {i, n};
  } else {
    h.a = {i - j, n + j - i};
    h.b = {i - j, j};
    h.c = {i, 0};
    h.d = {n, 0};
    h.e = {n, j};
    h.f = {i, n + j - i};
  }
  return h;
}

// Half of a unit square: sw = below the anti-diagonal, ne = above it.
struct mesh_tri {
  int sx = 0;
  int sy = 0;
  bool ne = false;
};

inline bool operator==(mesh_tri s, mesh_tri t) {
  return s.sx == t.sx && s.sy == t.sy && s.ne == t.ne;
}

inline bool operator<(mesh_tri s, mesh_tri t) {
  return std::tie(s.sx, s.sy, s.ne) < std::tie(t.sx, t.sy, t.ne);
}

inline std::array<lattice_pt, 3> tri_corners(const mesh_tri& t) {
  if (t.ne) return {{{t.sx + 1, t.sy}, {t.sx + 1, t.sy + 1}, {t.sx, t.sy + 1}}};
  return {{{t.sx, t.sy}, {t.sx + 1, t.sy}, {t.sx, t.sy + 1}}};
}

// Side of the equator; border-square halves count as upper (ne) / lower (sw).
inline bool tri_in_upper(int n, const mesh_tri& t) {
  return t.ne ? t.sx + t.sy + 1 >= n : t.sx + t.sy >= n;
}

inline bool tri_in_hexagon(const hexagon_t& h, const mesh_tri& t) {
  for (const auto& p : tri_corners(t))
    if (!h.contains(p.x, p.y)) return false;
  return true;
}

inline std::vector<mesh_tri> hexagon_triangles(const hexagon_t& h) {
  std::vector<mesh_tri> out;
  for (int sy = 0; sy < h.n; ++sy)
    for (int sx = 0; sx < h.n; ++sx)
      for (int ne = 0; ne < 2; ++ne) {
        mesh_tri t{sx, sy, ne != 0};
        if (tri_in_hexagon(h, t)) out.push_back(t);
      }
  return out;
}

inline int hexagon_area(const hexagon_t& h) { return int(hexagon_triangles(h).size()); }

enum class loz_kind : int { type_i = 0, type_ii = 1, type_iii = 2 };
enum class loz_color : int { blue = 0, red = 1, green = 2 };

struct lozenge {
  loz_kind kind = loz_kind::type_i;
  int x = 0;  // anchor, the template's first vertex
  int y = 0;
};

struct border_triangle {
  bool upward = false;
  int e = 0;  // border edge index: the edge from (e+1, n-e-1) to (e, n-e)
};

// Corner templates, in the (A, B, C, D) order the weight formula uses.
inline std::array<lattice_pt, 4> lozenge_corners(const lozenge& d) {
  const int x = d.x, y = d.y;
  switch (d.kind) {
    case loz_kind::type_i:
      return {{{x, y}, {x + 1, y - 1}, {x + 2, y - 1}, {x + 1, y}}};
    case loz_kind::type_ii:
      return {{{x, y}, {x, y + 1}, {x - 1, y + 2}, {x - 1, y + 1}}};
    case loz_kind::type_iii:
      return {{{x, y}, {x + 1, y}, {x + 1, y + 1}, {x, y + 1}}};
  }
  throw std::invalid_argument("lozenge_corners: bad kind");
}

// The two mesh triangles a lozenge covers.
inline std::array<mesh_tri, 2> lozenge_tris(const lozenge& d) {
  const int x = d.x, y = d.y;
  switch (d.kind) {
    case loz_kind::type_i:
      return {{{x, y - 1, true}, {x + 1, y - 1, false}}};
    case loz_kind::type_ii:
      return {{{x - 1, y, true}, {x - 1, y + 1, false}}};
    case loz_kind::type_iii:
      return {{{x, y, false}, {x, y, true}}};
  }
  throw std::invalid_argument("lozenge_tris: bad kind");
}

// All four corners of types i and ii share one side of the equator.  A type
// iii square whose anti-diagonal lies on the equator is not a lozenge.
inline bool lozenge_in_upper(const lozenge& d, int n) {
  const int s = d.x + d.y;
  if (d.kind == loz_kind::type_iii && s == n - 1)
    throw std::invalid_argument("lozenge_in_upper: square straddles the equator");
  return s >= n;
}

inline loz_color color_of(const lozenge& d, int n) {
  const bool up = lozenge_in_upper(d, n);
  switch (d.kind) {
    case loz_kind::type_i:
      return up ? loz_color::blue : loz_color::red;
    case loz_kind::type_ii:
      return up ? loz_color::red : loz_color::blue;
    case loz_kind::type_iii:
      return loz_color::green;
  }
  throw std::invalid_argument("color_of: bad kind");
}

inline mesh_tri triangle_tri(const border_triangle& t, int n) {
  return {t.e, n - t.e - 1, t.upward};
}

inline std::array<lattice_pt, 3> triangle_corners(const border_triangle& t, int n) {
  const int e = t.e;
  if (t.upward) return {{{e, n - e}, {e + 1, n - e}, {e + 1, n - e - 1}}};
  return {{{e, n - e}, {e, n - e - 1}, {e + 1, n - e - 1}}};
}

struct tiling_t {
  std::vector<lozenge> lozenges;
  std::vector<border_triangle> triangles;
};

// Boundary data for tiling weights.  ktilde holds the glued field on the
// square: Lambda prefix sums along the equator, upper GT pattern prefix sums
// above it and lower GT pattern suffix sums below, so that blue and green
// lozenge weights reproduce the pattern-entry differences exactly.
struct weight_field_t {
  int n = 0;
  std::vector<double> tab;  // (n+1)^2, index x * (n+1) + y

  double ktilde(int x, int y) const {
    if (x < 0 || x > n || y < 0 || y > n)
      throw std::out_of_range("weight_field_t::ktilde: point outside the square");
    return tab[std::size_t(x) * std::size_t(n + 1) + std::size_t(y)];
  }
  double& slot(int x, int y) { return tab[std::size_t(x) * std::size_t(n + 1) + std::size_t(y)]; }
};

inline large_gap_tuple default_shift(const spectrum& s1, const spectrum& s2) {
  if (s1.values.size() != s2.values.size())
    throw std::invalid_argument("default_shift: spectra sizes differ");
  const double top = std::max(s1.values.front(), s2.values.front());
  const double bot = std::min(s1.values.back(), s2.values.back());
  const double gap = 2.0 * (top - bot) + 1.0;
  const int n = int(s1.values.size());
  large_gap_tuple t;
  t.values.values.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) t.values.values[std::size_t(i)] = double(n - i) * gap;
  return t;
}

namespace detail {

inline void require_large_gaps(const gt_pattern& g, const large_gap_tuple& shift) {
  const int n = g.n();
  if (int(shift.values.values.size()) != n)
    throw std::invalid_argument("weight field: shift size mismatch");
  double min_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < n; ++i)
    min_gap = std::min(min_gap, shift.values.values[std::size_t(i)] -
                                    shift.values.values[std::size_t(i) + 1]);
  const auto& top = g.rows.back();
  const double spread = top.front() - top.back();
  if (n > 1 && !(min_gap > spread))
    throw std::invalid_argument("weight field: shift gaps do not dominate the spectrum spread");
}

}  // namespace detail

inline weight_field_t weight_field_from_patterns(const gt_pattern& upper, const gt_pattern& lower,
                                                 const large_gap_tuple& shift,
                                                 double tol_rel = 1e-9) {
  validate_gt(upper, tol_rel);
  validate_gt(lower, tol_rel);
  const int n = upper.n();
  if (lower.n() != n) throw std::invalid_argument("weight field: pattern sizes differ");
  detail::require_large_gaps(upper, shift);
  detail::require_large_gaps(lower, shift);

  std::vector<double> lpre(std::size_t(n) + 1, 0.0);
  for (int s = 1; s <= n; ++s) lpre[std::size_t(s)] = lpre[std::size_t(s) - 1] + shift.values.values[std::size_t(s) - 1];

  weight_field_t w;
  w.n = n;
  w.tab.assign(std::size_t(n + 1) * std::size_t(n + 1), 0.0);
  for (int x = 0; x <= n; ++x)
    for (int y = 0; y <= n; ++y) {
      if (x + y >= n) {
        double acc = lpre[std::size_t(y)];
        for (int t = 1; t <= x + y - n; ++t) acc += upper.lam(t, y);
        w.slot(x, y) = acc;
      } else {
        const int r = n - x;
        double acc = lpre[std::size_t(r)];
        for (int t = y + 1; t <= r; ++t) acc -= lower.lam(t, r);
        w.slot(x, y) = acc;
      }
    }
  return w;
}

// Same field, read off two hives with a common left boundary:  on U the upper
// hive is sheared onto the grid, on U' the lower hive enters through
// k'(y, n-x) - k'(n-x, n-x) + k'(0, n-x).
inline weight_field_t weight_field_from_hives(const hive_t& k, const hive_t& kp,
                                              double tol_rel = 1e-9) {
  const int n = k.n;
  if (kp.n != n) throw std::invalid_argument("weight field: hive sizes differ");
  double scale = 1.0;
  for (double v : k.values) scale = std::max(scale, std::abs(v));
  for (double v : kp.values) scale = std::max(scale, std::abs(v));
  for (int j = 0; j <= n; ++j)
    if (std::abs(k.at(0, j) - kp.at(0, j)) > tol_rel * scale)
      throw std::invalid_argument("weight field: hive left boundaries differ");

  weight_field_t w;
  w.n = n;
  w.tab.assign(std::size_t(n + 1) * std::size_t(n + 1), 0.0);
  for (int x = 0; x <= n; ++x)
    for (int y = 0; y <= n; ++y) {
      if (x + y >= n)
        w.slot(x, y) = k.at(x + y - n, y);
      else
        w.slot(x, y) = kp.at(y, n - x) - kp.at(n - x, n - x) + kp.at(0, n - x);
    }
  return w;
}

inline double lozenge_weight(const lozenge& d, const weight_field_t& w) {
  lozenge_in_upper(d, w.n);  // rejects equator-straddling squares
  const auto c = lozenge_corners(d);
  return (w.ktilde(c[0].x, c[0].y) + w.ktilde(c[2].x, c[2].y) - w.ktilde(c[1].x, c[1].y) -
          w.ktilde(c[3].x, c[3].y)) /
         3.0;
}

inline double triangle_weight(const border_triangle& t, const weight_field_t& w) {
  const auto c = triangle_corners(t, w.n);
  return (w.ktilde(c[1].x, c[1].y) - w.ktilde(c[0].x, c[0].y)) / 3.0;
}

inline double hexagon_weight(const hexagon_t& h, const weight_field_t& w) {
  if (w.n != h.n) throw std::invalid_argument("hexagon_weight: size mismatch");
  return (w.ktilde(h.b.x, h.b.y) + w.ktilde(h.c.x, h.c.y) - w.ktilde(h.d.x, h.d.y) +
          w.ktilde(h.e.x, h.e.y) + w.ktilde(h.f.x, h.f.y)) /
         3.0;
}

inline double hexagon_weight_primed(const hexagon_t& h, const weight_field_t& w) {
  if (w.n != h.n) throw std::invalid_argument("hexagon_weight_primed: size mismatch");
  return (-w.ktilde(h.a.x, h.a.y) + 2.0 * w.ktilde(h.b.x, h.b.y) + 2.0 * w.ktilde(h.f.x, h.f.y)) /
         3.0;
}

// The shift tuple enters every tiling's weight through the primed hexagon
// term alone: with patterns zeroed, lozenge and triangle weights vanish and
// k-tilde at A, B, F equals the Lambda prefix at n - max(0, vi - vj).
inline double shift_offset(const hexagon_t& h, const large_gap_tuple& shift) {
  if (int(shift.values.values.size()) != h.n)
    throw std::invalid_argument("shift_offset: shift size mismatch");
  const int m = h.n - std::max(0, h.vi - h.vj);
  double acc = 0.0;
  for (int t = 0; t < m; ++t) acc += shift.values.values[std::size_t(t)];
  return acc;
}

inline void validate_tiling(const hexagon_t& h, const tiling_t& xi) {
  const int n = h.n;
  std::vector<std::int8_t> cover(std::size_t(n) * std::size_t(n) * 2, 0);
  const auto stamp = [&](const mesh_tri& t) {
    if (t.sx < 0 || t.sx >= n || t.sy < 0 || t.sy >= n)
      throw std::invalid_argument("tiling: tile leaves the square");
    if (!tri_in_hexagon(h, t)) throw std::invalid_argument("tiling: tile leaves the hexagon");
    auto& c = cover[(std::size_t(t.sx) * std::size_t(n) + std::size_t(t.sy)) * 2 + (t.ne ? 1 : 0)];
    if (c) throw std::invalid_argument("tiling: overlapping tiles");
    c = 1;
  };
  for (const auto& d : xi.lozenges) {
    lozenge_in_upper(d, n);
    for (const auto& t : lozenge_tris(d)) stamp(t);
  }
  const int e0 = h.equator_first(), e1 = h.equator_last();
  std::vector<std::int8_t> alone(std::size_t(n), 0);
  for (const auto& t : xi.triangles) {
    if (t.e < e0 || t.e >= e1) throw std::invalid_argument("tiling: border triangle off the equator");
    if (alone[std::size_t(t.e)]++) throw std::invalid_argument("tiling: border edge claimed twice");
    stamp(triangle_tri(t, n));
  }
  for (int e = e0; e < e1; ++e)
    if (!alone[std::size_t(e)])
      throw std::invalid_argument("tiling: border edge without a border triangle");
  for (const auto& t : hexagon_triangles(h)) {
    if (!cover[(std::size_t(t.sx) * std::size_t(n) + std::size_t(t.sy)) * 2 + (t.ne ? 1 : 0)])
      throw std::invalid_argument("tiling: uncovered mesh triangle");
  }
}

enum class weight_form : int { primal = 0, red_avoiding = 1 };

inline double tiling_weight(const tiling_t& xi, const hexagon_t& h, const weight_field_t& w,
                            weight_form form) {
  validate_tiling(h, xi);
  double acc = 0.0;
  if (form == weight_form::primal) {
    for (const auto& d : xi.lozenges) acc += lozenge_weight(d, w);
    for (const auto& t : xi.triangles) acc += triangle_weight(t, w);
    acc += hexagon_weight(h, w);
  } else {
    for (const auto& d : xi.lozenges) {
      const loz_color c = color_of(d, h.n);
      if (c == loz_color::blue)
        acc += 2.0 * lozenge_weight(d, w);
      else if (c == loz_color::green)
        acc += lozenge_weight(d, w);
    }
    for (const auto& t : xi.triangles) acc += triangle_weight(t, w);
    acc += hexagon_weight_primed(h, w);
  }
  return acc;
}

// Fixed tile order, so equal tilings compare equal as lists.
inline void canonical_sort(tiling_t& xi) {
  std::sort(xi.lozenges.begin(), xi.lozenges.end(), [](const lozenge& p, const lozenge& q) {
    return std::tie(p.kind, p.y, p.x) < std::tie(q.kind, q.y, q.x);
  });
  std::sort(xi.triangles.begin(), xi.triangles.end(),
            [](const border_triangle& p, const border_triangle& q) {
              return std::tie(p.e, p.upward) < std::tie(q.e, q.upward);
            });
}

// Standard tiling: blue lozenges fill ABEF above the equator and green ones
// plus downward triangles below it; green plus upward triangles fill BCDE
// above and red lozenges below.
inline tiling_t standard_tiling(const hexagon_t& h) {
  const int n = h.n, i = h.vi, j = h.vj;
  tiling_t xi;
  if (i <= j) {
    for (int y = j + 1; y <= n; ++y)
      for (int x = n - y; x <= n + i - y - 1; ++x)
        xi.lozenges.push_back({loz_kind::type_i, x, y});
    for (int b = j; b <= n - 2; ++b)
      for (int a = 0; a <= n - 2 - b; ++a) xi.lozenges.push_back({loz_kind::type_iii, a, b});
    for (int b = j - i; b <= j - 1; ++b)
      for (int a = n - b; a <= n + i - j - 1; ++a)
        xi.lozenges.push_back({loz_kind::type_iii, a, b});
    for (int y = j - i + 1; y <= j; ++y)
      for (int x = j - y; x <= n - y - 1; ++x) xi.lozenges.push_back({loz_kind::type_i, x, y});
    for (int e = 0; e <= n - j - 1; ++e) xi.triangles.push_back({false, e});
    for (int e = n - j; e <= n + i - j - 1; ++e) xi.triangles.push_back({true, e});
  } else {
    for (int y = j + 1; y <= n + j - i; ++y)
      for (int x = n - y; x <= n + j - y - 1; ++x) xi.lozenges.push_back({loz_kind::type_i, x, y});
    for (int b = j; b <= n - 2 - (i - j); ++b)
      for (int a = i - j; a <= n - 2 - b; ++a) xi.lozenges.push_back({loz_kind::type_iii, a, b});
    for (int b = 0; b <= j - 1; ++b)
      for (int a = n - b; a <= n - 1; ++a) xi.lozenges.push_back({loz_kind::type_iii, a, b});
    for (int y = 1; y <= j; ++y)
      for (int x = i - y; x <= n - y - 1; ++x) xi.lozenges.push_back({loz_kind::type_i, x, y});
    for (int e = i - j; e <= n - j - 1; ++e) xi.triangles.push_back({false, e});
    for (int e = n - j; e <= n - 1; ++e) xi.triangles.push_back({true, e});
  }
  canonical_sort(xi);
  return xi;
}

namespace detail {

// Triangle ids and same-side neighbor lists for the backtracking enumerator.
struct tri_graph {
  const hexagon_t* hex = nullptr;
  std::vector<mesh_tri> tris;
  std::vector<int> id;  // (sx * n + sy) * 2 + ne -> index or -1

  int lookup(int sx, int sy, bool ne) const {
    const int n = hex->n;
    if (sx < 0 || sx >= n || sy < 0 || sy >= n) return -1;
    return id[(std::size_t(sx) * std::size_t(n) + std::size_t(sy)) * 2 + (ne ? 1 : 0)];
  }
};

inline tri_graph build_tri_graph(const hexagon_t& h) {
  tri_graph g;
  g.hex = &h;
  g.tris = hexagon_triangles(h);
  g.id.assign(std::size_t(h.n) * std::size_t(h.n) * 2, -1);
  for (int t = 0; t < int(g.tris.size()); ++t) {
    const auto& tr = g.tris[std::size_t(t)];
    g.id[(std::size_t(tr.sx) * std::size_t(h.n) + std::size_t(tr.sy)) * 2 + (tr.ne ? 1 : 0)] = t;
  }
  return g;
}

}  // namespace detail

// Every tiling exactly once, in a fixed order.  Each border square resolves to
// exactly one standalone half; lozenges pair same-side triangle neighbors.
inline void for_each_tiling(const hexagon_t& h, const std::function<void(const tiling_t&)>& emit) {
  const auto g = detail::build_tri_graph(h);
  const int total = int(g.tris.size());
  if (total > 40) throw std::length_error("for_each_tiling: hexagon area exceeds the guard");
  const int n = h.n;

  std::vector<std::int8_t> used(std::size_t(total), 0);
  std::vector<std::int8_t> edge_state(std::size_t(n), 0);  // 0 open, 1 standalone taken, 2 pair taken

  struct move_t {
    int partner;  // -1 for standalone
    lozenge loz;
  };
  tiling_t cur;

  const std::function<void(int)> walk = [&](int from) {
    int t = from;
    while (t < total && used[std::size_t(t)]) ++t;
    if (t == total) {
      tiling_t out = cur;
      canonical_sort(out);
      emit(out);
      return;
    }
    const mesh_tri tr = g.tris[std::size_t(t)];
    const bool up = tri_in_upper(n, tr);
    const bool border = tr.sx + tr.sy + 1 == n;

    std::vector<move_t> moves;
    const auto try_pair = [&](int sx, int sy, bool ne, lozenge loz) {
      const int p = g.lookup(sx, sy, ne);
      if (p < 0 || used[std::size_t(p)]) return;
      if (tri_in_upper(n, {sx, sy, ne}) != up) return;
      moves.push_back({p, loz});
    };
    if (tr.ne) {
      if (!border) try_pair(tr.sx, tr.sy, false, {loz_kind::type_iii, tr.sx, tr.sy});
      try_pair(tr.sx + 1, tr.sy, false, {loz_kind::type_i, tr.sx, tr.sy + 1});
      try_pair(tr.sx, tr.sy + 1, false, {loz_kind::type_ii, tr.sx + 1, tr.sy});
    } else {
      if (!border) try_pair(tr.sx, tr.sy, true, {loz_kind::type_iii, tr.sx, tr.sy});
      try_pair(tr.sx - 1, tr.sy, true, {loz_kind::type_i, tr.sx - 1, tr.sy + 1});
      try_pair(tr.sx, tr.sy - 1, true, {loz_kind::type_ii, tr.sx + 1, tr.sy - 1});
    }
    const std::int8_t est = border ? edge_state[std::size_t(tr.sx)] : std::int8_t(0);

    if (border && est != 1) {
      // standalone allowed unless the partner half already stands alone
      edge_state[std::size_t(tr.sx)] = 1;
      used[std::size_t(t)] = 1;
      cur.triangles.push_back({tr.ne, tr.sx});
      walk(t + 1);
      cur.triangles.pop_back();
      used[std::size_t(t)] = 0;
      edge_state[std::size_t(tr.sx)] = est;
    }
    if (!border || est != 2) {
      for (const auto& mv : moves) {
        if (border) edge_state[std::size_t(tr.sx)] = 2;
        used[std::size_t(t)] = 1;
        used[std::size_t(mv.partner)] = 1;
        cur.lozenges.push_back(mv.loz);
        walk(t + 1);
        cur.lozenges.pop_back();
        used[std::size_t(mv.partner)] = 0;
        used[std::size_t(t)] = 0;
        if (border) edge_state[std::size_t(tr.sx)] = est;
      }
    }
  };
  walk(0);
}

inline std::vector<tiling_t> enumerate_tilings(const hexagon_t& h) {
  std::vector<tiling_t> out;
  for_each_tiling(h, [&](const tiling_t& t) { out.push_back(t); });
  return out;
}

// Height pair of a tiling on the two trapezoids, in the paper's normalization:
// the west equator corner carries 2*vj - vi upstairs and 2*vi - vj downstairs.
// Steps in positive directions {+x, -y, (-1,+1)} are +1 along tile sides and
// -2 across a lozenge; a standalone border triangle crosses its border edge.
struct height_pair_t {
  int n = 0;
  int vi = 0;
  int vj = 0;
  std::vector<int> up, lo;
  std::vector<std::uint8_t> in_up, in_lo;

  std::size_t idx(int x, int y) const { return std::size_t(x) * std::size_t(n + 1) + std::size_t(y); }
  bool has_up(int x, int y) const {
    return x >= 0 && x <= n && y >= 0 && y <= n && in_up[idx(x, y)];
  }
  bool has_lo(int x, int y) const {
    return x >= 0 && x <= n && y >= 0 && y <= n && in_lo[idx(x, y)];
  }
  int up_at(int x, int y) const {
    if (!has_up(x, y)) throw std::out_of_range("height_pair_t: point outside upper trapezoid");
    return up[idx(x, y)];
  }
  int lo_at(int x, int y) const {
    if (!has_lo(x, y)) throw std::out_of_range("height_pair_t: point outside lower trapezoid");
    return lo[idx(x, y)];
  }
};

namespace detail {

// Edge keys per trapezoid: dir 0 = (x,y)-(x+1,y), 1 = (x,y)-(x,y+1),
// 2 = anti-diagonal (x+1,y)-(x,y+1) of square (x,y).
struct edge_tab {
  int n = 0;
  std::vector<std::int8_t> st;  // 0 absent, 1 boundary (forced side), 2 free, 3 border
  std::size_t idx(int dir, int x, int y) const {
    return (std::size_t(dir) * std::size_t(n + 1) + std::size_t(x)) * std::size_t(n + 1) +
           std::size_t(y);
  }
  std::int8_t& at(int dir, int x, int y) { return st[idx(dir, x, y)]; }
  std::int8_t get(int dir, int x, int y) const { return st[idx(dir, x, y)]; }
};

inline void stamp_tri_edges(edge_tab& tab, const mesh_tri& t) {
  const auto bump = [&](int dir, int x, int y) {
    auto& s = tab.at(dir, x, y);
    s = std::int8_t(s == 0 ? 1 : 2);
  };
  if (t.ne) {
    bump(0, t.sx, t.sy + 1);
    bump(1, t.sx + 1, t.sy);
  } else {
    bump(0, t.sx, t.sy);
    bump(1, t.sx, t.sy);
  }
  bump(2, t.sx, t.sy);
}

// Edge tables for one side of the equator; border edges are re-marked after
// the adjacency count.
inline edge_tab side_edges(const hexagon_t& h, bool upper) {
  edge_tab tab;
  tab.n = h.n;
  tab.st.assign(3 * std::size_t(h.n + 1) * std::size_t(h.n + 1), 0);
  for (const auto& t : hexagon_triangles(h))
    if (tri_in_upper(h.n, t) == upper) stamp_tri_edges(tab, t);
  for (int e = h.equator_first(); e < h.equator_last(); ++e) tab.at(2, e, h.n - e - 1) = 3;
  return tab;
}

}  // namespace detail

inline height_pair_t tiling_heights(const hexagon_t& h, const tiling_t& xi) {
  validate_tiling(h, xi);
  const int n = h.n;
  height_pair_t hp;
  hp.n = n;
  hp.vi = h.vi;
  hp.vj = h.vj;
  const std::size_t cells = std::size_t(n + 1) * std::size_t(n + 1);
  hp.up.assign(cells, 0);
  hp.lo.assign(cells, 0);
  hp.in_up.assign(cells, 0);
  hp.in_lo.assign(cells, 0);
  for (int x = 0; x <= n; ++x)
    for (int y = 0; y <= n; ++y) {
      if (h.in_upper(x, y)) hp.in_up[hp.idx(x, y)] = 1;
      if (h.in_lower(x, y)) hp.in_lo[hp.idx(x, y)] = 1;
    }

  // crossed[side][dir][x][y]
  detail::edge_tab up_tab = detail::side_edges(h, true);
  detail::edge_tab lo_tab = detail::side_edges(h, false);
  std::vector<std::int8_t> crossed_up(up_tab.st.size(), 0), crossed_lo(lo_tab.st.size(), 0);
  for (const auto& d : xi.lozenges) {
    const bool up = lozenge_in_upper(d, n);
    auto& cr = up ? crossed_up : crossed_lo;
    auto& tab = up ? up_tab : lo_tab;
    switch (d.kind) {
      case loz_kind::type_i:
        cr[tab.idx(1, d.x + 1, d.y - 1)] = 1;
        break;
      case loz_kind::type_ii:
        cr[tab.idx(0, d.x - 1, d.y + 1)] = 1;
        break;
      case loz_kind::type_iii:
        cr[tab.idx(2, d.x, d.y)] = 1;
        break;
    }
  }
  for (const auto& t : xi.triangles) {
    auto& cr = t.upward ? crossed_up : crossed_lo;
    auto& tab = t.upward ? up_tab : lo_tab;
    cr[tab.idx(2, t.e, n - t.e - 1)] = 1;
  }

  const auto sweep = [&](bool upper) {
    const auto& tab = upper ? up_tab : lo_tab;
    const auto& cr = upper ? crossed_up : crossed_lo;
    auto& val = upper ? hp.up : hp.lo;
    const auto& in = upper ? hp.in_up : hp.in_lo;
    std::vector<std::uint8_t> done(hp.up.size(), 0);
    const int ax = h.a.x, ay = h.a.y;
    val[hp.idx(ax, ay)] = upper ? 2 * h.vj - h.vi : 2 * h.vi - h.vj;
    done[hp.idx(ax, ay)] = 1;
    std::vector<std::pair<int, int>> queue{{ax, ay}};
    // positive-direction deltas: side +1, crossing -2
    const auto delta = [&](int dir, int x, int y) {
      const auto s = tab.get(dir, x, y);
      if (s == 0) return 0;
      const bool cross = cr[tab.idx(dir, x, y)] != 0;
      return cross ? -2 : 1;
    };
    while (!queue.empty()) {
      const auto [x, y] = queue.back();
      queue.pop_back();
      const int here = val[hp.idx(x, y)];
      const auto visit = [&](int nx, int ny, int v) {
        if (nx < 0 || nx > n || ny < 0 || ny > n || !in[hp.idx(nx, ny)]) return;
        if (done[hp.idx(nx, ny)]) {
          if (val[hp.idx(nx, ny)] != v)
            throw std::invalid_argument("tiling_heights: inconsistent height field");
          return;
        }
        val[hp.idx(nx, ny)] = v;
        done[hp.idx(nx, ny)] = 1;
        queue.push_back({nx, ny});
      };
      // +x edge (positive tail here)
      if (x + 1 <= n && tab.get(0, x, y) != 0) visit(x + 1, y, here + delta(0, x, y));
      if (x - 1 >= 0 && tab.get(0, x - 1, y) != 0) visit(x - 1, y, here - delta(0, x - 1, y));
      // -y is positive: edge (x,y)-(x,y+1) has tail (x,y+1)
      if (y + 1 <= n && tab.get(1, x, y) != 0) visit(x, y + 1, here - delta(1, x, y));
      if (y - 1 >= 0 && tab.get(1, x, y - 1) != 0) visit(x, y - 1, here + delta(1, x, y - 1));
      // diagonal of square (x, y-1): (x+1,y-1) -> (x,y) is positive
      if (x + 1 <= n && y - 1 >= 0 && tab.get(2, x, y - 1) != 0)
        visit(x + 1, y - 1, here - delta(2, x, y - 1));
      if (x - 1 >= 0 && y + 1 <= n && tab.get(2, x - 1, y) != 0)
        visit(x - 1, y + 1, here + delta(2, x - 1, y));
    }
    for (int x = 0; x <= n; ++x)
      for (int y = 0; y <= n; ++y)
        if (in[hp.idx(x, y)] && !done[hp.idx(x, y)])
          throw std::invalid_argument("tiling_heights: trapezoid not connected through tile edges");
  };
  sweep(true);
  sweep(false);
  return hp;
}

}  // namespace hivelab
