#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hivelab/lozenge.hpp"

namespace hivelab {

// Lattice domains are unions of mesh triangles.  A unit step is usable when
// the edge it travels along belongs to at least one triangle of the domain,
// so paths may run on the boundary.  Positive directions: +x, -y, (-1,+1).

constexpr int dist_inf = std::numeric_limits<int>::max();

namespace detail {

constexpr std::array<std::array<int, 2>, 3> positive_dirs = {{{1, 0}, {0, -1}, {-1, 1}}};

}  // namespace detail

struct domain_t {
  std::vector<mesh_tri> tris;   // sorted, unique
  std::vector<lattice_pt> pts;  // sorted corners of tris

  // bounding box of the lattice points
  int x0 = 0, y0 = 0, w = 0, h = 0;

  // edge keys per unit square (x,y) relative to (x0,y0): dir 0 = bottom side,
  // 1 = left side, 2 = anti-diagonal; value = number of covering triangles
  std::vector<std::int8_t> edge_cover;
  // per point, target index of each positive step, -1 where the edge is absent
  std::vector<std::array<int, 3>> step;

  mutable std::vector<std::vector<int>> dist_rows;  // lazy BFS rows, -1 unreachable

  std::size_t edge_idx(int dir, int ex, int ey) const {
    return (std::size_t(dir) * std::size_t(w + 1) + std::size_t(ex - x0)) * std::size_t(h + 1) +
           std::size_t(ey - y0);
  }
  bool edge_in_box(int ex, int ey) const {
    return ex >= x0 && ex <= x0 + w && ey >= y0 && ey <= y0 + h;
  }
  int cover(int dir, int ex, int ey) const {
    return edge_in_box(ex, ey) ? edge_cover[edge_idx(dir, ex, ey)] : 0;
  }

  int pt_index(lattice_pt p) const {
    const auto it = std::lower_bound(pts.begin(), pts.end(), p);
    if (it == pts.end() || !(*it == p)) return -1;
    return int(it - pts.begin());
  }
  bool contains(lattice_pt p) const { return pt_index(p) >= 0; }
  bool has_tri(const mesh_tri& t) const {
    return std::binary_search(tris.begin(), tris.end(), t);
  }
};

namespace detail {

// Edge key of the positive step from p in direction dir.
inline std::array<int, 3> step_edge(lattice_pt p, int dir) {
  switch (dir) {
    case 0:
      return {0, p.x, p.y};  // (x,y)-(x+1,y)
    case 1:
      return {1, p.x, p.y - 1};  // (x,y-1)-(x,y)
    default:
      return {2, p.x - 1, p.y};  // (x,y)-(x-1,y+1)
  }
}

// The two triangles able to cover an edge key.
inline std::array<mesh_tri, 2> edge_tris(int dir, int ex, int ey) {
  switch (dir) {
    case 0:
      return {{{ex, ey, false}, {ex, ey - 1, true}}};
    case 1:
      return {{{ex, ey, false}, {ex - 1, ey, true}}};
    default:
      return {{{ex, ey, false}, {ex, ey, true}}};
  }
}

}  // namespace detail

inline domain_t domain_from_triangles(std::vector<mesh_tri> tris) {
  if (tris.empty()) throw std::invalid_argument("domain_from_triangles: empty triangle set");
  std::sort(tris.begin(), tris.end());
  tris.erase(std::unique(tris.begin(), tris.end()), tris.end());

  domain_t d;
  d.tris = std::move(tris);
  std::set<lattice_pt> pts;
  for (const auto& t : d.tris)
    for (const auto& p : tri_corners(t)) pts.insert(p);
  d.pts.assign(pts.begin(), pts.end());

  int x1 = d.pts.front().x, y1 = d.pts.front().y;
  d.x0 = x1;
  d.y0 = y1;
  for (const auto& p : d.pts) {
    d.x0 = std::min(d.x0, p.x);
    d.y0 = std::min(d.y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  d.w = x1 - d.x0;
  d.h = y1 - d.y0;

  d.edge_cover.assign(3 * std::size_t(d.w + 1) * std::size_t(d.h + 1), 0);
  const auto bump = [&](int dir, int ex, int ey) { ++d.edge_cover[d.edge_idx(dir, ex, ey)]; };
  for (const auto& t : d.tris) {
    if (t.ne) {
      bump(0, t.sx, t.sy + 1);
      bump(1, t.sx + 1, t.sy);
    } else {
      bump(0, t.sx, t.sy);
      bump(1, t.sx, t.sy);
    }
    bump(2, t.sx, t.sy);
  }

  d.step.assign(d.pts.size(), {-1, -1, -1});
  for (std::size_t i = 0; i < d.pts.size(); ++i)
    for (int dir = 0; dir < 3; ++dir) {
      const auto e = detail::step_edge(d.pts[i], dir);
      if (d.cover(e[0], e[1], e[2]) == 0) continue;
      const lattice_pt q{d.pts[i].x + detail::positive_dirs[std::size_t(dir)][0],
                         d.pts[i].y + detail::positive_dirs[std::size_t(dir)][1]};
      d.step[i][std::size_t(dir)] = d.pt_index(q);
    }
  d.dist_rows.assign(d.pts.size(), {});
  return d;
}

namespace detail {

inline const std::vector<int>& bfs_row(const domain_t& d, int src) {
  auto& row = d.dist_rows[std::size_t(src)];
  if (!row.empty()) return row;
  row.assign(d.pts.size(), -1);
  row[std::size_t(src)] = 0;
  std::vector<int> queue{src};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (const int v : d.step[std::size_t(u)])
      if (v >= 0 && row[std::size_t(v)] < 0) {
        row[std::size_t(v)] = row[std::size_t(u)] + 1;
        queue.push_back(v);
      }
  }
  return row;
}

}  // namespace detail

// Minimal length of a positively oriented path; asymmetric, dist_inf when no
// path exists.
inline int d_R(const domain_t& d, lattice_pt u, lattice_pt v) {
  const int su = d.pt_index(u), sv = d.pt_index(v);
  if (su < 0 || sv < 0) throw std::out_of_range("d_R: point outside the domain");
  const int dist = detail::bfs_row(d, su)[std::size_t(sv)];
  return dist < 0 ? dist_inf : dist;
}

inline bool domain_connected(const domain_t& d) {
  // triangle adjacency via shared edges; walk from the first triangle
  std::map<std::array<int, 3>, std::vector<int>> by_edge;
  for (std::size_t i = 0; i < d.tris.size(); ++i) {
    const auto& t = d.tris[i];
    if (t.ne) {
      by_edge[{0, t.sx, t.sy + 1}].push_back(int(i));
      by_edge[{1, t.sx + 1, t.sy}].push_back(int(i));
    } else {
      by_edge[{0, t.sx, t.sy}].push_back(int(i));
      by_edge[{1, t.sx, t.sy}].push_back(int(i));
    }
    by_edge[{2, t.sx, t.sy}].push_back(int(i));
  }
  std::vector<std::uint8_t> seen(d.tris.size(), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto& t = d.tris[std::size_t(queue[head])];
    const auto visit = [&](const std::array<int, 3>& key) {
      for (const int j : by_edge[key])
        if (!seen[std::size_t(j)]) {
          seen[std::size_t(j)] = 1;
          ++reached;
          queue.push_back(j);
        }
    };
    if (t.ne) {
      visit({0, t.sx, t.sy + 1});
      visit({1, t.sx + 1, t.sy});
    } else {
      visit({0, t.sx, t.sy});
      visit({1, t.sx, t.sy});
    }
    visit({2, t.sx, t.sy});
  }
  return reached == d.tris.size();
}

inline int euler_characteristic(const domain_t& d) {
  std::size_t edges = 0;
  for (const auto c : d.edge_cover) edges += c ? 1 : 0;
  return int(d.pts.size()) - int(edges) + int(d.tris.size());
}

inline bool simply_connected(const domain_t& d) {
  return domain_connected(d) && euler_characteristic(d) == 1;
}

// Directed boundary edges (covered once, interior on the left) stitched into
// loops; a point with two outgoing boundary edges is a pinch and rejected.
inline std::vector<std::vector<lattice_pt>> boundary_loops(const domain_t& d) {
  std::map<lattice_pt, lattice_pt> next;
  const auto emit = [&](lattice_pt from, lattice_pt to) {
    if (!next.emplace(from, to).second)
      throw std::invalid_argument("boundary_loops: boundary pinches at a point");
  };
  for (const auto& t : d.tris) {
    const auto once = [&](int dir, int ex, int ey) {
      return d.edge_cover[d.edge_idx(dir, ex, ey)] == 1;
    };
    if (t.ne) {
      if (once(0, t.sx, t.sy + 1)) emit({t.sx + 1, t.sy + 1}, {t.sx, t.sy + 1});
      if (once(1, t.sx + 1, t.sy)) emit({t.sx + 1, t.sy}, {t.sx + 1, t.sy + 1});
      if (once(2, t.sx, t.sy)) emit({t.sx, t.sy + 1}, {t.sx + 1, t.sy});
    } else {
      if (once(0, t.sx, t.sy)) emit({t.sx, t.sy}, {t.sx + 1, t.sy});
      if (once(1, t.sx, t.sy)) emit({t.sx, t.sy + 1}, {t.sx, t.sy});
      if (once(2, t.sx, t.sy)) emit({t.sx + 1, t.sy}, {t.sx, t.sy + 1});
    }
  }
  std::vector<std::vector<lattice_pt>> loops;
  while (!next.empty()) {
    std::vector<lattice_pt> loop;
    lattice_pt p = next.begin()->first;
    const lattice_pt start = p;
    do {
      loop.push_back(p);
      const auto it = next.find(p);
      if (it == next.end())
        throw std::invalid_argument("boundary_loops: boundary does not close");
      p = it->second;
      next.erase(it);
    } while (!(p == start));
    loops.push_back(std::move(loop));
  }
  return loops;
}

namespace detail {

// Doubled shoelace in the sheared plane (2x+y, y); positive means the loop
// runs counterclockwise.
inline long long loop_signed_area(const std::vector<lattice_pt>& loop) {
  long long s = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const auto& p = loop[i];
    const auto& q = loop[(i + 1) % loop.size()];
    s += (2LL * p.x + p.y) * q.y - (2LL * q.x + q.y) * p.y;
  }
  return s;
}

// Expand a closed polygon into unit steps; segments must be multiples of the
// six lattice directions.
inline std::vector<lattice_pt> unit_loop(std::vector<lattice_pt> poly) {
  if (poly.size() > 1 && poly.back() == poly.front()) poly.pop_back();
  if (poly.size() < 3) throw std::invalid_argument("lattice loop needs at least 3 vertices");
  std::vector<lattice_pt> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    lattice_pt p = poly[i];
    const lattice_pt q = poly[(i + 1) % poly.size()];
    int dx = q.x - p.x, dy = q.y - p.y;
    const int len = std::max(std::abs(dx), std::abs(dy));
    if (len == 0) throw std::invalid_argument("lattice loop repeats a vertex");
    if (dx % len || dy % len || (dx / len && dy / len && dx / len != -dy / len) ||
        std::abs(dx / len) > 1 || std::abs(dy / len) > 1)
      throw std::invalid_argument("lattice loop segment is not a lattice direction");
    const int ux = dx / len, uy = dy / len;
    for (int k = 0; k < len; ++k) {
      out.push_back(p);
      p = {p.x + ux, p.y + uy};
    }
  }
  return out;
}

// The triangle whose counterclockwise edge list contains the step u -> v.
inline mesh_tri left_tri(lattice_pt u, lattice_pt v) {
  const int dx = v.x - u.x, dy = v.y - u.y;
  if (dx == 1 && dy == 0) return {u.x, u.y, false};
  if (dx == 0 && dy == 1) return {u.x - 1, u.y, true};
  if (dx == -1 && dy == 1) return {u.x - 1, u.y, false};
  if (dx == -1 && dy == 0) return {u.x - 1, u.y - 1, true};
  if (dx == 0 && dy == -1) return {u.x, u.y - 1, false};
  if (dx == 1 && dy == -1) return {u.x, u.y - 1, true};
  throw std::invalid_argument("left_tri: not a unit lattice step");
}

inline std::array<int, 3> tri_edge_key(const mesh_tri& t, int which) {
  if (t.ne) {
    if (which == 0) return {0, t.sx, t.sy + 1};
    if (which == 1) return {1, t.sx + 1, t.sy};
  } else {
    if (which == 0) return {0, t.sx, t.sy};
    if (which == 1) return {1, t.sx, t.sy};
  }
  return {2, t.sx, t.sy};
}

}  // namespace detail

// Fill the region enclosed by a closed lattice path, minus optional holes.
// The outer loop is normalized to run counterclockwise; hole edges only act
// as barriers, so their orientation does not matter.
inline domain_t domain_from_boundary(std::vector<lattice_pt> outer,
                                     const std::vector<std::vector<lattice_pt>>& holes = {}) {
  auto loop = detail::unit_loop(outer);
  if (detail::loop_signed_area(loop) < 0) {
    std::reverse(loop.begin(), loop.end());
  } else if (detail::loop_signed_area(loop) == 0) {
    throw std::invalid_argument("domain_from_boundary: outer loop encloses no area");
  }

  std::set<std::array<int, 3>> barrier;
  const auto add_barrier = [&](const std::vector<lattice_pt>& l) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      const lattice_pt u = l[i], v = l[(i + 1) % l.size()];
      barrier.insert(detail::tri_edge_key(detail::left_tri(u, v), [&] {
        const int dx = v.x - u.x, dy = v.y - u.y;
        if (dy == 0) return 0;
        if (dx == 0) return 1;
        return 2;
      }()));
    }
  };
  add_barrier(loop);
  std::vector<std::vector<lattice_pt>> hole_loops;
  for (const auto& hl : holes) {
    hole_loops.push_back(detail::unit_loop(hl));
    add_barrier(hole_loops.back());
  }

  int bx0 = loop.front().x, by0 = loop.front().y, bx1 = bx0, by1 = by0;
  for (const auto& p : loop) {
    bx0 = std::min(bx0, p.x);
    by0 = std::min(by0, p.y);
    bx1 = std::max(bx1, p.x);
    by1 = std::max(by1, p.y);
  }

  std::set<mesh_tri> filled;
  std::vector<mesh_tri> queue;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const mesh_tri seed = detail::left_tri(loop[i], loop[(i + 1) % loop.size()]);
    if (filled.insert(seed).second) queue.push_back(seed);
  }
  while (!queue.empty()) {
    const mesh_tri t = queue.back();
    queue.pop_back();
    if (t.sx < bx0 || t.sx >= bx1 || t.sy < by0 || t.sy >= by1)
      throw std::invalid_argument("domain_from_boundary: fill leaks past the boundary");
    for (int which = 0; which < 3; ++which) {
      const auto key = detail::tri_edge_key(t, which);
      if (barrier.count(key)) continue;
      for (const auto& u : detail::edge_tris(key[0], key[1], key[2]))
        if (!(u == t) && filled.insert(u).second) queue.push_back(u);
    }
  }

  domain_t d = domain_from_triangles({filled.begin(), filled.end()});
  // every barrier edge must surface as a boundary edge, and nothing else may
  std::size_t on_boundary = 0;
  for (const auto c : d.edge_cover) on_boundary += c == 1 ? 1 : 0;
  for (const auto& key : barrier)
    if (d.cover(key[0], key[1], key[2]) != 1)
      throw std::invalid_argument("domain_from_boundary: a boundary edge ended up interior");
  if (on_boundary != barrier.size())
    throw std::invalid_argument("domain_from_boundary: holes do not match the filled region");
  return d;
}

inline domain_t domain_difference(const domain_t& r0, const domain_t& r1) {
  std::vector<mesh_tri> tris;
  for (const auto& t : r1.tris)
    if (!r0.has_tri(t))
      throw std::invalid_argument("domain_difference: second domain is not contained in the first");
  for (const auto& t : r0.tris)
    if (!r1.has_tri(t)) tris.push_back(t);
  return domain_from_triangles(std::move(tris));
}

inline domain_t hexagon_domain(const hexagon_t& h) {
  return domain_from_triangles(hexagon_triangles(h));
}

inline domain_t trapezoid_domain(const hexagon_t& h, bool upper) {
  std::vector<mesh_tri> tris;
  for (const auto& t : hexagon_triangles(h))
    if (tri_in_upper(h.n, t) == upper) tris.push_back(t);
  return domain_from_triangles(std::move(tris));
}

using height_values = std::map<lattice_pt, int>;

// Walk each boundary loop with the forced +-1 steps; empty when the loop does
// not close up, which is exactly an up/down triangle imbalance.
inline std::optional<height_values> boundary_heights(const domain_t& d) {
  height_values f;
  for (const auto& loop : boundary_loops(d)) {
    int v = 0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      f[loop[i]] = v;
      const lattice_pt u = loop[i], q = loop[(i + 1) % loop.size()];
      const int dx = q.x - u.x, dy = q.y - u.y;
      const bool positive = (dx == 1 && dy == 0) || (dx == 0 && dy == -1) || (dx == -1 && dy == 1);
      v += positive ? 1 : -1;
    }
    if (v != 0) return std::nullopt;
  }
  return f;
}

// Thurston: a boundary function must exist and obey the distance bound.
inline bool is_tileable(const domain_t& d) {
  if (!simply_connected(d))
    throw std::invalid_argument(
        "is_tileable: domain is not simply connected; use extendability_annulus");
  const auto f = boundary_heights(d);
  if (!f) return false;
  for (const auto& [u, fu] : *f) {
    const auto& row = detail::bfs_row(d, d.pt_index(u));
    for (const auto& [v, fv] : *f) {
      const int dist = row[std::size_t(d.pt_index(v))];
      if (dist >= 0 && fv - fu > dist) return false;
    }
  }
  return true;
}

struct extension_error : std::runtime_error {
  lattice_pt u, v;
  extension_error(const std::string& what, lattice_pt uu, lattice_pt vv)
      : std::runtime_error(what + " at (" + std::to_string(uu.x) + "," + std::to_string(uu.y) +
                           ") vs (" + std::to_string(vv.x) + "," + std::to_string(vv.y) + ")"),
        u(uu),
        v(vv) {}
};

// Pointwise-maximal extension min_u f(u) + d(u, w).  The pin pairs must obey
// the distance bound and share residues mod 3, or no extension exists.
inline height_values max_extension(const domain_t& d, const height_values& pins) {
  if (pins.empty()) throw std::invalid_argument("max_extension: no pins");
  std::vector<std::pair<int, int>> src;  // point index, value
  for (const auto& [p, value] : pins) {
    const int i = d.pt_index(p);
    if (i < 0) throw std::out_of_range("max_extension: pin outside the domain");
    src.emplace_back(i, value);
  }
  for (const auto& [iu, fu] : src) {
    const auto& row = detail::bfs_row(d, iu);
    for (const auto& [iv, fv] : src) {
      const int dist = row[std::size_t(iv)];
      if (dist < 0) continue;
      const int slack = dist - fv + fu;
      if (slack < 0)
        throw extension_error("max_extension: pins violate the distance bound",
                              d.pts[std::size_t(iu)], d.pts[std::size_t(iv)]);
      if (slack % 3 != 0)
        throw extension_error("max_extension: pins have incompatible residues",
                              d.pts[std::size_t(iu)], d.pts[std::size_t(iv)]);
    }
  }
  std::vector<long long> best(d.pts.size(), std::numeric_limits<long long>::max());
  for (const auto& [iu, fu] : src) {
    const auto& row = detail::bfs_row(d, iu);
    for (std::size_t i = 0; i < d.pts.size(); ++i)
      if (row[i] >= 0) best[i] = std::min(best[i], (long long)fu + row[i]);
  }
  height_values out;
  for (std::size_t i = 0; i < d.pts.size(); ++i) {
    if (best[i] == std::numeric_limits<long long>::max())
      throw extension_error("max_extension: point unreachable from every pin", d.pts[i], d.pts[i]);
    out[d.pts[i]] = int(best[i]);
  }
  return out;
}

// Steps of a full height field: +1 or -2 along positive directions, and +1
// only along boundary edges, where tiles cannot be crossed.
inline bool is_height_function(const domain_t& d, const height_values& f) {
  std::vector<int> val(d.pts.size());
  for (std::size_t i = 0; i < d.pts.size(); ++i) {
    const auto it = f.find(d.pts[i]);
    if (it == f.end())
      throw std::invalid_argument("is_height_function: field does not cover the domain");
    val[i] = it->second;
  }
  for (std::size_t i = 0; i < d.pts.size(); ++i)
    for (int dir = 0; dir < 3; ++dir) {
      const int j = d.step[i][std::size_t(dir)];
      if (j < 0) continue;
      const int delta = val[std::size_t(j)] - val[i];
      const auto e = detail::step_edge(d.pts[i], dir);
      if (d.cover(e[0], e[1], e[2]) == 1) {
        if (delta != 1) return false;
      } else if (delta != 1 && delta != -2) {
        return false;
      }
    }
  return true;
}

// Height field of a lozenge tiling given as matched triangle pairs covering
// the domain; anchored at the smallest lattice point with value 0.
inline height_values heights_from_matching(
    const domain_t& d, const std::vector<std::pair<mesh_tri, mesh_tri>>& lozenges) {
  std::set<std::array<int, 3>> crossed;
  std::set<mesh_tri> used;
  for (const auto& [s, t] : lozenges) {
    if (!d.has_tri(s) || !d.has_tri(t))
      throw std::invalid_argument("heights_from_matching: tile outside the domain");
    if (!used.insert(s).second || !used.insert(t).second)
      throw std::invalid_argument("heights_from_matching: triangle covered twice");
    bool adjacent = false;
    for (int which = 0; which < 3 && !adjacent; ++which) {
      const auto key = detail::tri_edge_key(s, which);
      for (const auto& u : detail::edge_tris(key[0], key[1], key[2]))
        if (u == t) {
          crossed.insert(key);
          adjacent = true;
        }
    }
    if (!adjacent) throw std::invalid_argument("heights_from_matching: pair is not adjacent");
  }
  if (used.size() != d.tris.size())
    throw std::invalid_argument("heights_from_matching: tiles do not cover the domain");

  // BFS along positive steps assigns the field; every triangle has a positive
  // 3-cycle around it, so edge-connected domains are fully reachable.  A
  // second pass re-checks every step, which is where an annulus mismatch
  // shows up.
  std::vector<int> val(d.pts.size(), 0);
  std::vector<std::uint8_t> done(d.pts.size(), 0);
  const auto delta_of = [&](int i, int dir) {
    const auto e = detail::step_edge(d.pts[std::size_t(i)], dir);
    return crossed.count(e) ? -2 : 1;
  };
  done[0] = 1;
  std::vector<int> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int i = queue[std::size_t(head)];
    for (int dir = 0; dir < 3; ++dir) {
      const int j = d.step[std::size_t(i)][std::size_t(dir)];
      if (j < 0 || done[std::size_t(j)]) continue;
      val[std::size_t(j)] = val[std::size_t(i)] + delta_of(i, dir);
      done[std::size_t(j)] = 1;
      queue.push_back(j);
    }
  }
  for (std::size_t i = 0; i < d.pts.size(); ++i) {
    if (!done[i])
      throw std::invalid_argument("heights_from_matching: domain not connected through edges");
    for (int dir = 0; dir < 3; ++dir) {
      const int j = d.step[i][std::size_t(dir)];
      if (j >= 0 && val[std::size_t(j)] - val[i] != delta_of(int(i), dir))
        throw std::invalid_argument("heights_from_matching: inconsistent height field");
    }
  }
  height_values out;
  for (std::size_t i = 0; i < d.pts.size(); ++i) out[d.pts[i]] = val[i];
  return out;
}

struct annulus_margins {
  int m = 0;
  double eps_hat = 0.0;
  double eps_tilde = 0.0;
  double eps_prime = 0.0;
  // affine reference a0 + ax*x + ay*y with tilt inside (1 - eps_hat)K
  double a0 = 0.0, ax = 0.0, ay = 0.0;
};

// Tilt membership, lattice coordinates: slopes along the three positive
// directions are gx, -gy and gy - gx, and K is exactly where all three stay
// at most 1 (they sum to zero, so the -2 bounds follow).
inline bool in_K(double gx, double gy, double shrink = 0.0) {
  const double cap = 1.0 - shrink;
  return gx <= cap && -gy <= cap && gy - gx <= cap;
}

namespace detail {

inline std::vector<lattice_pt> loop_points(const domain_t& d) {
  std::vector<lattice_pt> out;
  for (const auto& loop : boundary_loops(d)) out.insert(out.end(), loop.begin(), loop.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Combined boundary data on an annulus extends after shifting the inner part
// by some chi in {-1,0,1}; mod 3 rules out all but one candidate.  The margin
// parameters are optional and reported with a witnessing point when violated.
inline int extendability_annulus(const domain_t& r0, const domain_t& r1, const height_values& g0,
                                 const height_values& g1,
                                 const annulus_margins* margins = nullptr) {
  const domain_t ring = domain_difference(r0, r1);
  const auto p0 = detail::loop_points(r0);
  const auto p1 = detail::loop_points(r1);
  const auto pick = [](const height_values& g, const std::vector<lattice_pt>& pts,
                       const char* who) {
    height_values out;
    for (const auto& p : pts) {
      const auto it = g.find(p);
      if (it == g.end())
        throw std::invalid_argument(std::string("extendability_annulus: ") + who +
                                    " misses a boundary point");
      out[p] = it->second;
    }
    return out;
  };
  const height_values b0 = pick(g0, p0, "outer data");
  const height_values b1 = pick(g1, p1, "inner data");

  if (margins) {
    if (!(2 * margins->eps_prime < margins->eps_hat * margins->eps_tilde))
      throw std::invalid_argument("extendability_annulus: need 2*eps' < eps-hat * eps-tilde");
    if (!in_K(margins->ax, margins->ay, margins->eps_hat))
      throw std::invalid_argument(
          "extendability_annulus: affine tilt outside the shrunk gradient set");
    const auto gap = [&](lattice_pt x, const std::vector<lattice_pt>& other) {
      int best = dist_inf;
      lattice_pt arg = x;
      const auto& row = detail::bfs_row(r0, r0.pt_index(x));
      for (const auto& b : other) {
        const int dist = row[std::size_t(r0.pt_index(b))];
        if (dist >= 0 && dist < best) {
          best = dist;
          arg = b;
        }
      }
      return std::pair<int, lattice_pt>(best, arg);
    };
    for (const auto& x : p1) {
      const auto [dist, b] = gap(x, p0);
      if (!(double(dist) > margins->eps_tilde * margins->m))
        throw extension_error("extendability_annulus: inner boundary too close to the outer one",
                              x, b);
    }
    for (const auto& y : p0) {
      const auto [dist, b] = gap(y, p1);
      if (!(double(dist) > margins->eps_tilde * margins->m))
        throw extension_error("extendability_annulus: outer boundary too close to the inner one",
                              y, b);
    }
    const auto near_affine = [&](const height_values& g) {
      for (const auto& [p, value] : g) {
        const double a = margins->a0 + margins->ax * p.x + margins->ay * p.y;
        if (!(std::abs(value - a) < margins->eps_prime * margins->m))
          throw extension_error("extendability_annulus: boundary data strays from the affine", p,
                                p);
      }
    };
    near_affine(b0);
    near_affine(b1);
  }

  // the data must extend on its own domain first
  max_extension(r0, b0);
  max_extension(r1, b1);

  std::optional<extension_error> failure;
  for (const int chi : {0, -1, 1}) {
    height_values pins = b0;
    for (const auto& [p, value] : b1) pins[p] = value + chi;
    try {
      max_extension(ring, pins);
      return chi;
    } catch (const extension_error& e) {
      failure = e;
    }
  }
  throw *failure;
}

// ---- hexagon height pairs ----

namespace detail {

// Equator sum of any height pair: vi + vj at the west corner, +1 per step
// east.
inline int equator_sum(const hexagon_t& h, int e) {
  return h.vi + h.vj + (e - h.equator_first());
}

inline height_pair_t standard_heights(const hexagon_t& h) {
  return tiling_heights(h, standard_tiling(h));
}

}  // namespace detail

inline bool pair_same_hexagon(const height_pair_t& a, const height_pair_t& b) {
  return a.n == b.n && a.vi == b.vi && a.vj == b.vj;
}

// f v g: larger upstairs, smaller downstairs.  The equator sums survive
// because both terms split it the same way.
inline height_pair_t pair_join(const height_pair_t& f, const height_pair_t& g) {
  if (!pair_same_hexagon(f, g)) throw std::invalid_argument("pair_join: hexagons differ");
  height_pair_t out = f;
  for (std::size_t i = 0; i < out.up.size(); ++i) {
    if (out.in_up[i]) out.up[i] = std::max(f.up[i], g.up[i]);
    if (out.in_lo[i]) out.lo[i] = std::min(f.lo[i], g.lo[i]);
  }
  return out;
}

inline height_pair_t pair_meet(const height_pair_t& f, const height_pair_t& g) {
  if (!pair_same_hexagon(f, g)) throw std::invalid_argument("pair_meet: hexagons differ");
  height_pair_t out = f;
  for (std::size_t i = 0; i < out.up.size(); ++i) {
    if (out.in_up[i]) out.up[i] = std::min(f.up[i], g.up[i]);
    if (out.in_lo[i]) out.lo[i] = std::max(f.lo[i], g.lo[i]);
  }
  return out;
}

inline bool pair_leq(const height_pair_t& f, const height_pair_t& g) {
  if (!pair_same_hexagon(f, g)) throw std::invalid_argument("pair_leq: hexagons differ");
  for (std::size_t i = 0; i < f.up.size(); ++i) {
    if (f.in_up[i] && f.up[i] > g.up[i]) return false;
    if (f.in_lo[i] && f.lo[i] < g.lo[i]) return false;
  }
  return true;
}

// Validity of a pair: height steps on each trapezoid with the +1 boundary
// rule away from the equator, the pinned west-corner values, and the linear
// equator sum.  Equator edges may be crossed from exactly one side, which the
// sum check enforces.
inline bool is_height_pair(const hexagon_t& h, const height_pair_t& f) {
  if (f.n != h.n || f.vi != h.vi || f.vj != h.vj) return false;
  if (f.up_at(h.a.x, h.a.y) != 2 * h.vj - h.vi) return false;
  if (f.lo_at(h.a.x, h.a.y) != 2 * h.vi - h.vj) return false;
  for (const bool upper : {true, false}) {
    const domain_t dom = trapezoid_domain(h, upper);
    for (std::size_t i = 0; i < dom.pts.size(); ++i) {
      const lattice_pt p = dom.pts[i];
      if (!(upper ? f.has_up(p.x, p.y) : f.has_lo(p.x, p.y))) return false;
      const int fp = upper ? f.up_at(p.x, p.y) : f.lo_at(p.x, p.y);
      for (int dir = 0; dir < 3; ++dir) {
        const int j = dom.step[i][std::size_t(dir)];
        if (j < 0) continue;
        const lattice_pt q = dom.pts[std::size_t(j)];
        const int delta = (upper ? f.up_at(q.x, q.y) : f.lo_at(q.x, q.y)) - fp;
        if (delta != 1 && delta != -2) return false;
        const auto e = detail::step_edge(p, dir);
        const bool on_equator = e[0] == 2 && e[1] + e[2] == h.n - 1;
        if (!on_equator && dom.cover(e[0], e[1], e[2]) == 1 && delta != 1) return false;
      }
    }
  }
  for (int e = h.equator_first(); e <= h.equator_last(); ++e)
    if (f.up_at(e, h.n - e) + f.lo_at(e, h.n - e) != detail::equator_sum(h, e)) return false;
  return true;
}

namespace detail {

// min over all u of label(u) + d(u, w), or the reversed-step variant.
inline std::vector<long long> cone_minima(const domain_t& d, const std::vector<long long>& label,
                                          bool reversed) {
  using entry = std::pair<long long, int>;
  std::priority_queue<entry, std::vector<entry>, std::greater<entry>> pq;
  std::vector<long long> dist(label);
  for (std::size_t i = 0; i < dist.size(); ++i) pq.emplace(dist[i], int(i));
  std::vector<std::uint8_t> done(dist.size(), 0);
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (done[std::size_t(u)]) continue;
    done[std::size_t(u)] = 1;
    for (int dir = 0; dir < 3; ++dir) {
      int to = d.step[std::size_t(u)][std::size_t(dir)];
      if (reversed) {
        // relax along steps arriving at u instead
        const lattice_pt p = d.pts[std::size_t(u)];
        const lattice_pt q{p.x - positive_dirs[std::size_t(dir)][0],
                           p.y - positive_dirs[std::size_t(dir)][1]};
        to = d.pt_index(q);
        if (to >= 0 && d.step[std::size_t(to)][std::size_t(dir)] != u) to = -1;
      }
      if (to < 0) continue;
      if (dist[std::size_t(to)] > du + 1) {
        dist[std::size_t(to)] = du + 1;
        pq.emplace(dist[std::size_t(to)], to);
      }
    }
  }
  return dist;
}

}  // namespace detail

// Round an asymptotic height pair to a discrete one within 3 everywhere: snap
// each value down (up downstairs) to the residue class of the standard
// heights, take the maximal field under the snapped cones upstairs, and pin
// the equator sums before extending downstairs.  Inputs must have directional
// slopes at most 1 and exact equator sums; boundary values are free so that
// affine pairs qualify, and when they match the standard boundary the result
// is a genuine height pair.
inline height_pair_t round_asymptotic(const hexagon_t& h,
                                      const std::function<double(lattice_pt)>& f_up,
                                      const std::function<double(lattice_pt)>& f_lo,
                                      double tol = 1e-7) {
  const height_pair_t std_pair = detail::standard_heights(h);
  height_pair_t out = std_pair;

  const domain_t dom_up = trapezoid_domain(h, true);
  const domain_t dom_lo = trapezoid_domain(h, false);
  const auto check_slopes = [&](const domain_t& dom, const std::function<double(lattice_pt)>& f) {
    for (std::size_t i = 0; i < dom.pts.size(); ++i)
      for (const int j : dom.step[i])
        if (j >= 0 && f(dom.pts[std::size_t(j)]) - f(dom.pts[i]) > 1.0 + tol)
          throw std::invalid_argument("round_asymptotic: directional slope exceeds 1");
  };
  check_slopes(dom_up, f_up);
  check_slopes(dom_lo, f_lo);
  for (int e = h.equator_first(); e <= h.equator_last(); ++e) {
    const lattice_pt p{e, h.n - e};
    if (std::abs(f_up(p) + f_lo(p) - detail::equator_sum(h, e)) > tol)
      throw std::invalid_argument("round_asymptotic: equator sums are off the linear anchor");
  }

  // upstairs: largest field with height steps and standard residues below f
  std::vector<long long> label_up(dom_up.pts.size());
  for (std::size_t i = 0; i < dom_up.pts.size(); ++i) {
    const lattice_pt p = dom_up.pts[i];
    const int s = std_pair.up_at(p.x, p.y);
    label_up[i] = s + 3 * (long long)std::floor((f_up(p) - s + tol) / 3.0);
  }
  const auto phi = detail::cone_minima(dom_up, label_up, false);
  for (std::size_t i = 0; i < dom_up.pts.size(); ++i) {
    const lattice_pt p = dom_up.pts[i];
    out.up[out.idx(p.x, p.y)] = int(phi[i]);
  }

  // downstairs: smallest such field above f, with the equator forced to keep
  // the pair sums linear
  std::vector<long long> label_lo(dom_lo.pts.size());
  for (std::size_t i = 0; i < dom_lo.pts.size(); ++i) {
    const lattice_pt p = dom_lo.pts[i];
    if (p.x + p.y == h.n) {
      label_lo[i] = -(detail::equator_sum(h, p.x) - out.up[out.idx(p.x, p.y)]);
    } else {
      const int s = std_pair.lo_at(p.x, p.y);
      label_lo[i] = -(s + 3 * (long long)std::ceil((f_lo(p) - s - tol) / 3.0));
    }
  }
  const auto psi = detail::cone_minima(dom_lo, label_lo, true);
  for (std::size_t i = 0; i < dom_lo.pts.size(); ++i) {
    const lattice_pt p = dom_lo.pts[i];
    out.lo[out.idx(p.x, p.y)] = int(-psi[i]);
  }

  for (std::size_t i = 0; i < dom_up.pts.size(); ++i) {
    const lattice_pt p = dom_up.pts[i];
    const double dev = f_up(p) - out.up[out.idx(p.x, p.y)];
    if (!(dev > -tol - 1e-12 && dev < 3.0 + tol))
      throw std::logic_error("round_asymptotic: upper deviation left (f-3, f]");
  }
  for (std::size_t i = 0; i < dom_lo.pts.size(); ++i) {
    const lattice_pt p = dom_lo.pts[i];
    const double dev = out.lo[out.idx(p.x, p.y)] - f_lo(p);
    if (!(dev > -tol - 1e-12 && dev < 3.0 + tol))
      throw std::logic_error("round_asymptotic: lower deviation left [f, f+3)");
  }
  return out;
}

// Rebuild the tiling from a height pair: every triangle crosses exactly one
// of its edges, crossed interior edges pair triangles into lozenges, and
// crossed equator edges mark border triangles.
inline tiling_t tiling_from_heights(const hexagon_t& h, const height_pair_t& f) {
  if (f.n != h.n || f.vi != h.vi || f.vj != h.vj)
    throw std::invalid_argument("tiling_from_heights: hexagon mismatch");
  tiling_t xi;
  std::map<std::array<int, 3>, std::vector<mesh_tri>> claims;
  for (const auto& t : hexagon_triangles(h)) {
    const bool upper = tri_in_upper(h.n, t);
    const auto value = [&](lattice_pt p) {
      return upper ? f.up_at(p.x, p.y) : f.lo_at(p.x, p.y);
    };
    int found = -1;
    for (int which = 0; which < 3; ++which) {
      const auto key = detail::tri_edge_key(t, which);
      // tail of the positive step along this edge
      lattice_pt tail;
      if (key[0] == 0)
        tail = {key[1], key[2]};
      else if (key[0] == 1)
        tail = {key[1], key[2] + 1};
      else
        tail = {key[1] + 1, key[2]};
      const lattice_pt head{tail.x + detail::positive_dirs[std::size_t(key[0])][0],
                            tail.y + detail::positive_dirs[std::size_t(key[0])][1]};
      const int delta = value(head) - value(tail);
      if (delta == -2) {
        if (found >= 0)
          throw std::invalid_argument("tiling_from_heights: triangle crosses two edges");
        found = which;
      } else if (delta != 1) {
        throw std::invalid_argument("tiling_from_heights: step is neither +1 nor -2");
      }
    }
    if (found < 0) throw std::invalid_argument("tiling_from_heights: triangle crosses no edge");
    const auto key = detail::tri_edge_key(t, found);
    if (key[0] == 2 && key[1] + key[2] == h.n - 1) {
      xi.triangles.push_back({t.ne, key[1]});
    } else {
      claims[key].push_back(t);
    }
  }
  for (const auto& [key, tris] : claims) {
    if (tris.size() != 2)
      throw std::invalid_argument("tiling_from_heights: crossed edge not shared by two tiles");
    if (key[0] == 1)
      xi.lozenges.push_back({loz_kind::type_i, key[1] - 1, key[2] + 1});
    else if (key[0] == 0)
      xi.lozenges.push_back({loz_kind::type_ii, key[1] + 1, key[2] - 1});
    else
      xi.lozenges.push_back({loz_kind::type_iii, key[1], key[2]});
  }
  canonical_sort(xi);
  validate_tiling(h, xi);
  return xi;
}

}  // namespace hivelab
