#pragma once

#include <climits>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "hivelab/lozenge.hpp"

namespace hivelab {

struct infeasible_error : std::runtime_error {
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// Inclusive bounds on the two height fields, indexed like the weight grid.
// Sentinels keep unconstrained vertices out of the arc set.
struct height_band {
  static constexpr int unbounded_lo = INT_MIN / 4;
  static constexpr int unbounded_hi = INT_MAX / 4;

  int n = 0;
  std::vector<int> up_min, up_max, lo_min, lo_max;

  static height_band free_band(int n) {
    height_band b;
    b.n = n;
    const std::size_t cells = std::size_t(n + 1) * std::size_t(n + 1);
    b.up_min.assign(cells, unbounded_lo);
    b.up_max.assign(cells, unbounded_hi);
    b.lo_min.assign(cells, unbounded_lo);
    b.lo_max.assign(cells, unbounded_hi);
    return b;
  }
  std::size_t idx(int x, int y) const { return std::size_t(x) * std::size_t(n + 1) + std::size_t(y); }
};

inline height_band band_around(const height_pair_t& hp, int radius) {
  if (radius < 0) throw std::invalid_argument("band_around: negative radius");
  height_band b = height_band::free_band(hp.n);
  for (int x = 0; x <= hp.n; ++x)
    for (int y = 0; y <= hp.n; ++y) {
      if (hp.has_up(x, y)) {
        b.up_min[b.idx(x, y)] = hp.up_at(x, y) - radius;
        b.up_max[b.idx(x, y)] = hp.up_at(x, y) + radius;
      }
      if (hp.has_lo(x, y)) {
        b.lo_min[b.idx(x, y)] = hp.lo_at(x, y) - radius;
        b.lo_max[b.idx(x, y)] = hp.lo_at(x, y) + radius;
      }
    }
  return b;
}

namespace detail {

// max sum(obj[v] * y[v]) subject to y[head] - y[tail] <= cost over the arc
// list.  Solved as the dual transshipment problem by successive shortest
// paths; the returned y is integral.  Throws infeasible_error on a negative
// constraint cycle.
struct diff_lp {
  int nv = 0;
  std::vector<int> arc_to, arc_head;
  std::vector<std::vector<int>> adj;  // var -> arc ids (even fwd, odd residual)
  std::vector<long long> arc_cost;
  std::vector<double> arc_flow;
  std::vector<double> obj;

  explicit diff_lp(int nvars) : nv(nvars), adj(std::size_t(nvars)), obj(std::size_t(nvars), 0.0) {}

  // y[w] - y[u] <= c  becomes a flow arc w -> u of cost c
  void constrain(int u, int w, long long c) {
    add_arc(w, u, c);
    add_arc(u, w, -c);  // residual twin
    arc_flow.back() = 0.0;
  }

  std::vector<long long> solve() {
    const int V = nv;
    std::vector<long long> pot(std::size_t(V), 0);
    // Bellman-Ford over forward arcs establishes reduced-cost feasibility and
    // rejects negative constraint cycles.
    for (int round = 0; round + 1 < V; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < arc_to.size(); a += 2) {
        const int u = arc_head[a], w = arc_to[a];
        if (pot[std::size_t(w)] > pot[std::size_t(u)] + arc_cost[a]) {
          pot[std::size_t(w)] = pot[std::size_t(u)] + arc_cost[a];
          changed = true;
        }
      }
      if (!changed) break;
    }
    for (std::size_t a = 0; a < arc_to.size(); a += 2)
      if (pot[std::size_t(arc_to[a])] > pot[std::size_t(arc_head[a])] + arc_cost[a])
        throw infeasible_error("height band admits no tiling");

    std::vector<double> excess(obj);
    double scale = 1.0;
    for (double v : excess) scale = std::max(scale, std::abs(v));
    const double eps = 1e-12 * scale;

    const std::size_t vs = std::size_t(V);
    std::vector<long long> dist(vs);
    std::vector<int> prev_arc(vs);
    std::vector<std::uint8_t> seen(vs);
    for (int s = 0; s < V; ++s) {
      while (excess[std::size_t(s)] > eps) {
        // Dijkstra with reduced costs from s to the nearest deficit node
        std::fill(dist.begin(), dist.end(), LLONG_MAX);
        std::fill(seen.begin(), seen.end(), 0);
        std::priority_queue<std::pair<long long, int>, std::vector<std::pair<long long, int>>,
                            std::greater<>>
            heap;
        dist[std::size_t(s)] = 0;
        heap.push({0, s});
        int sink = -1;
        while (!heap.empty()) {
          const auto [d, v] = heap.top();
          heap.pop();
          if (seen[std::size_t(v)]) continue;
          seen[std::size_t(v)] = 1;
          if (excess[std::size_t(v)] < -eps) {
            sink = v;
            break;
          }
          for (int a : adj[std::size_t(v)]) {
            if ((a & 1) && arc_flow[std::size_t(a ^ 1)] <= 0.0) continue;
            const int w = arc_to[std::size_t(a)];
            if (seen[std::size_t(w)]) continue;
            const long long nd =
                d + arc_cost[std::size_t(a)] + pot[std::size_t(v)] - pot[std::size_t(w)];
            if (nd < dist[std::size_t(w)]) {
              dist[std::size_t(w)] = nd;
              prev_arc[std::size_t(w)] = a;
              heap.push({nd, w});
            }
          }
        }
        if (sink < 0) throw std::logic_error("diff_lp: supply cannot reach any deficit");
        const long long cap = dist[std::size_t(sink)];
        for (int v = 0; v < V; ++v)
          pot[std::size_t(v)] += std::min(dist[std::size_t(v)], cap);
        double delta = std::min(excess[std::size_t(s)], -excess[std::size_t(sink)]);
        // residual arcs can only undo flow already on their twin
        for (int v = sink; v != s;) {
          const int a = prev_arc[std::size_t(v)];
          if (a & 1) delta = std::min(delta, arc_flow[std::size_t(a ^ 1)]);
          v = arc_head[std::size_t(a)];
        }
        for (int v = sink; v != s;) {
          const int a = prev_arc[std::size_t(v)];
          arc_flow[std::size_t(a)] += delta;
          arc_flow[std::size_t(a ^ 1)] -= delta;
          v = arc_head[std::size_t(a)];
        }
        excess[std::size_t(s)] -= delta;
        excess[std::size_t(sink)] += delta;
      }
    }
    // y = -pot satisfies every constraint with equality on flow-carrying arcs
    std::vector<long long> y(vs);
    for (int v = 0; v < V; ++v) y[std::size_t(v)] = -pot[std::size_t(v)];
    return y;
  }

 private:
  void add_arc(int from, int to, long long c) {
    adj[std::size_t(from)].push_back(int(arc_to.size()));
    arc_head.push_back(from);
    arc_to.push_back(to);
    arc_cost.push_back(c);
    arc_flow.push_back(0.0);
  }
};

inline long long floor_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  return r != 0 && ((r < 0) != (b < 0)) ? q - 1 : q;
}
inline long long ceil_div(long long a, long long b) { return -floor_div(-a, b); }

}  // namespace detail

struct max_tiling_result {
  tiling_t tiling;
  double value = 0.0;
};

// Exact maximizer of the tiling weight, optionally within a height band.  The
// height increments along tile edges form a difference system whose objective
// is the red-avoiding weight; the optimal potentials decode back to a tiling.
inline max_tiling_result max_weight_tiling(const hexagon_t& h, const weight_field_t& w,
                                           const height_band* band = nullptr) {
  if (w.n != h.n) throw std::invalid_argument("max_weight_tiling: size mismatch");
  if (band && band->n != h.n) throw std::invalid_argument("max_weight_tiling: band size mismatch");
  const int n = h.n;
  const std::size_t cells = std::size_t(n + 1) * std::size_t(n + 1);

  std::vector<int> up_id(cells, -1), lo_id(cells, -1);
  int nv = 0;
  for (int x = 0; x <= n; ++x)
    for (int y = 0; y <= n; ++y) {
      const std::size_t c = std::size_t(x) * std::size_t(n + 1) + std::size_t(y);
      if (h.in_upper(x, y)) up_id[c] = nv++;
      if (h.in_lower(x, y)) lo_id[c] = nv++;
    }
  detail::diff_lp lp(nv);
  const auto vid = [&](bool upper, int x, int y) {
    const std::size_t c = std::size_t(x) * std::size_t(n + 1) + std::size_t(y);
    const int v = upper ? up_id[c] : lo_id[c];
    if (v < 0) throw std::logic_error("max_weight_tiling: edge endpoint outside trapezoid");
    return v;
  };

  const detail::edge_tab tabs[2] = {detail::side_edges(h, true), detail::side_edges(h, false)};
  for (int side = 0; side < 2; ++side) {
    const bool upper = side == 0;
    const auto& tab = tabs[side];
    for (int dir = 0; dir < 3; ++dir)
      for (int x = 0; x <= n; ++x)
        for (int y = 0; y <= n; ++y) {
          const auto st = tab.get(dir, x, y);
          if (!st) continue;
          int ux, uy, wx, wy;  // positive direction tail -> head
          if (dir == 0) {
            ux = x, uy = y, wx = x + 1, wy = y;
          } else if (dir == 1) {
            ux = x, uy = y + 1, wx = x, wy = y;
          } else {
            ux = x + 1, uy = y, wx = x, wy = y + 1;
          }
          const int u = vid(upper, ux, uy), wv = vid(upper, wx, wy);
          int lo_b, hi_b;
          if (dir != 2) {
            lo_b = (st == 1) ? 0 : (upper ? -1 : 0);
            hi_b = (st == 1) ? 0 : (upper ? 0 : 1);
          } else {
            lo_b = (st == 1) ? (upper ? 1 : -1) : (upper ? 0 : -1);
            hi_b = (st == 1) ? (upper ? 1 : -1) : (upper ? 1 : 0);
          }
          lp.constrain(u, wv, hi_b);
          lp.constrain(wv, u, -lo_b);
          if (st == 1) continue;
          // crossing-indicator objective, red lozenges carry no weight
          double c = 0.0;
          if (dir == 1 && upper) c = 2.0 * lozenge_weight({loz_kind::type_i, x - 1, y + 1}, w);
          if (dir == 0 && !upper) c = 2.0 * lozenge_weight({loz_kind::type_ii, x + 1, y - 1}, w);
          if (dir == 2 && st == 2) c = lozenge_weight({loz_kind::type_iii, x, y}, w);
          if (dir == 2 && st == 3) c = triangle_weight({upper, x}, w);
          if (c != 0.0) {
            // upper-side indicators read tail minus head, lower-side ones
            // head minus tail through the negated variables
            lp.obj[std::size_t(upper ? u : wv)] += c;
            lp.obj[std::size_t(upper ? wv : u)] -= c;
          }
        }
  }

  for (int e = h.equator_first(); e <= h.equator_last(); ++e) {
    const int u = vid(true, e, n - e), l = vid(false, e, n - e);
    const long long off = e - h.equator_first();
    lp.constrain(u, l, off);
    lp.constrain(l, u, -off);
  }

  const int root_up = vid(true, h.a.x, h.a.y);
  const int root_lo = vid(false, h.a.x, h.a.y);
  const long long c0up = (2LL * h.vj - h.vi) - (h.a.x - h.a.y);
  const long long c0lo = (2LL * h.vi - h.vj) - (h.a.x - h.a.y);
  if (band) {
    for (int x = 0; x <= n; ++x)
      for (int y = 0; y <= n; ++y) {
        const std::size_t c = band->idx(x, y);
        const long long base_up = (x - y) + c0up;
        const long long base_lo = (x - y) + c0lo;
        if (up_id[c] >= 0) {
          const long long m = band->up_min[c], mx = band->up_max[c];
          if (m > height_band::unbounded_lo)
            lp.constrain(up_id[c], root_up, -detail::ceil_div(m - base_up, 3));
          if (mx < height_band::unbounded_hi)
            lp.constrain(root_up, up_id[c], detail::floor_div(mx - base_up, 3));
        }
        if (lo_id[c] >= 0) {
          const long long m = band->lo_min[c], mx = band->lo_max[c];
          if (mx < height_band::unbounded_hi)
            lp.constrain(lo_id[c], root_lo, -detail::ceil_div(base_lo - mx, 3));
          if (m > height_band::unbounded_lo)
            lp.constrain(root_lo, lo_id[c], detail::floor_div(base_lo - m, 3));
        }
      }
  }

  const std::vector<long long> y = lp.solve();
  const auto hval = [&](bool upper, int x, int y2) {
    return y[std::size_t(vid(upper, x, y2))] - y[std::size_t(upper ? root_up : root_lo)];
  };

  tiling_t xi;
  for (int side = 0; side < 2; ++side) {
    const bool upper = side == 0;
    const auto& tab = tabs[side];
    for (int dir = 0; dir < 3; ++dir)
      for (int x = 0; x <= n; ++x)
        for (int y2 = 0; y2 <= n; ++y2) {
          const auto st = tab.get(dir, x, y2);
          if (st == 0 || st == 1) continue;
          long long dh;
          if (dir == 0)
            dh = hval(upper, x + 1, y2) - hval(upper, x, y2);
          else if (dir == 1)
            dh = hval(upper, x, y2) - hval(upper, x, y2 + 1);
          else
            dh = hval(upper, x, y2 + 1) - hval(upper, x + 1, y2);
          bool crossed;
          if (dir != 2)
            crossed = upper ? dh == -1 : dh == 1;
          else
            crossed = dh == 0;
          if (!crossed) continue;
          if (dir == 0)
            xi.lozenges.push_back({loz_kind::type_ii, x + 1, y2 - 1});
          else if (dir == 1)
            xi.lozenges.push_back({loz_kind::type_i, x - 1, y2 + 1});
          else if (st == 2)
            xi.lozenges.push_back({loz_kind::type_iii, x, y2});
          else
            xi.triangles.push_back({upper, x});
        }
  }
  canonical_sort(xi);
  max_tiling_result res;
  res.value = tiling_weight(xi, h, w, weight_form::red_avoiding);
  res.tiling = std::move(xi);
  return res;
}

inline double hive_value(int vi, int vj, const gt_pattern& g_up, const gt_pattern& g_lo,
                         const large_gap_tuple& shift) {
  const weight_field_t w = weight_field_from_patterns(g_up, g_lo, shift);
  const hexagon_t h = excavation_hexagon(vi, vj, w.n);
  return max_weight_tiling(h, w).value;
}

// Tropical octahedron recurrence, run as a layered dig of the glued surface.
// Layer index s = |x+y-n| + 2t counts the two tetrahedron depth coordinates
// together; the surface sits at s0 = |x+y-n| and the dig bottoms out at
// s_max = n - |x-y|, which lands on the h face when x <= y and on the h'
// face when x >= y (the diagonal is shared, so h and h' agree there).
inline void octahedron_tables(const weight_field_t& w, std::vector<double>& h,
                              std::vector<double>& hp) {
  const int n = w.n;
  const std::size_t cells = std::size_t(n + 1) * std::size_t(n + 1);
  h.assign(cells, 0.0);
  hp.assign(cells, 0.0);
  const auto cell = [n](int x, int y) {
    return std::size_t(x) * std::size_t(n + 1) + std::size_t(y);
  };
  std::vector<double> prev2(cells, 0.0), prev(cells, 0.0), cur(cells, 0.0);
  for (int s = 0; s <= n; ++s) {
    for (int x = 0; x <= n; ++x)
      for (int y = 0; y <= n; ++y) {
        const int s0 = std::abs(x + y - n);
        if (s < s0 || s > n - std::abs(x - y) || (s - s0) % 2 != 0) continue;
        double v;
        if (s == s0)
          v = w.ktilde(x, y);
        else
          v = std::max(prev[cell(x - 1, y)] + prev[cell(x + 1, y)],
                       prev[cell(x, y - 1)] + prev[cell(x, y + 1)]) -
              prev2[cell(x, y)];
        cur[cell(x, y)] = v;
        if (s == n - std::abs(x - y)) {
          if (x <= y) h[cell(x, y)] = v;
          if (x >= y) hp[cell(x, y)] = v;
        }
      }
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
}

struct hive_pair_t {
  hive_t h;         // values at (x, y), x <= y
  hive_t h_prime;   // reflected storage: value at (x, y) with x >= y sits at h_prime.at(y, x)
};

inline hive_pair_t octahedron_recurrence(const hive_t& k, const hive_t& k_prime,
                                         double tol_rel = 1e-9) {
  const weight_field_t w = weight_field_from_hives(k, k_prime, tol_rel);
  std::vector<double> ht, hpt;
  octahedron_tables(w, ht, hpt);
  const int n = w.n;
  hive_pair_t out;
  out.h = make_hive(n);
  out.h_prime = make_hive(n);
  for (int y = 0; y <= n; ++y)
    for (int x = 0; x <= y; ++x) {
      out.h.at(x, y) = ht[std::size_t(x) * std::size_t(n + 1) + std::size_t(y)];
      out.h_prime.at(x, y) = hpt[std::size_t(y) * std::size_t(n + 1) + std::size_t(x)];
    }
  return out;
}

}  // namespace hivelab
