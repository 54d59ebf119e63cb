#pragma once
// Empirical surface tension of eigenvalue patches: corridor maxima of the
// total lozenge weight, their Monte Carlo summaries, the equator pairing,
// and the hexagon correction term.
//
// A patch window is the (2m+1)^2 grid of patch_t, re-indexed by offsets
// (p, q) in [0, 2m]^2 with p tracking the eigenvalue index and q the minor
// size.  The lattice chart is (x, y) = (p - q, q): positive directions
// (1,0), (-1,-1), (0,1) correspond to the trapezoid directions +x, -y,
// (-1,+1), and a height field steps by +1 or -2 along each of them.  Cells
// split along the main diagonal; a lozenge is a pair of triangles joined
// across a crossed (-2) edge.  Diagonal crossings are the index-direction
// lozenges ("blue": weight pairs one index across consecutive sizes),
// vertical crossings the size-direction ones ("green": weight steps both),
// horizontal crossings carry no weight ("red").  Lozenges cut by the window
// boundary are allowed but never weighted.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hivelab/height.hpp"
#include "hivelab/lozenge.hpp"
#include "hivelab/lozenge_solver.hpp"
#include "hivelab/randmat.hpp"
#include "hivelab/stats.hpp"

namespace hivelab {

// (log m)^(-1/10): the default corridor radius per unit of window size.
// Decreasing, while m * psi(m) still grows.
inline double psi(int m) {
  if (m < 2) throw std::invalid_argument("psi: needs m >= 2");
  return std::pow(std::log(double(m)), -0.1);
}

// Integer height field on the window grid, window coordinates (p, q).
struct patch_field_t {
  int m = 0;
  std::vector<int> a;  // (2m+1)^2, index p * (2m+1) + q

  int side() const { return 2 * m + 1; }
  int at(int p, int q) const { return a[std::size_t(p) * std::size_t(side()) + std::size_t(q)]; }
  int& slot(int p, int q) { return a[std::size_t(p) * std::size_t(side()) + std::size_t(q)]; }
};

// The all-size-crossing reference field: +1 along (1,0) and (-1,-1), -2
// along (0,1).  Every height field on the window is congruent to it mod 3.
inline int reference_field(int p, int q) { return p - 2 * q; }

namespace detail {

inline double window_entry(const patch_t& P, int p, int q) { return P.at(p - P.m, q - P.m); }

// Weight of the lozenge crossing the main diagonal of cell (p, q).
inline double blue_weight(const patch_t& P, int p, int q) {
  return (window_entry(P, p + 1, q) - window_entry(P, p + 1, q + 1)) / 3.0;
}

// Weight of the lozenge crossing the vertical edge (p, q)-(p, q+1); only
// defined away from the side columns, where the lozenge sticks out.
inline double green_weight(const patch_t& P, int p, int q) {
  return (window_entry(P, p + 1, q + 1) - window_entry(P, p, q)) / 3.0;
}

inline void check_window_pair(const patch_t& P, const patch_field_t& a) {
  if (a.m != P.m) throw std::invalid_argument("patch window: field and patch sizes differ");
  if (int(a.a.size()) != a.side() * a.side())
    throw std::invalid_argument("patch window: field storage size mismatch");
}

}  // namespace detail

// Total lozenge weight of the tiling encoded by a: twice the sum of blue
// weights plus the sum of green weights, over lozenges contained in the
// window.  Throws if some step of a is not +1 or -2.
inline double total_lozenge_weight(const patch_t& P, const patch_field_t& a) {
  detail::check_window_pair(P, a);
  const int M = 2 * a.m;
  const auto step_ok = [](int d) { return d == 1 || d == -2; };
  for (int p = 0; p <= M; ++p)
    for (int q = 0; q <= M; ++q) {
      if (p < M && !step_ok(a.at(p + 1, q) - a.at(p, q)))
        throw std::invalid_argument("total_lozenge_weight: field is not a tiling height field");
      if (q < M && !step_ok(a.at(p, q + 1) - a.at(p, q)))
        throw std::invalid_argument("total_lozenge_weight: field is not a tiling height field");
      if (p < M && q < M && !step_ok(a.at(p, q) - a.at(p + 1, q + 1)))
        throw std::invalid_argument("total_lozenge_weight: field is not a tiling height field");
    }
  double acc = 0.0;
  for (int p = 0; p < M; ++p)
    for (int q = 0; q < M; ++q)
      if (a.at(p + 1, q + 1) - a.at(p, q) == 2) acc += 2.0 * detail::blue_weight(P, p, q);
  for (int p = 1; p < M; ++p)
    for (int q = 0; q < M; ++q)
      if (a.at(p, q + 1) - a.at(p, q) == -2) acc += detail::green_weight(P, p, q);
  return acc;
}

// Affine comparison field in window coordinates; (gx, gy) are slopes in the
// lattice chart, so the window profile is a0 + gx * p + (gy - gx) * q.
struct tilt_t {
  double gx = 0.0;
  double gy = 0.0;
  double a0 = 0.0;

  double at(int p, int q) const { return a0 + gx * double(p) + (gy - gx) * double(q); }
};

inline void validate_tilt(const tilt_t& t) {
  if (!in_K(t.gx, t.gy, -1e-9))
    throw std::invalid_argument("tilt outside the closed gradient cone");
}

struct patch_max_result {
  patch_field_t field;
  double value = 0.0;
};

// Exact maximizer of the total lozenge weight over height fields within
// L-infinity distance radius of the tilt profile.  One difference system per
// congruence class mod 3; throws infeasible_error when no class admits a
// field (radius > 3 always does).
inline patch_max_result max_weight_patch(const patch_t& P, const tilt_t& tilt, double radius) {
  if (P.m < 1) throw std::invalid_argument("max_weight_patch: window too small");
  if (!(radius > 0)) throw std::invalid_argument("max_weight_patch: radius must be positive");
  const int M = 2 * P.m;
  const int side = M + 1;
  const int nv = side * side + 1;
  const int zr = nv - 1;
  const auto vid = [side](int p, int q) { return p * side + q; };

  patch_max_result best;
  bool have = false;
  for (int c = 0; c < 3; ++c) {
    // z = (a - reference - c) / 3 turns the step constraints into unit bounds
    std::vector<long long> lo(std::size_t(side) * std::size_t(side));
    std::vector<long long> hi(std::size_t(side) * std::size_t(side));
    bool box_ok = true;
    for (int p = 0; p <= M && box_ok; ++p)
      for (int q = 0; q <= M && box_ok; ++q) {
        const double base = double(reference_field(p, q) + c);
        const double l = (tilt.at(p, q) - radius - base) / 3.0;
        const double h = (tilt.at(p, q) + radius - base) / 3.0;
        lo[std::size_t(vid(p, q))] = (long long)std::ceil(l - 1e-9);
        hi[std::size_t(vid(p, q))] = (long long)std::floor(h + 1e-9);
        box_ok = lo[std::size_t(vid(p, q))] <= hi[std::size_t(vid(p, q))];
      }
    if (!box_ok) continue;

    detail::diff_lp lp(nv);
    for (int p = 0; p <= M; ++p)
      for (int q = 0; q <= M; ++q) {
        const int v = vid(p, q);
        if (p < M) {  // z(p+1,q) - z(p,q) in [-1, 0]
          lp.constrain(v, vid(p + 1, q), 0);
          lp.constrain(vid(p + 1, q), v, 1);
        }
        if (q < M) {  // z(p,q+1) - z(p,q) in [0, 1]
          lp.constrain(v, vid(p, q + 1), 1);
          lp.constrain(vid(p, q + 1), v, 0);
        }
        if (p < M && q < M) {  // z(p+1,q+1) - z(p,q) in [0, 1]
          lp.constrain(v, vid(p + 1, q + 1), 1);
          lp.constrain(vid(p + 1, q + 1), v, 0);
        }
        lp.constrain(zr, v, hi[std::size_t(v)]);
        lp.constrain(v, zr, -lo[std::size_t(v)]);
      }
    for (int p = 0; p < M; ++p)
      for (int q = 0; q < M; ++q) {
        // crossing indicator z(p+1,q+1) - z(p,q), worth twice the blue weight
        const double wb = 2.0 * detail::blue_weight(P, p, q);
        lp.obj[std::size_t(vid(p + 1, q + 1))] += wb;
        lp.obj[std::size_t(vid(p, q))] -= wb;
      }
    for (int p = 1; p < M; ++p)
      for (int q = 0; q < M; ++q) {
        // crossing indicator 1 - (z(p,q+1) - z(p,q))
        const double wg = detail::green_weight(P, p, q);
        lp.obj[std::size_t(vid(p, q))] += wg;
        lp.obj[std::size_t(vid(p, q + 1))] -= wg;
      }

    std::vector<long long> y;
    try {
      y = lp.solve();
    } catch (const infeasible_error&) {
      continue;
    }
    patch_field_t f;
    f.m = P.m;
    f.a.resize(std::size_t(side) * std::size_t(side));
    for (int p = 0; p <= M; ++p)
      for (int q = 0; q <= M; ++q) {
        const long long z = y[std::size_t(vid(p, q))] - y[std::size_t(zr)];
        f.slot(p, q) = reference_field(p, q) + c + 3 * int(z);
      }
    const double val = total_lozenge_weight(P, f);
    if (!have || val > best.value) {
      best.field = std::move(f);
      best.value = val;
      have = true;
    }
  }
  if (!have) throw infeasible_error("corridor admits no patch tiling");
  return best;
}

// Position in the rescaled square, mapped to minor-process coordinates
// (index fraction, size fraction).  Above the equator the local entries are
// the upper pattern's, below the lower pattern's; either way the window must
// sit strictly inside the spectrum, which fails exactly on the equator.
inline std::pair<double, double> minor_coords(double vx, double vy) {
  if (!(vx > 0.0 && vx < 1.0 && vy > 0.0 && vy < 1.0))
    throw std::domain_error("position outside the open unit square");
  const double s = vx + vy - 1.0;
  if (std::abs(s) < 1e-6) throw std::domain_error("position on the equator");
  if (s > 0.0) return {s, vy};
  return {vy, 1.0 - vx};
}

// Window scale keeping the extraction inside the index triangle with room to
// spare; grows near the equator, where the index fraction degenerates.
inline double default_window_scale(double x1, double x2, int m) {
  const double a = 8.0 * double(m);
  const double b = 1.1 * double(m + 1) / x1;
  const double c = 1.1 * double(2 * m + 2) / (x2 - x1);
  return std::max(a, std::max(b, c));
}

// Unit-entry-variance patch at minor coordinates (x1, x2), computing only
// the minor sizes the window reads.  vp_scale multiplies the entry variance.
inline patch_t sample_patch(double x1, double x2, double ell, int m, std::uint64_t seed,
                            double vp_scale = 1.0) {
  if (!(x1 > 0.0 && x1 < x2 && x2 <= 1.0))
    throw std::domain_error("sample_patch: bad minor coordinates");
  if (!(ell > 0.0)) throw std::invalid_argument("sample_patch: window scale must be positive");
  if (!(vp_scale > 0.0)) throw std::invalid_argument("sample_patch: vp_scale must be positive");
  const int j0 = int(std::ceil(ell * x2));
  const int n = j0 + m;
  if (n < 1) throw std::invalid_argument("sample_patch: window scale too small");
  const auto s = sample_gue(n, vp_scale / double(n), seed);
  minor_process_t pr;
  pr.n = n;
  pr.variance_param = s.variance_param;
  pr.seed = seed;
  pr.rows.resize(std::size_t(n));
  for (int k = std::max(1, j0 - m); k <= n; ++k)
    pr.rows[std::size_t(k) - 1] = block_eigenvalues(s.m, k);
  return extract_patch(pr, x1, x2, ell, m);
}

struct tension_query {
  double vx = 0.0, vy = 0.0;  // position in the square, off the equator
  tilt_t tilt;
  int m = 8;
  double eps = 0.0;          // corridor radius per unit size; 0 = psi(m)
  int trials = 200;
  double window_scale = 0.0;  // 0 = default_window_scale
  double c_tilde = 3.0;       // feasibility threshold; eps * m must exceed it
  double vp_scale = 1.0;
  std::uint64_t seed = 1;
  unsigned n_threads = 1;
};

inline double effective_eps(const tension_query& q) { return q.eps > 0.0 ? q.eps : psi(q.m); }

inline void validate_query(const tension_query& q) {
  if (q.m < 2) throw std::invalid_argument("tension query: patch half-width must be at least 2");
  if (q.trials < 1) throw std::invalid_argument("tension query: needs at least one trial");
  if (!(effective_eps(q) * double(q.m) > q.c_tilde))
    throw std::invalid_argument("tension query: corridor radius below the feasibility threshold");
  validate_tilt(q.tilt);
  minor_coords(q.vx, q.vy);
}

struct tension_estimate {
  double mean = 0.0;
  double std_error = 0.0;
  int m = 0;
  double eps = 0.0;
  int trials = 0;
};

// Trial statistic -max / m^2 summarized over pre-sampled patches.
inline tension_estimate sigma_m_from_patches(const std::vector<patch_t>& patches,
                                             const tilt_t& tilt, double eps,
                                             unsigned n_threads = 1) {
  if (patches.empty()) throw std::invalid_argument("sigma_m_from_patches: no patches");
  const int m = patches.front().m;
  for (const auto& P : patches)
    if (P.m != m) throw std::invalid_argument("sigma_m_from_patches: mixed window sizes");
  validate_tilt(tilt);
  const double radius = eps * double(m);
  const auto stats = run_trials(
      patches.size(),
      [&](std::uint64_t t) {
        return -max_weight_patch(patches[std::size_t(t)], tilt, radius).value / double(m * m);
      },
      n_threads);
  tension_estimate est;
  est.mean = stats.mean;
  est.std_error = stats.stddev() / std::sqrt(double(stats.count));
  est.m = m;
  est.eps = eps;
  est.trials = int(stats.count);
  return est;
}

inline std::vector<patch_t> sample_patches(const tension_query& q) {
  const auto [x1, x2] = minor_coords(q.vx, q.vy);
  const double ell = q.window_scale > 0.0 ? q.window_scale : default_window_scale(x1, x2, q.m);
  std::vector<patch_t> out;
  out.reserve(std::size_t(q.trials));
  for (int t = 0; t < q.trials; ++t)
    out.push_back(sample_patch(x1, x2, ell, q.m, q.seed + std::uint64_t(t), q.vp_scale));
  return out;
}

inline tension_estimate sigma_m_estimate(const tension_query& q) {
  validate_query(q);
  return sigma_m_from_patches(sample_patches(q), q.tilt, effective_eps(q), q.n_threads);
}

namespace detail {

// Boundary tilts are estimated a step into the interior, along the segment
// toward the vertex opposite the active constraint; at a vertex the segment
// degenerates, so the step aims at the cone's centroid instead.
inline tilt_t nudge_tilt(const tilt_t& t, double step) {
  const bool on_gx = std::abs(t.gx - 1.0) < 1e-9;
  const bool on_gy = std::abs(t.gy + 1.0) < 1e-9;
  const bool on_diag = std::abs(t.gy - t.gx - 1.0) < 1e-9;
  const int active = int(on_gx) + int(on_gy) + int(on_diag);
  if (active == 0) return t;
  double tx = 0.0, ty = 0.0;  // centroid of the cone's vertices
  if (active == 1) {
    if (on_gx) tx = -2.0, ty = -1.0;
    if (on_gy) tx = 1.0, ty = 2.0;
    if (on_diag) tx = 1.0, ty = -1.0;
  }
  tilt_t out = t;
  out.gx += step * (tx - t.gx);
  out.gy += step * (ty - t.gy);
  return out;
}

}  // namespace detail

struct sigma_diamond_result {
  std::vector<tension_estimate> sequence;
  bool approx_monotone = true;  // non-increasing within 3 pooled standard errors
  double value = 0.0;           // last estimate in the schedule
  tilt_t used_tilt;             // after any boundary nudge
};

// Estimates along a growing window schedule, with the corridor radius tied
// to psi(m) unless the query pins eps.  Seeds advance by the trial budget so
// the schedule entries draw disjoint samples.
inline sigma_diamond_result sigma_diamond(const tension_query& base,
                                          const std::vector<int>& m_schedule = {8, 16, 32},
                                          double boundary_step = 0.05) {
  if (m_schedule.empty()) throw std::invalid_argument("sigma_diamond: empty schedule");
  validate_tilt(base.tilt);
  sigma_diamond_result out;
  out.used_tilt = detail::nudge_tilt(base.tilt, boundary_step);
  tension_query q = base;
  q.tilt = out.used_tilt;
  for (std::size_t i = 0; i < m_schedule.size(); ++i) {
    q.m = m_schedule[i];
    q.seed = base.seed + std::uint64_t(i) * std::uint64_t(base.trials);
    validate_query(q);
    out.sequence.push_back(sigma_m_from_patches(sample_patches(q), q.tilt, effective_eps(q),
                                                q.n_threads));
  }
  for (std::size_t i = 0; i + 1 < out.sequence.size(); ++i) {
    const auto& a = out.sequence[i];
    const auto& b = out.sequence[i + 1];
    const double slack = 3.0 * std::hypot(a.std_error, b.std_error);
    if (b.mean > a.mean + slack) out.approx_monotone = false;
  }
  out.value = out.sequence.back().mean;
  return out;
}

struct rho_estimate {
  double rho1 = 0.0;  // size-direction gap mean (blue family)
  double rho2 = 0.0;  // both-step gap mean (green family)
  double se1 = 0.0;
  double se2 = 0.0;
  int m = 0;
  int trials = 0;
};

// Means of the two interlacing gap families read off sampled windows.  The
// window average is the trial statistic; components are positive because the
// families interlace.
inline rho_estimate rho_field(double vx, double vy, int m = 3, int trials = 200,
                              double window_scale = 0.0, double vp_scale = 1.0,
                              std::uint64_t seed = 1) {
  if (m < 1) throw std::invalid_argument("rho_field: window too small");
  if (trials < 1) throw std::invalid_argument("rho_field: needs at least one trial");
  const auto [x1, x2] = minor_coords(vx, vy);
  const double ell = window_scale > 0.0 ? window_scale : default_window_scale(x1, x2, m);
  running_stats blue, green;
  for (int t = 0; t < trials; ++t) {
    const auto P = sample_patch(x1, x2, ell, m, seed + std::uint64_t(t), vp_scale);
    double b = 0.0, g = 0.0;
    int nb = 0, ng = 0;
    for (int di = -m; di <= m; ++di)
      for (int dj = -m; dj < m; ++dj) {
        b += P.at(di, dj + 1) - P.at(di, dj);
        ++nb;
        if (di < m) {
          g += P.at(di, dj) - P.at(di + 1, dj + 1);
          ++ng;
        }
      }
    blue.push(b / double(nb));
    green.push(g / double(ng));
  }
  rho_estimate out;
  out.rho1 = blue.mean;
  out.rho2 = green.mean;
  out.se1 = blue.stddev() / std::sqrt(double(trials));
  out.se2 = green.stddev() / std::sqrt(double(trials));
  out.m = m;
  out.trials = trials;
  return out;
}

// Equator tension of a unit equator step against the edge eigenvalue pair.
inline double sigma_delta(double tau_up, double tau_lo, double b) {
  if (!(b >= -1.0 - 1e-12 && b <= 2.0 + 1e-12))
    throw std::domain_error("sigma_delta: step average outside [-1, 2]");
  return -(((b + 1.0) / 3.0) * (tau_up / 3.0) + ((2.0 - b) / 3.0) * (-tau_lo / 3.0));
}

struct tau_estimate_t {
  double up = 0.0;
  double lo = 0.0;
  double up_se = 0.0;
  double lo_se = 0.0;
  int n = 0;
  int size = 0;
  int trials = 0;
};

// Empirical edge eigenvalues entering sigma_delta: the top eigenvalue of the
// upper pattern's minor at the equator coordinate and the bottom eigenvalue
// of the lower pattern's, both normalized by n.  fraction is the equator
// coordinate over n, so the minor size is n minus that.
inline tau_estimate_t tau_edge_means(int n, double fraction, int trials,
                                     double variance_param = 1.0, std::uint64_t seed = 1) {
  if (n < 2) throw std::invalid_argument("tau_edge_means: n too small");
  if (!(fraction >= 0.0 && fraction < 1.0))
    throw std::domain_error("tau_edge_means: fraction outside [0, 1)");
  if (trials < 1) throw std::invalid_argument("tau_edge_means: needs at least one trial");
  const int size = std::max(1, n - int(std::llround(fraction * double(n))));
  running_stats up, lo;
  for (int t = 0; t < trials; ++t) {
    const auto su = sample_gue(n, variance_param, seed + 2 * std::uint64_t(t));
    const auto sl = sample_gue(n, variance_param, seed + 2 * std::uint64_t(t) + 1);
    const auto ru = block_eigenvalues(su.m, size);
    const auto rl = block_eigenvalues(sl.m, size);
    up.push(ru.front() / double(n));
    lo.push(rl.back() / double(n));
  }
  tau_estimate_t out;
  out.up = up.mean;
  out.lo = lo.mean;
  out.up_se = up.stddev() / std::sqrt(double(trials));
  out.lo_se = lo.stddev() / std::sqrt(double(trials));
  out.n = n;
  out.size = size;
  out.trials = trials;
  return out;
}

// Upper-height steps along the equator edges, one per edge of the hexagon's
// equator segment.  Height steps force each value to be -1 or 2.
inline std::vector<int> equator_steps(const height_pair_t& f) {
  const int n = f.n;
  const int ef = std::max(0, f.vi - f.vj);
  const int el = n - std::max(0, f.vj - f.vi);
  std::vector<int> out;
  out.reserve(std::size_t(el - ef));
  for (int k = ef; k < el; ++k)
    out.push_back(-f.up_at(k, n - k) + f.up_at(k + 1, n - k - 1));
  return out;
}

// Pairing of the boundary spectra against the equator steps of a height
// pair: each edge contributes the border triangle weight its step selects.
// Out-of-range pattern indices read as zero.
inline double equator_pairing(const gt_pattern& mu, const gt_pattern& la,
                              const height_pair_t& f) {
  const int n = f.n;
  const int ef = std::max(0, f.vi - f.vj);
  const int el = n - std::max(0, f.vj - f.vi);
  double acc = 0.0;
  for (int k = ef; k < el; ++k) {
    const int b = -f.up_at(k, n - k) + f.up_at(k + 1, n - k - 1);
    const int s = n - k;
    const double mu1 = (s >= 1 && s <= mu.n()) ? mu.lam(1, s) : 0.0;
    const double las = (s >= 1 && s <= la.n()) ? la.lam(s, s) : 0.0;
    acc += (double(1 + b) / 3.0) * (mu1 / 3.0) + (double(2 - b) / 3.0) * (-las / 3.0);
  }
  return acc;
}

struct hexagon_term_estimate {
  double mean = 0.0;
  double std_error = 0.0;
  int n = 0;
  int samples = 0;
};

// Monte Carlo mean of the hexagon correction per unit area.
inline hexagon_term_estimate hexagon_term(const hexagon_t& h,
                                          const std::vector<weight_field_t>& fields) {
  if (fields.size() < 30) throw std::invalid_argument("hexagon_term: needs at least 30 samples");
  running_stats st;
  for (const auto& w : fields) {
    if (w.n != h.n) throw std::invalid_argument("hexagon_term: field size mismatch");
    st.push(hexagon_weight_primed(h, w) / double(h.n) / double(h.n));
  }
  hexagon_term_estimate out;
  out.mean = st.mean;
  out.std_error = st.stddev() / std::sqrt(double(st.count));
  out.n = h.n;
  out.samples = int(st.count);
  return out;
}

struct variance_probe_entry {
  int m = 0;
  double variance = 0.0;  // of the corridor maximum itself
  double scale = 0.0;     // m^4
  double ratio = 0.0;
  int trials = 0;
};

// Dispersion of the corridor maximum from pre-sampled windows.
inline variance_probe_entry probe_from_patches(const std::vector<patch_t>& patches,
                                               const tilt_t& tilt, double eps) {
  if (patches.empty()) throw std::invalid_argument("probe_from_patches: no patches");
  const int m = patches.front().m;
  running_stats st;
  for (const auto& P : patches) {
    if (P.m != m) throw std::invalid_argument("probe_from_patches: mixed window sizes");
    st.push(max_weight_patch(P, tilt, eps * double(m)).value);
  }
  variance_probe_entry out;
  out.m = m;
  out.variance = st.variance();
  out.scale = double(m) * double(m) * double(m) * double(m);
  out.ratio = out.variance / out.scale;
  out.trials = int(st.count);
  return out;
}

struct variance_probe_result {
  std::vector<variance_probe_entry> entries;
  bool ratio_decreasing = true;
};

// Corridor-maximum variance against the fourth power of the window size,
// along a schedule; concentration shows up as a decreasing ratio.
inline variance_probe_result patch_variance_probe(double vx, double vy,
                                                  const std::vector<int>& m_schedule, double eps,
                                                  int trials, const tilt_t& tilt = {},
                                                  double window_scale = 0.0,
                                                  std::uint64_t seed = 1) {
  if (m_schedule.empty()) throw std::invalid_argument("patch_variance_probe: empty schedule");
  variance_probe_result out;
  for (std::size_t i = 0; i < m_schedule.size(); ++i) {
    tension_query q;
    q.vx = vx;
    q.vy = vy;
    q.tilt = tilt;
    q.m = m_schedule[i];
    q.eps = eps;
    q.trials = trials;
    q.window_scale = window_scale;
    q.seed = seed + std::uint64_t(i) * std::uint64_t(trials);
    validate_query(q);
    out.entries.push_back(probe_from_patches(sample_patches(q), q.tilt, effective_eps(q)));
  }
  for (std::size_t i = 0; i + 1 < out.entries.size(); ++i)
    if (out.entries[i + 1].ratio > out.entries[i].ratio) out.ratio_decreasing = false;
  return out;
}

}  // namespace hivelab
