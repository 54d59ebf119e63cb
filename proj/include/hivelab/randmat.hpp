#pragma once
// GUE sampling and the minor process: eigenvalues, interlacing gaps, patches,
// and rigidity diagnostics.
//
// Normalization: sample_gue(n, variance_param) draws entries with
// E|M_ij|^2 = variance_param * n, so M / sqrt(variance_param * n) is a
// unit-variance GUE matrix. Gap statistics are reported in the normalization
// that makes the Gaudin mean equal to 1 (entry variance 2), whatever
// variance_param the sample was drawn with.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hivelab/linalg.hpp"
#include "hivelab/philox.hpp"

namespace hivelab {

struct hermitian_sample {
  int n = 0;
  double variance_param = 1.0;
  std::uint64_t seed = 0;
  herm_matrix m;
};

struct spectrum {
  std::vector<double> values;  // sorted non-increasing
};

struct minor_process_t {
  int n = 0;
  double variance_param = 1.0;
  std::uint64_t seed = 0;
  // rows[k-1] = eigenvalues of the leading k x k minor, sorted non-increasing
  std::vector<std::vector<double>> rows;

  // lambda_{i,k}: i-th largest eigenvalue of the k x k minor, 1-based
  double lam(int i, int k) const { return rows[std::size_t(k) - 1][std::size_t(i) - 1]; }
};

struct patch_t {
  int i0 = 0, j0 = 0, m = 0;
  double ell = 0.0;
  std::vector<double> v;  // (2m+1)^2, row di (eigenvalue index), col dj (minor size)

  double at(int di, int dj) const {
    const int w = 2 * m + 1;
    return v[std::size_t(di + m) * w + (dj + m)];
  }
};

// Entry (i,j) depends only on (seed, i, j), never on n: one sample with a
// given seed is the top-left corner of an infinite array.
inline hermitian_sample sample_gue(int n, double variance_param, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_gue: n must be positive");
  if (!(variance_param > 0.0)) throw std::invalid_argument("sample_gue: variance_param must be positive");
  hermitian_sample s;
  s.n = n;
  s.variance_param = variance_param;
  s.seed = seed;
  s.m = herm_matrix(n);
  const double sd_offdiag = std::sqrt(variance_param * n / 2.0);
  const double sd_diag = std::sqrt(variance_param * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const auto [g1, g2] = gaussian_pair_at(seed, std::uint64_t(i), std::uint32_t(j), 0);
      if (i == j) {
        s.m.at(i, i) = cplx(sd_diag * g1, 0.0);
      } else {
        s.m.at(i, j) = cplx(sd_offdiag * g1, sd_offdiag * g2);
        s.m.at(j, i) = std::conj(s.m.at(i, j));
      }
    }
  }
  return s;
}

inline spectrum eigenvalues_hermitian(const hermitian_sample& s) {
  return spectrum{block_eigenvalues(s.m, s.n)};
}

struct eigenpair {
  double value = 0.0;
  std::vector<cplx> vec;
};

// Eigenpairs by inverse iteration from the converged eigenvalues. Good for the
// generic (simple-spectrum) matrices this project meets; residuals are checked
// by the caller's contract, not assumed.
inline std::vector<eigenpair> eigenpairs_hermitian(const hermitian_sample& s) {
  const auto vals = block_eigenvalues(s.m, s.n);
  const int n = s.n;
  double scale = s.m.frobenius();
  if (scale == 0.0) scale = 1.0;
  std::vector<eigenpair> out;
  for (int k = 0; k < n; ++k) {
    std::vector<cplx> shifted = s.m.a;
    for (int i = 0; i < n; ++i)
      shifted[std::size_t(i) * n + i] -= cplx(vals[k] + 1e-13 * scale, 0.0);
    const auto lu = lu_decompose(shifted, n);
    std::vector<cplx> x(n);
    for (int i = 0; i < n; ++i) x[i] = cplx(1.0 + 0.01 * i, 0.3 * ((i + k) % 5));
    for (int it = 0; it < 3; ++it) {
      lu_solve(lu, x);
      double norm = 0.0;
      for (const auto& z : x) norm += std::norm(z);
      norm = std::sqrt(norm);
      for (auto& z : x) z /= norm;
    }
    out.push_back({vals[k], std::move(x)});
  }
  return out;
}

inline minor_process_t minor_process(const hermitian_sample& s) {
  minor_process_t p;
  p.n = s.n;
  p.variance_param = s.variance_param;
  p.seed = s.seed;
  p.rows.reserve(s.n);
  for (int k = 1; k <= s.n; ++k) p.rows.push_back(block_eigenvalues(s.m, k));
  return p;
}

inline double semicircle_density(double u) {
  const double t = 4.0 - u * u;
  return t > 0.0 ? std::sqrt(t) / (2.0 * 3.14159265358979323846) : 0.0;
}

inline double semicircle_cdf(double u) {
  if (u <= -2.0) return 0.0;
  if (u >= 2.0) return 1.0;
  const double pi = 3.14159265358979323846;
  return 0.5 + (u * std::sqrt(4.0 - u * u) / 2.0 + 2.0 * std::asin(u / 2.0)) / (2.0 * pi);
}

// u with integral_{-inf}^u rho_sc = i/n; bisection to 1e-10 on [-2,2]
inline double classical_location(int i, int n) {
  if (i < 1 || i > n) throw std::invalid_argument("classical_location: need 1 <= i <= n");
  const double target = double(i) / double(n);
  double lo = -2.0, hi = 2.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (semicircle_cdf(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct gap_pair {
  double g = 0.0;        // same-row gap
  double g_tilde = 0.0;  // interlacing gap against the next minor down
};

// i is the 1-based index in increasing eigenvalue order on the top row.
// Requires the index to sit in the bulk (delta*n <= i <= (1-delta)*n).
inline gap_pair normalized_gaps(const minor_process_t& p, int i, double bulk_delta = 0.1) {
  const int n = p.n;
  if (n < 2) throw std::invalid_argument("normalized_gaps: need n >= 2");
  if (double(i) < bulk_delta * n || double(i) > (1.0 - bulk_delta) * n)
    throw std::out_of_range("normalized_gaps: index outside the bulk");
  // rescale to entry variance 2, the normalization with Gaudin mean 1
  const double c = std::sqrt(2.0 / (p.variance_param * n));
  auto lam_inc = [&](int idx) { return p.lam(n + 1 - idx, n); };
  auto lam_dn_inc = [&](int idx) { return p.lam(n - idx, n - 1); };
  const double gamma = classical_location(i, n);
  const double pref = std::sqrt(double(n) / 2.0) * semicircle_density(gamma) * c;
  gap_pair out;
  out.g = pref * (lam_inc(i + 1) - lam_inc(i));
  out.g_tilde = pref * (lam_dn_inc(i) - lam_inc(i));
  return out;
}

// patch = ell^{1/2} (M restricted to ceil(ell*x) + Box_m, recentred by the
// origin value); rows index the eigenvalue number, columns the minor size
inline patch_t extract_patch(const minor_process_t& p, double x1, double x2, double ell,
                             int m) {
  if (m < 0) throw std::invalid_argument("extract_patch: m must be >= 0");
  const int i0 = int(std::ceil(ell * x1));
  const int j0 = int(std::ceil(ell * x2));
  if (i0 - m < 1 || j0 + m > p.n || i0 + m > j0 - m)
    throw std::out_of_range("extract_patch: window leaves the triangular index range");
  patch_t out;
  out.i0 = i0;
  out.j0 = j0;
  out.m = m;
  out.ell = ell;
  const int w = 2 * m + 1;
  out.v.assign(std::size_t(w) * w, 0.0);
  const double centre = p.lam(i0, j0);
  const double scale = std::sqrt(ell);
  for (int di = -m; di <= m; ++di)
    for (int dj = -m; dj <= m; ++dj)
      out.v[std::size_t(di + m) * w + (dj + m)] =
          scale * (p.lam(i0 + di, j0 + dj) - centre);
  return out;
}

// gaps between vertically adjacent entries (same minor, consecutive
// eigenvalue indices); nonnegative whenever interlacing holds
inline std::vector<double> interlacing_gap_array(const patch_t& p) {
  if (p.m < 1) throw std::invalid_argument("interlacing_gap_array: patch width must be >= 1");
  std::vector<double> out;
  out.reserve(std::size_t(2 * p.m) * (2 * p.m + 1));
  for (int di = -p.m + 1; di <= p.m; ++di)
    for (int dj = -p.m; dj <= p.m; ++dj) out.push_back(p.at(di - 1, dj) - p.at(di, dj));
  return out;
}

struct rigidity_row {
  int index = 0;          // 1-based, decreasing-order position
  double mean = 0.0;
  double max_abs_dev = 0.0;
  double envelope = 0.0;
  bool flagged = false;
};

struct rigidity_report_t {
  int n = 0;
  int samples = 0;
  double multiplier = 0.0;
  std::vector<rigidity_row> rows;
  int flag_count = 0;
};

// Empirical deviations |lambda_i - mean lambda_i| against the rigidity
// envelope n^{1/3} min(i, n-i+1)^{-1/3} log^2(2+n), scaled by `multiplier`.
inline rigidity_report_t rigidity_report(const std::vector<spectrum>& samples,
                                         double multiplier = 1.0) {
  if (samples.size() < 30) throw std::invalid_argument("rigidity_report: need at least 30 samples");
  const int n = int(samples[0].values.size());
  for (const auto& s : samples)
    if (int(s.values.size()) != n)
      throw std::invalid_argument("rigidity_report: samples must share a common n");
  rigidity_report_t rep;
  rep.n = n;
  rep.samples = int(samples.size());
  rep.multiplier = multiplier;
  const double lg = std::log(2.0 + n);
  for (int i = 1; i <= n; ++i) {
    rigidity_row row;
    row.index = i;
    double mean = 0.0;
    for (const auto& s : samples) mean += s.values[i - 1];
    mean /= double(samples.size());
    row.mean = mean;
    for (const auto& s : samples)
      row.max_abs_dev = std::max(row.max_abs_dev, std::abs(s.values[i - 1] - mean));
    const double tip = double(std::min(i, n - i + 1));
    row.envelope = multiplier * std::cbrt(double(n) / tip) * lg * lg;
    row.flagged = row.max_abs_dev > row.envelope;
    if (row.flagged) ++rep.flag_count;
    rep.rows.push_back(row);
  }
  return rep;
}

// eigenvalues rescaled so the limiting law is the semicircle on [-2, 2]
inline std::vector<double> rescaled_for_semicircle(const spectrum& s, double variance_param) {
  const int n = int(s.values.size());
  std::vector<double> out(s.values.rbegin(), s.values.rend());  // ascending
  const double c = 1.0 / (std::sqrt(variance_param) * n);
  for (auto& x : out) x *= c;
  return out;
}

}  // namespace hivelab
