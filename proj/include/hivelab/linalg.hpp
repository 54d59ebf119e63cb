#pragma once
// Dense Hermitian linear algebra: Householder reduction to real tridiagonal
// form, implicit-shift QL for the eigenvalues, and a small LU kit used for
// inverse iteration. Self-contained on purpose: deterministic across
// platforms and free of external numeric dependencies.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hivelab {

using cplx = std::complex<double>;

struct herm_matrix {
  int n = 0;
  std::vector<cplx> a;  // row-major

  herm_matrix() = default;
  explicit herm_matrix(int n_) : n(n_), a(std::size_t(n_) * std::size_t(n_)) {}

  cplx& at(int i, int j) { return a[std::size_t(i) * n + j]; }
  const cplx& at(int i, int j) const { return a[std::size_t(i) * n + j]; }

  double trace_real() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += at(i, i).real();
    return t;
  }
  double frobenius() const {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return std::sqrt(s);
  }
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Implicit-shift QL on a real symmetric tridiagonal. d holds the diagonal and
// is replaced by the (unsorted) eigenvalues; e holds subdiagonals e[0..m-2]
// and is destroyed. Caps iterations at sweep_cap per eigenvalue.
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e,
                        int sweep_cap = 64) {
  const int m = int(d.size());
  if (m == 0) return;
  e.resize(m, 0.0);
  e[m - 1] = 0.0;
  for (int l = 0; l < m; ++l) {
    int iter = 0;
    for (;;) {
      int mm = l;
      while (mm < m - 1) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= 2.3e-16 * dd) break;
        ++mm;
      }
      if (mm == l) break;
      if (iter++ >= sweep_cap)
        throw numeric_error("ql_implicit: no convergence after " +
                            std::to_string(sweep_cap) + " sweeps at row " +
                            std::to_string(l) + " of " + std::to_string(m));
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = mm - 1; i >= l; --i) {
        double f = s * e[i], b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[mm] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[mm] = 0.0;
    }
  }
}

// Householder reduction of the leading m x m block of M to a real symmetric
// tridiagonal (d, e). Subdiagonal phases are absorbed, which leaves the
// spectrum unchanged.
inline void hermitian_to_tridiag(const herm_matrix& M, int m, std::vector<double>& d,
                                 std::vector<double>& e) {
  if (m < 1 || m > M.n) throw std::invalid_argument("hermitian_to_tridiag: bad block size");
  std::vector<cplx> A(std::size_t(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A[std::size_t(i) * m + j] = M.at(i, j);
  auto at = [&](int i, int j) -> cplx& { return A[std::size_t(i) * m + j]; };

  d.assign(m, 0.0);
  e.assign(m, 0.0);
  std::vector<cplx> esub(m, cplx(0.0, 0.0));
  std::vector<cplx> u(m), p(m);

  for (int i = m - 1; i >= 1; --i) {
    const int l = i - 1;
    if (l == 0) {
      esub[i] = at(i, 0);
      continue;
    }
    double scale = 0.0;
    for (int k = 0; k <= l; ++k)
      scale += std::abs(at(k, i).real()) + std::abs(at(k, i).imag());
    if (scale == 0.0) {
      esub[i] = cplx(0.0, 0.0);
      continue;
    }
    // reflect the column above the diagonal; u built from column entries so
    // that P x = sigma e_l holds in the column convention
    double h = 0.0;
    for (int k = 0; k <= l; ++k) {
      u[k] = at(k, i) / scale;
      h += std::norm(u[k]);
    }
    const double xnorm = std::sqrt(h);
    const cplx f = u[l];
    const double fabsv = std::abs(f);
    const cplx sigma = (fabsv > 0.0) ? cplx(-xnorm) * (f / fabsv) : cplx(-xnorm);
    u[l] -= sigma;
    const double H = h + fabsv * xnorm;  // = |u|^2 / 2
    if (H == 0.0) {
      esub[i] = sigma * scale;
      continue;
    }
    // rank-2 update of the leading i x i block: A <- A - q u* - u q*
    for (int r = 0; r <= l; ++r) {
      cplx acc(0.0, 0.0);
      for (int c = 0; c <= l; ++c) acc += at(r, c) * u[c];
      p[r] = acc / H;
    }
    cplx K(0.0, 0.0);
    for (int r = 0; r <= l; ++r) K += std::conj(u[r]) * p[r];
    K /= 2.0 * H;
    for (int r = 0; r <= l; ++r) p[r] -= K * u[r];
    for (int r = 0; r <= l; ++r) {
      for (int c = 0; c <= r; ++c) {
        at(r, c) -= p[r] * std::conj(u[c]) + u[r] * std::conj(p[c]);
        if (c != r) at(c, r) = std::conj(at(r, c));
      }
      at(r, r) = cplx(at(r, r).real(), 0.0);
    }
    esub[i] = sigma * scale;
  }
  for (int i = 0; i < m; ++i) d[i] = at(i, i).real();
  for (int i = 1; i < m; ++i) e[i - 1] = std::abs(esub[i]);
  e[m - 1] = 0.0;
}

// eigenvalues of the leading m x m block, sorted non-increasing
inline std::vector<double> block_eigenvalues(const herm_matrix& M, int m,
                                             int sweep_cap = 64) {
  std::vector<double> d, e;
  hermitian_to_tridiag(M, m, d, e);
  ql_implicit(d, e, sweep_cap);
  std::sort(d.begin(), d.end(), [](double x, double y) { return x > y; });
  return d;
}

// --- complex LU with partial pivoting, for inverse iteration ---

struct lu_factors {
  int n = 0;
  std::vector<cplx> a;   // packed L\U
  std::vector<int> piv;  // row permutation
};

inline lu_factors lu_decompose(const std::vector<cplx>& src, int n) {
  lu_factors f;
  f.n = n;
  f.a = src;
  f.piv.resize(n);
  auto at = [&](int i, int j) -> cplx& { return f.a[std::size_t(i) * n + j]; };
  for (int k = 0; k < n; ++k) {
    int best = k;
    double bm = std::abs(at(k, k));
    for (int i = k + 1; i < n; ++i)
      if (std::abs(at(i, k)) > bm) {
        bm = std::abs(at(i, k));
        best = i;
      }
    f.piv[k] = best;
    if (best != k)
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(best, j));
    if (at(k, k) == cplx(0.0, 0.0)) at(k, k) = cplx(1e-300, 0.0);
    for (int i = k + 1; i < n; ++i) {
      at(i, k) /= at(k, k);
      const cplx m = at(i, k);
      for (int j = k + 1; j < n; ++j) at(i, j) -= m * at(k, j);
    }
  }
  return f;
}

inline void lu_solve(const lu_factors& f, std::vector<cplx>& b) {
  const int n = f.n;
  auto at = [&](int i, int j) -> const cplx& { return f.a[std::size_t(i) * n + j]; };
  for (int k = 0; k < n; ++k) {
    if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
    for (int i = k + 1; i < n; ++i) b[i] -= at(i, k) * b[k];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[i] -= at(i, j) * b[j];
    b[i] /= at(i, i);
  }
}

}  // namespace hivelab
