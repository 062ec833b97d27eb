#pragma once

// Dense complex linear algebra: Householder QR with column/row append
// updates, least squares, inverse iteration for the smallest singular pair,
// and a one-sided Jacobi SVD used as oracle and for matrix condition numbers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "multroot/errors.hpp"
#include "multroot/poly.hpp"

namespace multroot {

/// One Householder reflector H = I - tau v v^H acting on rows [start, start + v.size()).
struct Reflector {
  std::size_t start = 0;
  CVector v;
  double tau = 0.0;

  template <class Vec>
  void apply(Vec& x) const {
    if (tau == 0.0) return;
    Complex dot(0.0, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(v[i]) * x[start + i];
    dot *= tau;
    for (std::size_t i = 0; i < v.size(); ++i) x[start + i] -= v[i] * dot;
  }
};

/// Economy QR of an n x m matrix (n >= m). Q is kept implicitly as reflectors.
///
/// R has a real nonnegative diagonal: Q^H A = [R; 0] with
/// Q^H = diag(phase) * H_{m-1} ... H_0.
struct QRFactors {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Reflector> reflectors;
  CVector phase;  // row phase applied after the reflectors
  CMatrix r;

  /// Q^H b, length rows.
  CVector apply_qh(std::span<const Complex> b) const {
    if (b.size() != rows) throw std::invalid_argument("QRFactors: vector length mismatch");
    CVector x(b.begin(), b.end());
    for (const auto& h : reflectors) h.apply(x);
    for (std::size_t i = 0; i < phase.size(); ++i) x[i] *= phase[i];
    return x;
  }

  /// Explicit n x n unitary Q (tests only).
  CMatrix q() const {
    CMatrix qh(rows, rows);
    for (std::size_t j = 0; j < rows; ++j) {
      CVector e(rows, Complex(0.0, 0.0));
      e[j] = 1.0;
      const CVector c = apply_qh(e);
      for (std::size_t i = 0; i < rows; ++i) qh(i, j) = c[i];
    }
    return qh.adjoint();
  }
};

namespace detail {

// Reflect x[start..] onto a multiple of e_start; returns (reflector, alpha) with H x = alpha e.
inline Reflector make_reflector(std::span<const Complex> x, std::size_t start, Complex& alpha) {
  Reflector h;
  h.start = start;
  h.v.assign(x.begin() + static_cast<std::ptrdiff_t>(start), x.end());
  const double nrm = norm2(h.v);
  if (nrm == 0.0) {
    alpha = 0.0;
    h.tau = 0.0;
    return h;
  }
  const Complex x0 = h.v[0];
  const Complex ph = (std::abs(x0) == 0.0) ? Complex(1.0, 0.0) : x0 / std::abs(x0);
  alpha = -ph * nrm;
  h.v[0] -= alpha;
  const double vn = norm2(h.v);
  if (vn == 0.0) {
    h.tau = 0.0;
    alpha = x0;
    return h;
  }
  for (auto& c : h.v) c /= vn;
  h.tau = 2.0;
  return h;
}

// Triangularize the trailing columns [first_col, cols) of work, whose leading
// first_col columns are already upper triangular.
inline void triangularize(CMatrix& work, std::size_t first_col, QRFactors& qr) {
  const std::size_t n = work.rows();
  for (std::size_t j = first_col; j < work.cols(); ++j) {
    auto cj = work.col(j);
    Complex alpha;
    Reflector h = make_reflector(cj, j, alpha);
    for (std::size_t c = j; c < work.cols(); ++c) {
      auto col = work.col(c);
      h.apply(col);
    }
    for (std::size_t i = j + 1; i < n; ++i) work(i, j) = 0.0;
    work(j, j) = alpha;
    qr.reflectors.push_back(std::move(h));
    const double a = std::abs(alpha);
    qr.phase.push_back(a == 0.0 ? Complex(1.0, 0.0) : std::conj(alpha) / a);
  }
}

inline void extract_r(const CMatrix& work, QRFactors& qr) {
  const std::size_t m = work.cols();
  qr.r = CMatrix(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i <= j; ++i) qr.r(i, j) = qr.phase[i] * work(i, j);
  for (std::size_t i = 0; i < m; ++i) qr.r(i, i) = std::abs(qr.r(i, i));
}

}  // namespace detail

inline QRFactors qr_decompose(const CMatrix& a) {
  if (a.rows() < a.cols()) throw std::invalid_argument("qr_decompose: rows < cols");
  QRFactors qr;
  qr.rows = a.rows();
  qr.cols = a.cols();
  CMatrix work = a;
  detail::triangularize(work, 0, qr);
  detail::extract_r(work, qr);
  return qr;
}

/// QR of [A; 0] | new_cols from the QR of A, where A gains new_rows zero rows.
///
/// Only the new columns are reflected; existing reflectors act as identity on
/// the appended rows, so the old R block is reused unchanged.
inline QRFactors qr_update_append(const QRFactors& qr, std::size_t new_rows, const CMatrix& new_cols) {
  const std::size_t n = qr.rows + new_rows;
  if (new_cols.rows() != n) throw std::invalid_argument("qr_update_append: new column height mismatch");
  const std::size_t m0 = qr.cols;
  const std::size_t m = m0 + new_cols.cols();
  if (n < m) throw std::invalid_argument("qr_update_append: result would have rows < cols");

  QRFactors out;
  out.rows = n;
  out.cols = m;
  out.reflectors = qr.reflectors;
  out.phase = qr.phase;

  // work holds [R0 ; 0] for the old block and Q^H-transformed new columns.
  CMatrix work(n, m);
  for (std::size_t j = 0; j < m0; ++j)
    for (std::size_t i = 0; i <= j; ++i) work(i, j) = qr.r(i, j);
  for (std::size_t j = 0; j < new_cols.cols(); ++j) {
    CVector c(new_cols.col(j).begin(), new_cols.col(j).end());
    for (const auto& h : qr.reflectors) h.apply(c);
    for (std::size_t i = 0; i < m0; ++i) c[i] *= qr.phase[i];
    for (std::size_t i = 0; i < n; ++i) work(i, m0 + j) = c[i];
  }
  // The old diagonal is already real nonnegative; give those rows unit phase
  // for the extraction below, then restore the stored phases.
  std::vector<Complex> saved(out.phase);
  std::fill(out.phase.begin(), out.phase.end(), Complex(1.0, 0.0));
  detail::triangularize(work, m0, out);
  detail::extract_r(work, out);
  std::copy(saved.begin(), saved.end(), out.phase.begin());
  return out;
}

/// Solve R x = b by back substitution.
inline CVector back_substitute(const CMatrix& r, std::span<const Complex> b) {
  const std::size_t m = r.cols();
  CVector x(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t ii = m; ii-- > 0;) {
    Complex s = x[ii];
    for (std::size_t j = ii + 1; j < m; ++j) s -= r(ii, j) * x[j];
    if (r(ii, ii) == Complex(0.0, 0.0)) throw SingularMatrixError("back_substitute: zero diagonal in R");
    x[ii] = s / r(ii, ii);
  }
  return x;
}

/// Solve R^H y = b by forward substitution.
inline CVector forward_substitute_adjoint(const CMatrix& r, std::span<const Complex> b) {
  const std::size_t m = r.cols();
  CVector y(b.begin(), b.end());
  for (std::size_t i = 0; i < m; ++i) {
    Complex s = y[i];
    for (std::size_t j = 0; j < i; ++j) s -= std::conj(r(j, i)) * y[j];
    if (r(i, i) == Complex(0.0, 0.0)) throw SingularMatrixError("forward_substitute: zero diagonal in R");
    y[i] = s / std::conj(r(i, i));
  }
  return y;
}

/// argmin ||A x - b||_2 from the QR of A.
inline CVector least_squares_solve(const QRFactors& qr, std::span<const Complex> b) {
  if (b.size() != qr.rows) throw std::invalid_argument("least_squares_solve: rhs length mismatch");
  const CVector c = qr.apply_qh(b);
  return back_substitute(qr.r, c);
}

struct SingularPair {
  double sigma = 0.0;
  CVector vector;
  int iterations = 0;
  bool converged = false;
};

/// Smallest singular value of A and its right singular vector by inverse
/// iteration on the triangular factor: R^H y = x, R z = y, x = z/|z|,
/// sigma = |R x|. Stops when the relative change in sigma drops below tol.
inline SingularPair smallest_singular_pair(const QRFactors& qr, std::span<const Complex> x0, double tol = 1e-2,
                                           int max_iter = 30) {
  const std::size_t m = qr.cols;
  if (x0.size() != m) throw std::invalid_argument("smallest_singular_pair: start vector length mismatch");
  if (norm2(x0) == 0.0) throw std::invalid_argument("smallest_singular_pair: zero start vector");

  // An exactly singular R would stop the triangular solves; nudging its zero
  // pivots keeps the iteration on the same path and drives x to the null vector.
  CMatrix r = qr.r;
  for (std::size_t i = 0; i < m; ++i)
    if (r(i, i) == Complex(0.0, 0.0)) r(i, i) = 1e-150;

  auto norm_r_times = [&](const CVector& x) {
    CVector y(m, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i <= j; ++i) y[i] += qr.r(i, j) * x[j];
    return norm2(y);
  };

  SingularPair out;
  CVector x(x0.begin(), x0.end());
  const double n0 = norm2(x);
  for (auto& c : x) c /= n0;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    const CVector y = forward_substitute_adjoint(r, x);
    CVector z = back_substitute(r, y);
    double zn = norm2(z);
    if (!std::isfinite(zn)) {
      // overflow from a nudged pivot: rescale the intermediate and retry once
      CVector ys(y);
      const double yn = norm2(ys);
      for (auto& c : ys) c /= yn;
      z = back_substitute(r, ys);
      zn = norm2(z);
    }
    for (auto& c : z) c /= zn;
    x = std::move(z);
    out.sigma = norm_r_times(x);
    out.iterations = it;
    if (std::abs(out.sigma - prev) <= tol * out.sigma) {
      out.converged = true;
      break;
    }
    prev = out.sigma;
  }
  out.vector = std::move(x);
  return out;
}

inline SingularPair smallest_singular_pair(const QRFactors& qr, double tol = 1e-2, int max_iter = 30) {
  const std::size_t m = qr.cols;
  CVector x0(m, Complex(1.0 / std::sqrt(static_cast<double>(m)), 0.0));
  return smallest_singular_pair(qr, x0, tol, max_iter);
}

struct SvdResult {
  RVector values;  // descending
  CMatrix right;   // columns are right singular vectors, same order
};

/// Upper limit on columns accepted by jacobi_svd.
inline constexpr std::size_t kJacobiSvdMaxCols = 200;

/// One-sided (Hestenes) Jacobi SVD.
inline SvdResult jacobi_svd(const CMatrix& a) {
  if (a.rows() < a.cols()) throw std::invalid_argument("jacobi_svd: rows < cols");
  if (a.cols() > kJacobiSvdMaxCols) throw std::invalid_argument("jacobi_svd: more than 200 columns");
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  CMatrix u = a;
  CMatrix v = CMatrix::identity(m);
  const double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          alpha += std::norm(u(i, p));
          beta += std::norm(u(i, q));
          gamma += std::conj(u(i, p)) * u(i, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Diagonalize [[alpha, gamma], [conj(gamma), beta]].
        const Complex ph = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const Complex up = u(i, p), uq = u(i, q);
          u(i, p) = c * up - s * std::conj(ph) * uq;
          u(i, q) = s * ph * up + c * uq;
        }
        for (std::size_t i = 0; i < m; ++i) {
          const Complex vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * std::conj(ph) * vq;
          v(i, q) = s * ph * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  RVector sv(m);
  for (std::size_t j = 0; j < m; ++j) sv[j] = norm2(u.col(j));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sv[i] > sv[j]; });
  SvdResult out;
  out.values.resize(m);
  out.right = CMatrix(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    out.values[k] = sv[order[k]];
    for (std::size_t i = 0; i < m; ++i) out.right(i, k) = v(i, order[k]);
  }
  return out;
}

/// 2-norm condition number sigma_max / sigma_min; +inf when sigma_min is 0.
inline double matrix_condition(const CMatrix& a) {
  const SvdResult s = jacobi_svd(a);
  if (s.values.empty()) throw std::invalid_argument("matrix_condition: empty matrix");
  const double smin = s.values.back();
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s.values.front() / smin;
}

}  // namespace multroot
