#pragma once

// Polynomial values, coefficient arithmetic and the structured matrices
// (convolution and Sylvester discriminant) built from them.
//
// Coefficients are stored leading-first: p(x) = c[0] x^n + c[1] x^(n-1) + ... + c[n].

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace multroot {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

/// Dense complex matrix, column-major storage.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<Complex> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const Complex> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  const CVector& data() const { return data_; }

  CVector operator*(std::span<const Complex> x) const {
    if (x.size() != cols_) throw std::invalid_argument("CMatrix: vector length mismatch");
    CVector y(rows_, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < cols_; ++j) {
      const Complex xj = x[j];
      if (xj == Complex(0.0, 0.0)) continue;
      const Complex* c = data_.data() + j * rows_;
      for (std::size_t i = 0; i < rows_; ++i) y[i] += c[i] * xj;
    }
    return y;
  }

  CMatrix operator*(const CMatrix& b) const {
    if (b.rows_ != cols_) throw std::invalid_argument("CMatrix: inner dimension mismatch");
    CMatrix out(rows_, b.cols_);
    for (std::size_t j = 0; j < b.cols_; ++j) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const Complex bkj = b(k, j);
        if (bkj == Complex(0.0, 0.0)) continue;
        for (std::size_t i = 0; i < rows_; ++i) out(i, j) += (*this)(i, k) * bkj;
      }
    }
    return out;
  }

  CMatrix adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  /// Scale row i by d[i].
  void scale_rows(std::span<const double> d) {
    if (d.size() != rows_) throw std::invalid_argument("CMatrix: row scale length mismatch");
    for (std::size_t j = 0; j < cols_; ++j)
      for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) *= d[i];
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVector data_;
};

inline double norm2(std::span<const Complex> v) {
  // scaled accumulation: coefficient vectors of high-degree products overflow a plain sum of squares
  double scale = 0.0;
  for (const auto& x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x / scale);
  return scale * std::sqrt(s);
}

/// Univariate polynomial with complex coefficients, leading coefficient first.
///
/// Exact leading zeros are stripped on construction; nothing fuzzy happens here,
/// so a tiny leading coefficient is kept as given. The zero polynomial is
/// represented by the single coefficient 0.
class Poly {
 public:
  Poly() : c_{Complex(0.0, 0.0)} {}
  Poly(std::initializer_list<Complex> c) : Poly(CVector(c)) {}
  explicit Poly(CVector c) : c_(std::move(c)) {
    if (c_.empty()) throw std::invalid_argument("Poly: empty coefficient vector");
    strip();
  }
  static Poly from_real(std::span<const double> c) {
    CVector v(c.begin(), c.end());
    return Poly(std::move(v));
  }

  std::size_t degree() const { return c_.size() - 1; }
  std::size_t size() const { return c_.size(); }
  const CVector& coeffs() const { return c_; }
  const Complex& operator[](std::size_t i) const { return c_[i]; }
  Complex leading() const { return c_.front(); }
  bool is_zero() const { return c_.size() == 1 && c_[0] == Complex(0.0, 0.0); }

  /// Divide through by the leading coefficient.
  Poly monic() const {
    if (is_zero()) throw std::invalid_argument("Poly: zero polynomial has no monic form");
    const Complex lead = c_.front();
    CVector out(c_);
    for (auto& x : out) x /= lead;
    out.front() = 1.0;
    return Poly(std::move(out));
  }

  /// Trailing coefficients a_1..a_n of the monic form (the leading 1 dropped).
  CVector monic_tail() const {
    const Poly m = monic();
    return CVector(m.c_.begin() + 1, m.c_.end());
  }

  double norm() const { return norm2(c_); }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void strip() {
    std::size_t lead = 0;
    while (lead + 1 < c_.size() && c_[lead] == Complex(0.0, 0.0)) ++lead;
    if (lead > 0) c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
  }

  CVector c_;
};

/// Coefficient vector of f*g.
inline CVector conv(std::span<const Complex> f, std::span<const Complex> g) {
  if (f.empty() || g.empty()) throw std::invalid_argument("conv: empty input");
  CVector h(f.size() + g.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Complex fi = f[i];
    if (fi == Complex(0.0, 0.0)) continue;
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += fi * g[j];
  }
  return h;
}

inline Poly conv(const Poly& f, const Poly& g) { return Poly(conv(f.coeffs(), g.coeffs())); }

inline CVector derivative(std::span<const Complex> p) {
  if (p.empty()) throw std::invalid_argument("derivative: empty input");
  if (p.size() == 1) return {Complex(0.0, 0.0)};
  const std::size_t n = p.size() - 1;
  CVector d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = p[j] * static_cast<double>(n - j);
  return d;
}

inline Poly derivative(const Poly& p) { return Poly(derivative(p.coeffs())); }

/// Horner evaluation.
inline Complex evaluate(std::span<const Complex> p, Complex x) {
  Complex acc(0.0, 0.0);
  for (const auto& c : p) acc = acc * x + c;
  return acc;
}

inline Complex evaluate(const Poly& p, Complex x) { return evaluate(p.coeffs(), x); }

/// C_k(p): (deg p + k + 1) x (k + 1); column j is p's coefficients shifted down j rows.
inline CMatrix convolution_matrix(std::span<const Complex> p, int k) {
  if (k < 0) throw std::invalid_argument("convolution_matrix: negative order");
  if (p.empty()) throw std::invalid_argument("convolution_matrix: empty polynomial");
  const std::size_t cols = static_cast<std::size_t>(k) + 1;
  CMatrix c(p.size() + cols - 1, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < p.size(); ++i) c(i + j, j) = p[i];
  return c;
}

inline CMatrix convolution_matrix(const Poly& p, int k) { return convolution_matrix(p.coeffs(), k); }

/// k-th Sylvester discriminant matrix of p, size (n+k) x (2k+1).
///
/// Plain layout is [C_k(p') | C_{k-1}(p)]. The interleaved layout puts the
/// column of C_k(p') with index i at position 2i and the column of C_{k-1}(p)
/// with index i at position 2i+1, so 0-based even columns carry p' and odd
/// columns carry p. Growing k by one then appends a zero row and two columns.
inline CMatrix sylvester_matrix(const Poly& p, int k, bool interleaved) {
  const auto n = static_cast<int>(p.degree());
  if (k < 1 || k > n - 1) throw std::invalid_argument("sylvester_matrix: k out of range [1, deg-1]");
  const CVector dp = derivative(p.coeffs());
  const CMatrix a = convolution_matrix(dp, k);
  const CMatrix b = convolution_matrix(p.coeffs(), k - 1);
  const auto rows = static_cast<std::size_t>(n + k);
  const auto uk = static_cast<std::size_t>(k);
  CMatrix s(rows, 2 * uk + 1);
  for (std::size_t j = 0; j <= uk; ++j) {
    const std::size_t dst = interleaved ? 2 * j : j;
    for (std::size_t i = 0; i < rows; ++i) s(i, dst) = a(i, j);
  }
  for (std::size_t j = 0; j < uk; ++j) {
    const std::size_t dst = interleaved ? 2 * j + 1 : uk + 1 + j;
    for (std::size_t i = 0; i < rows; ++i) s(i, dst) = b(i, j);
  }
  return s;
}

/// Synthetic (long) division f = v q + r with deg r < deg v.
///
/// Unstable for large quotient degrees; the GCD pipeline uses
/// least_squares_division instead.
inline std::pair<Poly, Poly> long_division(const Poly& f, const Poly& v) {
  if (v.is_zero()) throw std::invalid_argument("long_division: zero divisor");
  if (f.degree() < v.degree()) throw std::invalid_argument("long_division: deg(f) < deg(v)");
  const std::size_t nf = f.degree();
  const std::size_t nv = v.degree();
  CVector rem(f.coeffs());
  CVector q(nf - nv + 1);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = rem[i] / v[0];
    for (std::size_t j = 0; j <= nv; ++j) rem[i + j] -= q[i] * v[j];
  }
  CVector r(rem.begin() + static_cast<std::ptrdiff_t>(q.size()), rem.end());
  if (r.empty()) r.push_back(0.0);
  return {Poly(std::move(q)), Poly(std::move(r))};
}

/// sqrt(sum w_j^2 |v_j|^2).
inline double weighted_norm(std::span<const Complex> vec, std::span<const double> weights) {
  if (vec.size() != weights.size()) throw std::invalid_argument("weighted_norm: length mismatch");
  CVector scaled(vec.size());
  for (std::size_t j = 0; j < vec.size(); ++j) scaled[j] = vec[j] * weights[j];
  return norm2(scaled);
}

/// Monic polynomial with the given roots, repeated by multiplicity.
inline Poly poly_from_roots(std::span<const Complex> roots, std::span<const int> mult) {
  if (roots.size() != mult.size()) throw std::invalid_argument("poly_from_roots: length mismatch");
  CVector s{Complex(1.0, 0.0)};
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const Complex lin[2] = {Complex(1.0, 0.0), -roots[i]};
    for (int t = 0; t < mult[i]; ++t) s = conv(s, lin);
  }
  return Poly(std::move(s));
}

}  // namespace multroot
