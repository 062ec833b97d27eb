#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <vector>

#include "multroot/multroot.hpp"

namespace testing_support {

using multroot::Complex;
using multroot::CVector;
using multroot::CMatrix;
using multroot::MultiplicityStructure;
using multroot::Poly;

/// Max relative error after pairing each exact root with its nearest
/// computed root (greedy over the global distance list). Also checks that the
/// paired multiplicities agree.
struct RootMatch {
  double max_rel_error = std::numeric_limits<double>::infinity();
  bool multiplicities_agree = false;
  double digits() const { return max_rel_error == 0.0 ? 17.0 : -std::log10(max_rel_error); }
};

inline RootMatch match_roots(const CVector& got, const MultiplicityStructure& got_l, const CVector& want,
                             const std::vector<int>& want_l) {
  RootMatch m;
  if (got.size() != want.size()) return m;
  struct Pair { double d; std::size_t i, j; };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < want.size(); ++i)
    for (std::size_t j = 0; j < got.size(); ++j) pairs.push_back({std::abs(want[i] - got[j]), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
  std::vector<bool> ui(want.size(), false), uj(got.size(), false);
  m.max_rel_error = 0.0;
  m.multiplicities_agree = true;
  for (const auto& p : pairs) {
    if (ui[p.i] || uj[p.j]) continue;
    ui[p.i] = uj[p.j] = true;
    const double scale = std::max(1.0, std::abs(want[p.i]));
    m.max_rel_error = std::max(m.max_rel_error, p.d / scale);
    if (got_l[p.j] != want_l[p.i]) m.multiplicities_agree = false;
  }
  return m;
}

inline bool same_multiset(const MultiplicityStructure& l, std::vector<int> want) {
  std::vector<int> a(l.begin(), l.end());
  std::sort(a.begin(), a.end());
  std::sort(want.begin(), want.end());
  return a == want;
}

/// Round to k significant decimal digits.
inline double round_sig(double x, int k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", k - 1, x);
  return std::strtod(buf, nullptr);
}

inline Poly round_coeffs(const Poly& p, int k) {
  CVector c = p.coeffs();
  for (auto& x : c) x = Complex(round_sig(x.real(), k), round_sig(x.imag(), k));
  return Poly(std::move(c));
}

inline Poly from_roots(const CVector& z, const std::vector<int>& l) { return multroot::poly_from_roots(z, l); }

/// All partitions of n, parts in non-increasing order.
inline void partitions_rec(int n, int maxpart, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, maxpart); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(n - p, p, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_rec(n, n, cur, out);
  return out;
}

/// k random complex points in the disc |z| <= radius, pairwise at least gap apart.
inline CVector separated_roots(std::size_t k, double radius, double gap, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    CVector z;
    int tries = 0;
    while (z.size() < k && tries < 10000) {
      ++tries;
      const Complex c(u(rng), u(rng));
      if (std::abs(c) > radius) continue;
      bool ok = true;
      for (const auto& y : z) ok = ok && std::abs(c - y) >= gap;
      if (ok) z.push_back(c);
    }
    if (z.size() == k) return z;
  }
}

inline CVector random_cvector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v;
}

inline CMatrix random_cmatrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(r, c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < r; ++i) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

inline double frob_diff(const CMatrix& a, const CMatrix& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::norm(a(i, j) - b(i, j));
  return std::sqrt(s);
}

/// Central-difference Jacobian of a holomorphic map along real directions.
template <class F>
CMatrix fd_jacobian(F&& fn, const CVector& x, double h) {
  const CVector f0 = fn(x);
  CMatrix j(f0.size(), x.size());
  for (std::size_t c = 0; c < x.size(); ++c) {
    CVector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const CVector fp = fn(xp), fm = fn(xm);
    for (std::size_t r = 0; r < f0.size(); ++r) j(r, c) = (fp[r] - fm[r]) / (2.0 * h);
  }
  return j;
}

/// Largest convergence-order estimate log(r2/r1) / log(r1/r0) over
/// consecutive decreasing triples whose last entry is above the floor.
inline double best_order(const std::vector<double>& r, double floor) {
  double best = 0.0;
  for (std::size_t i = 0; i + 2 < r.size(); ++i) {
    if (r[i + 2] <= floor || !(r[i + 1] < r[i]) || !(r[i + 2] < r[i + 1])) continue;
    best = std::max(best, std::log(r[i + 2] / r[i + 1]) / std::log(r[i + 1] / r[i]));
  }
  return best;
}

/// The GCD system map (u_0, u*v, u*w) without its constant part.
inline CVector gcd_map(const CVector& x, std::size_t nu, std::size_t nv) {
  const CVector u(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nu));
  const CVector v(x.begin() + static_cast<std::ptrdiff_t>(nu), x.begin() + static_cast<std::ptrdiff_t>(nu + nv));
  const CVector w(x.begin() + static_cast<std::ptrdiff_t>(nu + nv), x.end());
  CVector out{u[0]};
  for (const auto& c : multroot::conv(u, v)) out.push_back(c);
  for (const auto& c : multroot::conv(u, w)) out.push_back(c);
  return out;
}

/// Convolution matrix padded with trailing identity columns to a square
/// (deg v + m + 1) matrix.
inline CMatrix padded_convolution(const Poly& v, int m) {
  const CMatrix c = multroot::convolution_matrix(v, m);
  const std::size_t n = c.rows();
  CMatrix l(n, n);
  for (std::size_t j = 0; j < c.cols(); ++j)
    for (std::size_t i = 0; i < n; ++i) l(i, j) = c(i, j);
  for (std::size_t j = c.cols(); j < n; ++j) l(j, j) = 1.0;
  return l;
}

}  // namespace testing_support
