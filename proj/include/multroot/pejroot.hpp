#pragma once

// Root refinement on a fixed multiplicity structure: the coefficient operator
// G_l(z) (coefficients of prod (x - z_j)^{l_j}), its Jacobian, the weighted
// Gauss-Newton iteration, and the structure-preserving condition number.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "multroot/errors.hpp"
#include "multroot/linalg.hpp"
#include "multroot/poly.hpp"

namespace multroot {

/// Ordered multiplicities [l_1, ..., l_m] of the m distinct roots.
class MultiplicityStructure {
 public:
  MultiplicityStructure() = default;
  MultiplicityStructure(std::initializer_list<int> l) : MultiplicityStructure(std::vector<int>(l)) {}
  explicit MultiplicityStructure(std::vector<int> l) : l_(std::move(l)) {
    for (int x : l_)
      if (x < 1) throw std::invalid_argument("MultiplicityStructure: multiplicities must be >= 1");
  }
  static MultiplicityStructure simple(std::size_t n) { return MultiplicityStructure(std::vector<int>(n, 1)); }

  std::size_t size() const { return l_.size(); }
  int operator[](std::size_t i) const { return l_[i]; }
  std::size_t degree() const { return static_cast<std::size_t>(std::accumulate(l_.begin(), l_.end(), 0)); }
  const std::vector<int>& entries() const { return l_; }
  bool all_simple() const {
    return std::all_of(l_.begin(), l_.end(), [](int x) { return x == 1; });
  }
  auto begin() const { return l_.begin(); }
  auto end() const { return l_.end(); }

  friend bool operator==(const MultiplicityStructure&, const MultiplicityStructure&) = default;

 private:
  std::vector<int> l_;
};

/// Relative weights: w_j = min{1, 1/|a_j|}, and 1 for a zero coefficient.
inline RVector default_weights(std::span<const Complex> a) {
  RVector w(a.size(), 1.0);
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double m = std::abs(a[j]);
    if (m > 1.0) w[j] = 1.0 / m;
  }
  return w;
}

namespace detail {

inline void check_roots(const MultiplicityStructure& l, std::span<const Complex> z) {
  if (z.size() != l.size()) throw std::invalid_argument("root vector length does not match the structure");
}

inline void mul_linear(CVector& s, Complex root) {
  s.push_back(Complex(0.0, 0.0));
  for (std::size_t i = s.size() - 1; i > 0; --i) s[i] -= root * s[i - 1];
}

}  // namespace detail

/// G_l(z): the n trailing coefficients of prod (x - z_j)^{l_j}.
inline CVector eval_g(const MultiplicityStructure& l, std::span<const Complex> z) {
  detail::check_roots(l, z);
  CVector s{Complex(1.0, 0.0)};
  s.reserve(l.degree() + 1);
  for (std::size_t i = 0; i < z.size(); ++i)
    for (int t = 0; t < l[i]; ++t) detail::mul_linear(s, z[i]);
  return CVector(s.begin() + 1, s.end());
}

/// n x m Jacobian of eval_g. Column j holds -l_j (x - z_j)^{l_j - 1} prod_{k != j} (x - z_k)^{l_k}.
inline CMatrix eval_j(const MultiplicityStructure& l, std::span<const Complex> z) {
  detail::check_roots(l, z);
  const std::size_t m = z.size();
  const std::size_t n = l.degree();
  CVector u{Complex(1.0, 0.0)};
  for (std::size_t i = 0; i < m; ++i)
    for (int t = 1; t < l[i]; ++t) detail::mul_linear(u, z[i]);
  CMatrix jac(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    CVector s(u);
    for (auto& c : s) c *= -static_cast<double>(l[j]);
    for (std::size_t k = 0; k < m; ++k)
      if (k != j) detail::mul_linear(s, z[k]);
    for (std::size_t i = 0; i < n; ++i) jac(i, j) = s[i];
  }
  return jac;
}

/// ||G_l(z) - a||_W.
inline double backward_error(std::span<const Complex> a, const MultiplicityStructure& l,
                             std::span<const Complex> z, std::span<const double> w) {
  if (a.size() != l.degree()) throw std::invalid_argument("backward_error: coefficient count != structure degree");
  CVector g = eval_g(l, z);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= a[i];
  return weighted_norm(g, w);
}

inline CMatrix weighted_jacobian(const MultiplicityStructure& l, std::span<const Complex> z,
                                 std::span<const double> w) {
  CMatrix j = eval_j(l, z);
  j.scale_rows(w);
  return j;
}

/// 1 / sigma_min(W J) from an existing QR of W J.
inline double condition_from_qr(const QRFactors& qr, double tol = 1e-4) {
  const SingularPair sp = smallest_singular_pair(qr, tol, 200);
  if (sp.sigma == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / sp.sigma;
}

/// Structure-preserving condition number kappa = 1 / sigma_min(W J(z)).
inline double condition_number(const MultiplicityStructure& l, std::span<const Complex> z,
                               std::span<const double> w) {
  if (w.size() != l.degree()) throw std::invalid_argument("condition_number: weight count != structure degree");
  return condition_from_qr(qr_decompose(weighted_jacobian(l, z, w)));
}

struct PejRootOptions {
  double tau = 1e-10;
  int max_iter = 30;
};

struct PejRootResult {
  CVector roots;
  double backward_error = 0.0;
  double condition = 0.0;
  double forward_error_estimate = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> deltas;    // ||dz_k||
  std::vector<CVector> iterates; // z_0, z_1, ...
};

namespace detail {

inline std::pair<std::size_t, std::size_t> closest_pair(std::span<const Complex> z) {
  std::pair<std::size_t, std::size_t> best{0, z.size() > 1 ? 1 : 0};
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) < dmin) {
        dmin = std::abs(z[i] - z[j]);
        best = {i, j};
      }
  return best;
}

}  // namespace detail

/// Weighted Gauss-Newton on the pejorative manifold of l, starting from z0.
///
/// Each step solves [W J(z_k)] dz = W [G(z_k) - a] in the least squares sense
/// and sets z_{k+1} = z_k - dz. From the second step on, the iteration stops
/// successfully once delta_k^2 / (delta_{k-1} - delta_k) < tau, and fails when
/// delta_k >= delta_{k-1} after the step lengths have started to shrink; on
/// failure the iterate with the smallest backward error is returned. Steps
/// already at the rounding floor of z count as converged.
inline PejRootResult pej_root(std::span<const Complex> a, const MultiplicityStructure& l,
                              std::span<const Complex> z0, std::span<const double> w,
                              const PejRootOptions& opt = {}) {
  const std::size_t n = l.degree();
  if (a.size() != n) throw std::invalid_argument("pej_root: coefficient count != structure degree");
  if (w.size() != n) throw std::invalid_argument("pej_root: weight count != structure degree");
  detail::check_roots(l, z0);
  const std::size_t m = l.size();
  const double eps = std::numeric_limits<double>::epsilon();

  PejRootResult res;
  CVector z(z0.begin(), z0.end());
  res.iterates.push_back(z);

  CVector best_z = z;
  double best_be = backward_error(a, l, z, w);
  bool contracting = false;
  CVector rhs(n);

  for (int k = 0; k < opt.max_iter; ++k) {
    const CVector g = eval_g(l, z);
    const QRFactors qr = qr_decompose(weighted_jacobian(l, z, w));
    const SingularPair smin = smallest_singular_pair(qr, 1e-4, 60);
    const double rnorm = qr.r.frobenius_norm();
    if (smin.sigma < 1e-14 * rnorm) {
      const auto [i, j] = detail::closest_pair(z);
      throw IllPosedStructureError("pej_root: Jacobian is rank deficient; roots " + std::to_string(i) + " and " +
                                       std::to_string(j) + " coincide",
                                   i, j);
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] = w[i] * (g[i] - a[i]);
    const CVector dz = least_squares_solve(qr, rhs);
    for (std::size_t i = 0; i < m; ++i) z[i] -= dz[i];
    const double delta = norm2(dz);
    res.deltas.push_back(delta);
    res.iterates.push_back(z);
    res.iterations = k + 1;

    const double be = backward_error(a, l, z, w);
    if (be <= best_be) {
      best_be = be;
      best_z = z;
    }
    if (!std::isfinite(delta)) break;

    const double floor = 64.0 * eps * std::max(1.0, norm2(z));
    if (k >= 1) {
      const double prev = res.deltas[static_cast<std::size_t>(k) - 1];
      if (delta <= floor) {
        res.converged = true;
        break;
      }
      if (delta >= prev) {
        // early steps from a rough start may lengthen before the iteration settles
        if (contracting) break;
        continue;
      }
      contracting = true;
      if (delta * delta / (prev - delta) < opt.tau) {
        res.converged = true;
        break;
      }
    }
  }

  res.roots = res.converged ? z : best_z;
  res.backward_error = backward_error(a, l, res.roots, w);
  res.condition = condition_number(l, res.roots, w);
  res.forward_error_estimate = 2.0 * res.condition * res.backward_error;
  return res;
}

}  // namespace multroot
