#pragma once

// Numerical GCD of f and f': degree search over the interleaved Sylvester
// matrices with QR updating, the GCD system and its Jacobian, least squares
// division for the initial quotient, and Gauss-Newton refinement.

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "multroot/linalg.hpp"
#include "multroot/poly.hpp"

namespace multroot {

/// u monic of degree m, v = f/u of degree k, w = f'/u of degree k-1.
struct GcdTriplet {
  Poly u;
  Poly v;
  Poly w;
  double residual = 0.0;
};

struct DegreeSearchOutcome {
  int k = 0;  // distinct roots
  int m = 0;  // gcd degree
  Poly v0;
  Poly w0;
  double sigma = 0.0;
  std::vector<double> history;  // sigma_j for each j examined
};

/// 1/max(1,|t_i|) over the stacked target (1, f, f').
inline RVector gcd_weights(const Poly& f) {
  const CVector df = derivative(f.coeffs());
  RVector w;
  w.reserve(1 + f.size() + df.size());
  w.push_back(1.0);
  for (const auto& c : f.coeffs()) w.push_back(1.0 / std::max(1.0, std::abs(c)));
  for (const auto& c : df) w.push_back(1.0 / std::max(1.0, std::abs(c)));
  return w;
}

/// Jacobian of (u, v, w) -> (u_0, conv(u,v), conv(u,w)):
///   [ e1^T    0       0       ]
///   [ C_m(v)  C_k(u)  0       ]
///   [ C_m(w)  0       C_k-1(u)]
/// Degrees are read from the vector lengths, so leading zeros count.
inline CMatrix gcd_jacobian(std::span<const Complex> u, std::span<const Complex> v, std::span<const Complex> w) {
  if (u.empty() || v.size() < 2 || w.size() + 1 != v.size())
    throw std::invalid_argument("gcd_jacobian: inconsistent degrees");
  const int m = static_cast<int>(u.size()) - 1;
  const int k = static_cast<int>(v.size()) - 1;
  const std::size_t n = u.size() + v.size() - 2;
  const std::size_t cu = u.size(), cv = v.size(), cw = w.size();
  CMatrix jac(1 + (n + 1) + n, cu + cv + cw);
  jac(0, 0) = 1.0;
  auto place = [&](const CMatrix& blk, std::size_t r0, std::size_t c0) {
    for (std::size_t j = 0; j < blk.cols(); ++j)
      for (std::size_t i = 0; i < blk.rows(); ++i) jac(r0 + i, c0 + j) = blk(i, j);
  };
  place(convolution_matrix(v, m), 1, 0);
  place(convolution_matrix(u, k), 1, cu);
  place(convolution_matrix(w, m), n + 2, 0);
  place(convolution_matrix(u, k - 1), n + 2, cu + cv);
  return jac;
}

inline CMatrix gcd_jacobian(const Poly& u, const Poly& v, const Poly& w) {
  return gcd_jacobian(u.coeffs(), v.coeffs(), w.coeffs());
}

/// argmin ||conv(u0, v0) - f||_2 through the QR of C_m(v0).
inline Poly least_squares_division(const Poly& v0, const Poly& f) {
  if (!(v0.norm() > std::numeric_limits<double>::min())) throw std::invalid_argument("least_squares_division: zero divisor");
  if (v0.degree() > f.degree()) throw std::invalid_argument("least_squares_division: deg(v0) > deg(f)");
  const int m = static_cast<int>(f.degree() - v0.degree());
  const QRFactors qr = qr_decompose(convolution_matrix(v0, m));
  return Poly(least_squares_solve(qr, f.coeffs()));
}

namespace detail {

/// W * (u_0 - 1, conv(u,v) - f, conv(u,w) - f').
inline CVector gcd_system_residual(std::span<const Complex> f, std::span<const Complex> df,
                                   std::span<const Complex> u, std::span<const Complex> v,
                                   std::span<const Complex> w, std::span<const double> wt) {
  const CVector uv = conv(u, v);
  const CVector uw = conv(u, w);
  CVector r;
  r.reserve(wt.size());
  r.push_back(u[0] - 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) r.push_back(uv[i] - f[i]);
  for (std::size_t i = 0; i < df.size(); ++i) r.push_back(uw[i] - df[i]);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= wt[i];
  return r;
}

}  // namespace detail

/// ||(conv(u,v) - f, conv(u,w) - f')||_W, with W the tail of gcd_weights.
inline double gcd_residual(const Poly& f, const Poly& u, const Poly& v, const Poly& w, std::span<const double> wt) {
  const CVector df = derivative(f.coeffs());
  if (u.size() + v.size() - 1 != f.size() || u.size() + w.size() - 1 != df.size() || wt.size() != 1 + f.size() + df.size())
    throw std::invalid_argument("gcd_residual: inconsistent sizes");
  CVector r = detail::gcd_system_residual(f.coeffs(), df, u.coeffs(), v.coeffs(), w.coeffs(), wt);
  r[0] = 0.0;
  return norm2(r);
}

/// ||(f, f')||_W, the scale the GCD residual is measured against.
inline double gcd_target_norm(const Poly& f, std::span<const double> wt) {
  const CVector df = derivative(f.coeffs());
  if (wt.size() != 1 + f.size() + df.size()) throw std::invalid_argument("gcd_target_norm: weight length mismatch");
  CVector t(f.coeffs());
  t.insert(t.end(), df.begin(), df.end());
  return weighted_norm(t, wt.subspan(1));
}

namespace detail {

inline GcdTriplet make_monic_triplet(const Poly& f, CVector u, CVector v, CVector w, std::span<const double> wt) {
  const Complex lead = u[0];
  if (lead != Complex(0.0, 0.0)) {
    for (auto& c : u) c /= lead;
    for (auto& c : v) c *= lead;
    for (auto& c : w) c *= lead;
  }
  u[0] = 1.0;
  GcdTriplet t{Poly(std::move(u)), Poly(std::move(v)), Poly(std::move(w)), 0.0};
  t.residual = gcd_residual(f, t.u, t.v, t.w, wt);
  return t;
}

}  // namespace detail

/// Gauss-Newton on the GCD system from (u0, v0, w0). Once the residual has
/// started to decrease, the first step that fails to decrease it ends the
/// iteration; max_iter caps the total. Returns the iterate with the smallest
/// residual, rescaled so u is monic. log collects the residual after each
/// step (starting value first), steps the correction norms.
inline GcdTriplet gcd_refine(const Poly& f, const Poly& u0, const Poly& v0, const Poly& w0, std::span<const double> wt,
                             int max_iter = 20, std::vector<double>* log = nullptr,
                             std::vector<double>* steps = nullptr) {
  const CVector df = derivative(f.coeffs());
  if (v0.degree() < 1 || w0.degree() + 1 != v0.degree() || u0.degree() + v0.degree() != f.degree())
    throw std::invalid_argument("gcd_refine: inconsistent degrees");
  if (wt.size() != 1 + f.size() + df.size()) throw std::invalid_argument("gcd_refine: weight length mismatch");

  CVector u = u0.coeffs(), v = v0.coeffs(), w = w0.coeffs();
  const std::size_t cu = u.size(), cv = v.size();

  CVector r = detail::gcd_system_residual(f.coeffs(), df, u, v, w, wt);
  double rho = norm2(r);
  if (log) log->push_back(rho);
  CVector bu = u, bv = v, bw = w;
  double prev = rho;
  bool contracting = false;

  for (int it = 0; it < max_iter && rho > 0.0; ++it) {
    CMatrix jac = gcd_jacobian(u, v, w);
    jac.scale_rows(wt);
    CVector dz;
    try {
      dz = least_squares_solve(qr_decompose(jac), r);
    } catch (const SingularMatrixError&) {
      break;
    }
    if (steps) steps->push_back(norm2(dz));
    for (std::size_t i = 0; i < cu; ++i) u[i] -= dz[i];
    for (std::size_t i = 0; i < cv; ++i) v[i] -= dz[cu + i];
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= dz[cu + cv + i];
    r = detail::gcd_system_residual(f.coeffs(), df, u, v, w, wt);
    const double next = norm2(r);
    if (log) log->push_back(next);
    if (!std::isfinite(next)) break;
    if (!(next < prev)) {
      // a rough start may overshoot before it settles; once contracting, an increase ends it
      if (contracting) break;
      prev = next;
      continue;
    }
    contracting = true;
    prev = next;
    if (next < rho) {
      rho = next;
      bu = u;
      bv = v;
      bw = w;
    }
  }
  return detail::make_monic_triplet(f, std::move(bu), std::move(bv), std::move(bw), wt);
}

/// Incremental search over k = 1, 2, ... for the first interleaved Sylvester
/// matrix whose smallest singular value falls below theta * ||f||_2. The QR
/// factors are kept between calls so a rejected trigger resumes at k+1.
class DegreeSearch {
 public:
  DegreeSearch(const Poly& f, double theta) : f_(f), df_(derivative(f.coeffs())), theta_(theta) {
    if (f_.degree() < 1) throw std::invalid_argument("DegreeSearch: degree must be >= 1");
    n_ = static_cast<int>(f_.degree());
    threshold_ = theta_ * f_.norm();
  }

  int n() const { return n_; }
  int next_k() const { return k_ + 1; }
  const std::vector<double>& history() const { return history_; }

  /// Move to the next k without examining the current one.
  void skip() { advance(); }

  /// Examine k = next_k(), next_k()+1, ... up to min(n-1, max_k); the first trigger is returned.
  std::optional<DegreeSearchOutcome> next(int max_k = std::numeric_limits<int>::max()) {
    while (k_ + 1 <= std::min(n_ - 1, max_k)) {
      advance();
      const SingularPair sp = smallest_singular_pair(qr_, 1e-6, 100);
      history_.push_back(sp.sigma);
      if (sp.sigma <= threshold_) return extract(sp);
    }
    return std::nullopt;
  }

 private:
  void advance() {
    if (k_ + 1 > n_ - 1) throw std::logic_error("DegreeSearch: past the last Sylvester matrix");
    if (k_ == 0) {
      qr_ = qr_decompose(sylvester_matrix(f_, 1, true));
    } else {
      // S_{k+1}: one zero row, then columns f shifted by k and f' shifted by k+1
      const auto k = static_cast<std::size_t>(k_);
      const std::size_t rows = static_cast<std::size_t>(n_) + k + 1;
      CMatrix cols(rows, 2);
      for (std::size_t i = 0; i < f_.size(); ++i) cols(k + i, 0) = f_[i];
      for (std::size_t i = 0; i < df_.size(); ++i) cols(k + 1 + i, 1) = df_[i];
      qr_ = qr_update_append(qr_, 1, cols);
    }
    ++k_;
  }

  DegreeSearchOutcome extract(const SingularPair& sp) const {
    // even entries carry v, odd entries carry -w
    const auto k = static_cast<std::size_t>(k_);
    CVector v(k + 1), w(k);
    for (std::size_t i = 0; i <= k; ++i) v[i] = sp.vector[2 * i];
    for (std::size_t i = 0; i < k; ++i) w[i] = -sp.vector[2 * i + 1];
    const Complex lead = v[0];
    if (lead != Complex(0.0, 0.0)) {
      for (auto& c : v) c /= lead;
      for (auto& c : w) c /= lead;
    }
    DegreeSearchOutcome out;
    out.k = k_;
    out.m = n_ - k_;
    out.v0 = Poly(std::move(v));
    out.w0 = Poly(std::move(w));
    out.sigma = sp.sigma;
    out.history = history_;
    return out;
  }

  Poly f_;
  CVector df_;
  double theta_;
  double threshold_ = 0.0;
  int n_ = 0;
  int k_ = 0;
  QRFactors qr_;
  std::vector<double> history_;
};

namespace detail {

inline DegreeSearchOutcome squarefree_outcome(const Poly& f, std::vector<double> history) {
  DegreeSearchOutcome out;
  out.k = static_cast<int>(f.degree());
  out.m = 0;
  out.v0 = f;
  out.w0 = derivative(f);
  out.sigma = 0.0;
  out.history = std::move(history);
  return out;
}

}  // namespace detail

/// One-shot degree search starting at start_k. Without a trigger the
/// squarefree convention k = n, m = 0, v0 = f, w0 = f' is returned.
inline DegreeSearchOutcome degree_search(const Poly& f, double theta, int start_k = 1) {
  if (start_k < 1) throw std::invalid_argument("degree_search: start_k must be >= 1");
  DegreeSearch s(f, theta);
  for (int j = 1; j < start_k && s.next_k() <= s.n() - 1; ++j) s.skip();
  if (auto hit = s.next()) return *hit;
  return detail::squarefree_outcome(f, s.history());
}

struct GcdStep {
  GcdTriplet triplet;
  bool accepted = false;
  bool triggered = false;        // some sigma_k fell below the threshold
  double best_rejected = std::numeric_limits<double>::infinity();
  double scale = 0.0;            // ||(f, f')||_W
  std::vector<double> history;
};

namespace detail {

inline GcdTriplet squarefree_triplet(const Poly& f) {
  GcdTriplet t{Poly{Complex(1.0, 0.0)}, f, derivative(f), 0.0};
  return t;
}

}  // namespace detail

/// GCD(f, f') with residual confirmation: a trigger at k is accepted when the
/// refined residual is at most varrho * ||(f, f')||_W, otherwise the search
/// continues at k+1. The residual is weighted, so its yardstick is too; a bare
/// ||f||_2 reaches 1e20 for high multiplicities and would accept anything.
///
/// max_k caps the number of distinct roots; if nothing is accepted up to the
/// cap and deg f exceeds it, the step fails.
inline GcdStep gcd_step(const Poly& f, double theta, double varrho, int max_k = std::numeric_limits<int>::max()) {
  if (f.degree() < 1) throw std::invalid_argument("gcd_of_p_and_dp: degree must be >= 1");
  GcdStep out;
  if (f.degree() == 1) {
    out.triplet = detail::squarefree_triplet(f);
    out.accepted = true;
    return out;
  }
  const RVector wt = gcd_weights(f);
  out.scale = gcd_target_norm(f, wt);
  const double tol = varrho * out.scale;
  DegreeSearch search(f, theta);
  while (auto hit = search.next(max_k)) {
    out.triggered = true;
    const Poly u0 = least_squares_division(hit->v0, f);
    GcdTriplet t = gcd_refine(f, u0, hit->v0, hit->w0, wt);
    if (t.residual <= tol) {
      out.triplet = std::move(t);
      out.accepted = true;
      out.history = search.history();
      return out;
    }
    out.best_rejected = std::min(out.best_rejected, t.residual);
  }
  out.history = search.history();
  out.triplet = detail::squarefree_triplet(f);
  out.accepted = !out.triggered && static_cast<int>(f.degree()) <= max_k;
  return out;
}

/// (triplet, accepted). With no trigger at all f is squarefree and the
/// triplet is (1, f, f'), accepted. When every trigger failed confirmation the
/// same convention is returned with accepted = false.
inline std::pair<GcdTriplet, bool> gcd_of_p_and_dp(const Poly& f, double theta, double varrho) {
  GcdStep s = gcd_step(f, theta, varrho);
  return {std::move(s.triplet), s.accepted};
}

}  // namespace multroot
