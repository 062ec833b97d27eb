#pragma once

// Squarefree factorization p = v_1 v_2 ... v_s by repeated GCD(u, u'),
// multiplicity structure from the factor degrees, simple roots of each factor
// and grouping of those roots into one estimate per distinct root.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "multroot/errors.hpp"
#include "multroot/gcd.hpp"
#include "multroot/pejroot.hpp"
#include "multroot/poly.hpp"

namespace multroot {

struct SquarefreeSequence {
  std::vector<Poly> factors;       // v_1, ..., v_s
  std::vector<int> degrees;        // d_1 >= ... >= d_s
  std::vector<double> residuals;   // rho_m per GCD step
  double final_tolerance = 0.0;    // residual tolerance after the last update
};

/// A GCD step was rejected at every k. partial() holds the factors found so
/// far; remainder() is the polynomial whose GCD could not be confirmed.
class StructureIdentificationFailed : public std::runtime_error {
 public:
  StructureIdentificationFailed(const std::string& what, SquarefreeSequence partial, Poly remainder,
                                double best_residual)
      : std::runtime_error(what),
        partial_(std::move(partial)),
        remainder_(std::move(remainder)),
        best_residual_(best_residual) {}
  const SquarefreeSequence& partial() const { return partial_; }
  const Poly& remainder() const { return remainder_; }
  double best_residual() const { return best_residual_; }

 private:
  SquarefreeSequence partial_;
  Poly remainder_;
  double best_residual_;
};

struct GcdRootParams {
  double theta = 1e-8;   // zero singular value threshold
  double varrho = 1e-10; // initial residual tolerance
  double phi = 100.0;    // residual tolerance growth factor
};

/// u_0 = p, (u_m, v_m, w_m) = GCD(u_{m-1}, u_{m-1}') until deg u_s = 0.
inline SquarefreeSequence squarefree_sequence(const Poly& p, double theta, double varrho, double phi) {
  if (p.degree() < 1) throw std::invalid_argument("squarefree_sequence: degree must be >= 1");
  SquarefreeSequence seq;
  double tol = varrho;
  Poly u = p.monic();
  while (u.degree() > 0) {
    // the distinct roots of u_m are among those of u_{m-1}
    const int cap = seq.degrees.empty() ? std::numeric_limits<int>::max() : seq.degrees.back();
    GcdStep step = gcd_step(u, theta, tol, cap);
    if (!step.accepted) {
      seq.final_tolerance = tol;
      throw StructureIdentificationFailed(
          "structure identification failed: no GCD of a degree-" + std::to_string(u.degree()) +
              " factor met the residual tolerance (best residual " + std::to_string(step.best_rejected) + ")",
          seq, u, step.best_rejected);
    }
    seq.factors.push_back(step.triplet.v);
    seq.degrees.push_back(static_cast<int>(step.triplet.v.degree()));
    seq.residuals.push_back(step.triplet.residual);
    // residuals are compared relative to ||(u, u')||_W, so the tolerance grows in the same units
    if (step.scale > 0.0) tol = std::max(tol, phi * step.triplet.residual / step.scale);
    u = step.triplet.u;
  }
  seq.final_tolerance = tol;
  return seq;
}

/// l_j = max{t | d_t >= d_1 + 1 - j}, j = 1..d_1; comes out non-decreasing.
inline MultiplicityStructure multiplicity_structure(const std::vector<int>& d) {
  if (d.empty()) throw std::invalid_argument("multiplicity_structure: empty degree list");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 1) throw std::invalid_argument("multiplicity_structure: degrees must be positive");
    if (i > 0 && d[i] > d[i - 1]) throw std::invalid_argument("multiplicity_structure: degrees must be non-increasing");
  }
  const int k = d.front();
  std::vector<int> l(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    int t = 0;
    while (t < static_cast<int>(d.size()) && d[static_cast<std::size_t>(t)] >= k + 1 - j) ++t;
    l[static_cast<std::size_t>(j - 1)] = t;
  }
  return MultiplicityStructure(std::move(l));
}

struct SimpleRootsResult {
  CVector roots;
  bool converged = false;
  int sweeps = 0;
};

/// All roots of v by Aberth-Ehrlich iteration from a circle of radius
/// 1 + max|a_j| (monic coefficients). A root is settled once its correction
/// is below tol relative to its size or its residual reaches rounding level.
inline SimpleRootsResult simple_roots(const Poly& v, double tol = 4.0 * std::numeric_limits<double>::epsilon(),
                                      int max_sweeps = 500) {
  if (v.degree() < 1) throw std::invalid_argument("simple_roots: degree must be >= 1");
  const CVector a = v.monic().coeffs();
  const std::size_t n = v.degree();
  SimpleRootsResult out;
  if (n == 1) {
    out.roots = {-a[1]};
    out.converged = true;
    return out;
  }
  const CVector da = derivative(a);
  RVector absa(a.size());
  double radius = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    absa[i] = std::abs(a[i]);
    if (i > 0) radius = std::max(radius, absa[i]);
  }
  radius += 1.0;

  CVector z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n) + 0.376;
    z[i] = std::polar(radius, ang);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<bool> done(n, false);

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    out.sweeps = sweep;
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Complex pz = evaluate(a, z[i]);
      double bound = 0.0;
      for (double c : absa) bound = bound * std::abs(z[i]) + c;
      if (std::abs(pz) <= 4.0 * eps * bound) {
        done[i] = true;
        continue;
      }
      const Complex ratio = pz / evaluate(da, z[i]);
      Complex s(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) s += 1.0 / (z[i] - z[j]);
      const Complex step = ratio / (1.0 - ratio * s);
      z[i] -= step;
      if (std::abs(step) <= tol * std::max(1.0, std::abs(z[i])))
        done[i] = true;
      else
        all = false;
    }
    if (all && std::all_of(done.begin(), done.end(), [](bool b) { return b; })) {
      out.converged = true;
      break;
    }
  }
  out.roots = std::move(z);
  return out;
}

/// One estimate per distinct root. Each root of v_1 starts a chain; at level t
/// the roots of v_t are matched to the chains still open (length t-1) by
/// repeatedly taking the globally closest (chain mean, root) pair. The
/// estimate is the mean of the chain, and the chain length its multiplicity.
/// Chains are returned by ascending length, matching multiplicity_structure.
inline CVector group_roots(const std::vector<CVector>& per_factor_roots, const MultiplicityStructure& l) {
  if (per_factor_roots.empty()) throw std::invalid_argument("group_roots: no factors");
  struct Chain {
    Complex sum;
    int len;
    std::size_t origin;
  };
  std::vector<Chain> chains;
  for (std::size_t i = 0; i < per_factor_roots[0].size(); ++i) chains.push_back({per_factor_roots[0][i], 1, i});

  for (std::size_t t = 1; t < per_factor_roots.size(); ++t) {
    const CVector& roots = per_factor_roots[t];
    std::vector<std::size_t> open;
    for (std::size_t c = 0; c < chains.size(); ++c)
      if (chains[c].len == static_cast<int>(t)) open.push_back(c);
    if (roots.size() > open.size())
      throw GroupingInconsistentError("group_roots: factor " + std::to_string(t + 1) + " has more roots than open chains");
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t c : open) {
      const Complex mean = chains[c].sum / static_cast<double>(chains[c].len);
      for (std::size_t r = 0; r < roots.size(); ++r) pairs.emplace_back(std::abs(mean - roots[r]), c, r);
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> chain_used(chains.size(), false), root_used(roots.size(), false);
    for (const auto& [d, c, r] : pairs) {
      if (chain_used[c] || root_used[r]) continue;
      chain_used[c] = root_used[r] = true;
      chains[c].sum += roots[r];
      ++chains[c].len;
    }
  }

  std::stable_sort(chains.begin(), chains.end(), [](const Chain& a, const Chain& b) { return a.len < b.len; });
  std::vector<int> lens, want(l.begin(), l.end());
  for (const auto& c : chains) lens.push_back(c.len);
  std::sort(want.begin(), want.end());
  if (lens != want) throw GroupingInconsistentError("group_roots: chain lengths do not match the multiplicity structure");

  // hand the estimates back in the order of l
  CVector out(l.size());
  std::vector<bool> taken(chains.size(), false);
  for (std::size_t j = 0; j < l.size(); ++j) {
    for (std::size_t c = 0; c < chains.size(); ++c) {
      if (taken[c] || chains[c].len != l[j]) continue;
      taken[c] = true;
      out[j] = chains[c].sum / static_cast<double>(chains[c].len);
      break;
    }
  }
  return out;
}

struct GcdRootResult {
  MultiplicityStructure structure;
  CVector initial_roots;
  double backward_error = 0.0;   // weighted distance of v_1 ... v_s from p
  std::vector<CVector> per_factor_roots;
  SquarefreeSequence sequence;
  bool roots_converged = true;   // every base solve converged
};

/// Full squarefree pipeline: factors, structure, root estimates.
inline GcdRootResult gcd_root(const Poly& p, const GcdRootParams& params = {}) {
  if (p.degree() < 1) throw std::invalid_argument("gcd_root: degree must be >= 1");
  const Poly pm = p.monic();
  GcdRootResult res;
  res.sequence = squarefree_sequence(pm, params.theta, params.varrho, params.phi);
  res.structure = multiplicity_structure(res.sequence.degrees);
  for (const Poly& v : res.sequence.factors) {
    SimpleRootsResult r = simple_roots(v);
    res.roots_converged = res.roots_converged && r.converged;
    res.per_factor_roots.push_back(std::move(r.roots));
  }
  res.initial_roots = group_roots(res.per_factor_roots, res.structure);

  CVector prod{Complex(1.0, 0.0)};
  for (const Poly& v : res.sequence.factors) prod = conv(prod, v.coeffs());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] -= pm[i];
  res.backward_error = weighted_norm(prod, default_weights(pm.coeffs()));
  return res;
}

}  // namespace multroot
