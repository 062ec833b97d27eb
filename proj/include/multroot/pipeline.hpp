#pragma once

// multroot: squarefree factorization for the structure and initial estimates,
// then Gauss-Newton on the pejorative manifold, plus the diagnostic report.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "multroot/pejroot.hpp"
#include "multroot/poly.hpp"
#include "multroot/structure.hpp"

namespace multroot {

struct MultRootParams {
  GcdRootParams gcd;
  PejRootOptions pej;
};

struct StageInfo {
  bool gcd_root_ran = false;
  double gcd_root_backward_error = 0.0;
  bool gcd_root_roots_converged = true;
  bool pej_root_ran = false;
  int pej_root_iterations = 0;
  bool pej_root_converged = false;
  Complex normalization{1.0, 0.0};  // leading coefficient divided out at entry
};

struct RootReport {
  CVector roots;
  MultiplicityStructure multiplicities;
  double backward_error = 0.0;
  double condition = 0.0;
  double forward_error_estimate = 0.0;
  bool converged = true;
  StageInfo stage_info;
  std::vector<std::string> warnings;
};

namespace detail {

inline Poly normalize_input(const Poly& p, RootReport& rep) {
  if (p.degree() < 1) throw std::invalid_argument("multroot: polynomial degree must be >= 1");
  rep.stage_info.normalization = p.leading();
  if (p.leading() != Complex(1.0, 0.0))
    rep.warnings.push_back("input divided by its leading coefficient; backward errors refer to the monic polynomial");
  return p.monic();
}

inline void fill_from_pej(RootReport& rep, const PejRootResult& r) {
  rep.roots = r.roots;
  rep.backward_error = r.backward_error;
  rep.condition = r.condition;
  rep.forward_error_estimate = r.forward_error_estimate;
  rep.converged = r.converged;
  rep.stage_info.pej_root_ran = true;
  rep.stage_info.pej_root_iterations = r.iterations;
  rep.stage_info.pej_root_converged = r.converged;
  if (!r.converged)
    rep.warnings.push_back("pej_root did not converge; reporting the iterate with the smallest backward error");
}

}  // namespace detail

/// Root estimates from gcd_root arranged to follow a caller-given structure.
/// Needs the same multiset of multiplicities; otherwise explicit starting
/// values are required.
inline CVector estimates_for_structure(const GcdRootResult& g, const MultiplicityStructure& l) {
  std::vector<int> a(g.structure.begin(), g.structure.end()), b(l.begin(), l.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b)
    throw std::invalid_argument("identified structure does not match the given one; supply starting roots explicitly");
  CVector out(l.size());
  std::vector<bool> used(g.structure.size(), false);
  for (std::size_t j = 0; j < l.size(); ++j)
    for (std::size_t i = 0; i < g.structure.size(); ++i)
      if (!used[i] && g.structure[i] == l[j]) {
        used[i] = true;
        out[j] = g.initial_roots[i];
        break;
      }
  return out;
}

/// gcd_root for structure and starting values, then pej_root with relative weights.
inline RootReport multroot(const Poly& p, const MultRootParams& params = {}) {
  RootReport rep;
  const Poly pm = detail::normalize_input(p, rep);
  const CVector a = pm.monic_tail();
  const RVector w = default_weights(a);

  const GcdRootResult g = gcd_root(pm, params.gcd);
  rep.multiplicities = g.structure;
  rep.stage_info.gcd_root_ran = true;
  rep.stage_info.gcd_root_backward_error = g.backward_error;
  rep.stage_info.gcd_root_roots_converged = g.roots_converged;
  if (!g.roots_converged) rep.warnings.push_back("base root solver hit its sweep limit");

  if (g.structure.all_simple()) {
    rep.roots = g.initial_roots;
    rep.backward_error = backward_error(a, g.structure, rep.roots, w);
    rep.condition = condition_number(g.structure, rep.roots, w);
    rep.forward_error_estimate = 2.0 * rep.condition * rep.backward_error;
    rep.converged = g.roots_converged;
    return rep;
  }
  detail::fill_from_pej(rep, pej_root(a, g.structure, g.initial_roots, w, params.pej));
  return rep;
}

/// pej_root alone on a caller-chosen structure and starting point.
inline RootReport pej_root_manual(const Poly& p, const MultiplicityStructure& l, std::span<const Complex> z0,
                                  const MultRootParams& params = {}) {
  RootReport rep;
  const Poly pm = detail::normalize_input(p, rep);
  if (l.degree() != pm.degree()) throw std::invalid_argument("pej_root_manual: multiplicities must sum to the degree");
  if (z0.size() != l.size()) throw std::invalid_argument("pej_root_manual: one starting root per multiplicity");
  const CVector a = pm.monic_tail();
  rep.multiplicities = l;
  detail::fill_from_pej(rep, pej_root(a, l, z0, default_weights(a), params.pej));
  return rep;
}

}  // namespace multroot
