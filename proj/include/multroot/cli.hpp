#pragma once

// Batch front end: coefficient file parsing, option values, text and JSON
// reports, and the run() driver behind the multroot executable.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "multroot/pipeline.hpp"

namespace multroot {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct CliConfig {
  std::string input;
  std::string mode = "multroot";  // multroot | gcdroot | pejroot
  double theta = 1e-8;
  double varrho = 1e-10;
  double phi = 100.0;
  double tau = 1e-10;
  std::optional<std::vector<int>> structure;
  std::optional<CVector> z0;
  bool json = false;
  int digits = 15;
};

/// One coefficient per line, leading first: "re" or "re im". Blank lines and
/// '#' comments are skipped.
inline Poly parse_input(std::istream& in) {
  CVector c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() > 2) throw ParseError("line " + std::to_string(lineno) + ": expected 're' or 're im'", lineno);
    double part[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < tok.size(); ++i) {
      std::size_t used = 0;
      try {
        part[i] = std::stod(tok[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok[i].size())
        throw ParseError("line " + std::to_string(lineno) + ": not a number: '" + tok[i] + "'", lineno);
    }
    c.emplace_back(part[0], part[1]);
  }
  if (c.empty()) throw ParseError("no coefficients found", lineno);
  return Poly(std::move(c));
}

inline Poly parse_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_input(in);
}

/// "a,b,c" -> {a, b, c}
inline std::vector<int> parse_structure(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 1) throw std::invalid_argument("bad multiplicity '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty structure");
  return out;
}

/// "re:im,re:im,..." with ":im" optional.
inline CVector parse_z0(const std::string& s) {
  CVector out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto colon = item.find(':');
    const std::string parts[2] = {item.substr(0, colon), colon == std::string::npos ? "0" : item.substr(colon + 1)};
    double v[2];
    for (int i = 0; i < 2; ++i) {
      std::size_t used = 0;
      try {
        v[i] = std::stod(parts[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != parts[i].size()) throw std::invalid_argument("bad complex value '" + item + "'");
    }
    out.emplace_back(v[0], v[1]);
  }
  if (out.empty()) throw std::invalid_argument("empty root list");
  return out;
}

inline nlohmann::json report_to_json(const RootReport& r) {
  nlohmann::json j;
  j["roots"] = nlohmann::json::array();
  for (std::size_t i = 0; i < r.roots.size(); ++i)
    j["roots"].push_back({{"re", r.roots[i].real()}, {"im", r.roots[i].imag()}, {"multiplicity", r.multiplicities[i]}});
  j["backward_error"] = r.backward_error;
  j["condition"] = r.condition;
  j["forward_error_estimate"] = r.forward_error_estimate;
  const StageInfo& s = r.stage_info;
  j["stage_info"] = {
      {"converged", r.converged},
      {"gcd_root_ran", s.gcd_root_ran},
      {"gcd_root_backward_error", s.gcd_root_backward_error},
      {"gcd_root_roots_converged", s.gcd_root_roots_converged},
      {"pej_root_ran", s.pej_root_ran},
      {"pej_root_iterations", s.pej_root_iterations},
      {"pej_root_converged", s.pej_root_converged},
      {"normalization", {{"re", s.normalization.real()}, {"im", s.normalization.imag()}}},
  };
  j["warnings"] = r.warnings;
  return j;
}

/// Round-trip a json report. Multiplicities come back from the root entries.
inline RootReport report_from_json(const nlohmann::json& j) {
  RootReport r;
  std::vector<int> l;
  for (const auto& e : j.at("roots")) {
    r.roots.emplace_back(e.at("re").get<double>(), e.at("im").get<double>());
    l.push_back(e.at("multiplicity").get<int>());
  }
  r.multiplicities = MultiplicityStructure(std::move(l));
  r.backward_error = j.at("backward_error").get<double>();
  r.condition = j.at("condition").get<double>();
  r.forward_error_estimate = j.at("forward_error_estimate").get<double>();
  const auto& s = j.at("stage_info");
  r.converged = s.at("converged").get<bool>();
  r.stage_info.gcd_root_ran = s.at("gcd_root_ran").get<bool>();
  r.stage_info.gcd_root_backward_error = s.at("gcd_root_backward_error").get<double>();
  r.stage_info.gcd_root_roots_converged = s.at("gcd_root_roots_converged").get<bool>();
  r.stage_info.pej_root_ran = s.at("pej_root_ran").get<bool>();
  r.stage_info.pej_root_iterations = s.at("pej_root_iterations").get<int>();
  r.stage_info.pej_root_converged = s.at("pej_root_converged").get<bool>();
  r.stage_info.normalization = {s.at("normalization").at("re").get<double>(), s.at("normalization").at("im").get<double>()};
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

namespace detail {

inline std::string fmt_sci(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", std::max(1, digits) - 1, x);
  return buf;
}

inline std::string fmt_root(Complex z, int digits) {
  char buf[128];
  const int d = std::max(1, digits);
  std::snprintf(buf, sizeof buf, "% .*f %c %.*f i", d, z.real(), z.imag() < 0 ? '-' : '+', d, std::abs(z.imag()));
  return buf;
}

}  // namespace detail

inline void print_text(std::ostream& out, const RootReport& r, int digits = 15) {
  out << " THE STRUCTURE PRESERVING CONDITION NUMBER:  " << detail::fmt_sci(r.condition, 6) << "\n"
      << " THE BACKWARD ERROR:                         " << detail::fmt_sci(r.backward_error, 3) << "\n"
      << " THE ESTIMATED FORWARD ROOT ERROR:           " << detail::fmt_sci(r.forward_error_estimate, 3) << "\n\n"
      << " computed roots" << std::string(static_cast<std::size_t>(2 * digits + 6), ' ') << "multiplicities\n\n";
  for (std::size_t i = 0; i < r.roots.size(); ++i)
    out << detail::fmt_root(r.roots[i], digits) << "    " << std::setw(6) << r.multiplicities[i] << "\n";
  for (const auto& w : r.warnings) out << "\n warning: " << w;
  if (!r.warnings.empty()) out << "\n";
}

namespace detail {

inline RootReport gcdroot_report(const Poly& p, const GcdRootParams& prm) {
  RootReport rep;
  const Poly pm = normalize_input(p, rep);
  const GcdRootResult g = gcd_root(pm, prm);
  const CVector a = pm.monic_tail();
  const RVector w = default_weights(a);
  rep.roots = g.initial_roots;
  rep.multiplicities = g.structure;
  rep.backward_error = g.backward_error;
  rep.condition = condition_number(g.structure, g.initial_roots, w);
  rep.forward_error_estimate = 2.0 * rep.condition * rep.backward_error;
  rep.converged = g.roots_converged;
  rep.stage_info.gcd_root_ran = true;
  rep.stage_info.gcd_root_backward_error = g.backward_error;
  rep.stage_info.gcd_root_roots_converged = g.roots_converged;
  if (!g.roots_converged) rep.warnings.push_back("base root solver hit its sweep limit");
  return rep;
}

}  // namespace detail

/// Runs one configuration. Exit code 0 on converged success, 2 when the
/// result carries a non-convergence warning, 1 on any error.
inline int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Poly p = parse_input(cfg.input);
    MultRootParams prm;
    prm.gcd = {cfg.theta, cfg.varrho, cfg.phi};
    prm.pej.tau = cfg.tau;

    RootReport rep;
    if (cfg.mode == "multroot") {
      rep = multroot::multroot(p, prm);
    } else if (cfg.mode == "gcdroot") {
      rep = detail::gcdroot_report(p, prm.gcd);
    } else if (cfg.mode == "pejroot") {
      if (!cfg.structure) throw std::invalid_argument("pejroot mode needs --structure");
      const MultiplicityStructure l(*cfg.structure);
      CVector z0;
      if (cfg.z0) {
        z0 = *cfg.z0;
      } else {
        z0 = estimates_for_structure(gcd_root(p.monic(), prm.gcd), l);
      }
      rep = pej_root_manual(p, l, z0, prm);
    } else {
      throw std::invalid_argument("unknown mode '" + cfg.mode + "'");
    }

    if (cfg.json)
      out << report_to_json(rep).dump(2) << "\n";
    else
      print_text(out, rep, cfg.digits);
    return rep.converged ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace multroot
