#include <iostream>

#include "CLI11.hpp"
#include "multroot/cli.hpp"

int main(int argc, char** argv) {
  multroot::CliConfig cfg;
  std::string structure, z0;

  CLI::App app{"Multiple roots of polynomials with inexact coefficients"};
  app.add_option("input", cfg.input, "coefficient file, one per line, leading first ('re' or 're im')")->required();
  app.add_option("--mode", cfg.mode, "multroot | gcdroot | pejroot")
      ->check(CLI::IsMember({"multroot", "gcdroot", "pejroot"}))
      ->capture_default_str();
  app.add_option("--theta", cfg.theta, "zero singular value threshold")->capture_default_str();
  app.add_option("--rho", cfg.varrho, "initial residual tolerance")->capture_default_str();
  app.add_option("--phi", cfg.phi, "residual tolerance growth factor")->capture_default_str();
  app.add_option("--tau", cfg.tau, "Gauss-Newton stopping tolerance")->capture_default_str();
  app.add_option("--structure", structure, "multiplicities a,b,c (pejroot mode)");
  app.add_option("--z0", z0, "starting roots re:im,... (pejroot mode)");
  app.add_flag("--json", cfg.json, "machine-readable output");
  app.add_option("--digits", cfg.digits, "printed digits")->check(CLI::Range(1, 17))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (!structure.empty()) cfg.structure = multroot::parse_structure(structure);
    if (!z0.empty()) cfg.z0 = multroot::parse_z0(z0);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return multroot::run(cfg, std::cout, std::cerr);
}
