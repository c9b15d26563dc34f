#pragma once

#include "gauge_mpv/symmetry.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace gauge_mpv {

struct RunConfig {
  // verify, construct, canonical-form, decompose-rep or example.
  std::string command;
  // Example name (d10, su2) or construction kind (elementary, wigner-eckart, gauge, couple, su2).
  std::string target;
  std::string bundle;
  // Built-in catalog name or path to a catalog JSON file.
  std::string group;
  // matter-local, matter-global, gauge-local, bab, or gauss for bundles carrying generators.
  std::string setting = "bab";
  std::string tensor = "A";  // canonical-form: A, B, AB or BA
  std::string rep = "theta"; // decompose-rep
  int n_max = 3;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int samples = 100;
  bool json = false;
  std::string out;

  // Construction parameters.
  std::string irrep_l, irrep_r, irrep_j;
  std::vector<std::string> labels;
  std::vector<std::string> x_labels, y_labels;
  int twice_r = 1;
  int twice_l = 1;
  bool duplicate = false;
};

// Exit status: 0 pass or success, 1 failed symmetry check, 2 input error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Summary lines, then "PASS" or one table row per failure; residuals as %.2e.
std::string report_render(const SymmetryReport& report);

// Parses argv into a RunConfig and runs it; usage errors exit with 2.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gauge_mpv
