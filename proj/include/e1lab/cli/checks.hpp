#pragma once

#include <string>
#include <vector>

namespace e1lab::cli {

struct CheckRow {
  std::string suite;
  std::string name;
  double value;
  std::string cmp;  // "<=" or ">="
  double threshold;
  bool pass;
};

const std::vector<std::string>& suite_names();

// Runs one suite. tol_scale multiplies every "<=" threshold; order
// thresholds are not scaled. Throws InvalidArgument on an unknown name.
std::vector<CheckRow> run_suite(const std::string& name, double tol_scale = 1.0);

}  // namespace e1lab::cli
