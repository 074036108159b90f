#pragma once

#include <string>
#include <vector>

namespace su11::cli {

struct OracleCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double reference = 0.0;
  // Positive when passing: tolerance minus observed error, or the slack of an
  // inequality.
  double margin = 0.0;
};

/// Dual-route checks of the analytic pipeline against the Fock-space oracle.
std::vector<OracleCheck> run_oracle_suite(int n_max);

}  // namespace su11::cli
