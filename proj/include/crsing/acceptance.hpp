#pragma once

#include <string>
#include <vector>

#include "crsing/locus.hpp"

namespace crsing {

struct AcceptanceOptions {
  // Multiplies every pinned numeric tolerance; verify passes tol / 1e-9.
  double tol_scale = 1.0;
  int seeds_per_axis = 12;
  Convention convention = Convention::Lai;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;   // summary of what was measured
  std::vector<std::string> failures; // first few individual failures
  double seconds = 0.0;               // wall time; kept out of detail so JSON stays deterministic
};

// Runs acceptance criteria 1-10 in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &opt = {});
CriterionResult run_criterion(int id, const AcceptanceOptions &opt = {});

std::string format_result_line(const CriterionResult &r);

} // namespace crsing
