#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "goest/sweep.hpp"

namespace goest {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions {
  /// Directory for the per-sweep CSV files (created if missing).
  std::filesystem::path out_dir = "acceptance_out";
  std::uint64_t seed = 20240611;
  int random_draws = 20;
};

/// Every builtin scenario under both enrichments, keyed "<name>/<h|p>".
std::map<std::string, SweepReport> run_all_sweeps();

/// Runs the full acceptance suite and returns one result per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// One "PASS"/"FAIL" line per criterion plus a summary; returns the number
/// of failed criteria.
int print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace goest
