#pragma once

// The acceptance list: eleven numbered checks, each reported as one pass/fail line.

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace sumset {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // deterministic; no timings
  double seconds = 0;
};

struct AcceptanceOptions {
  std::set<int> only;       // empty runs all
  std::string out_dir;      // artifacts go here when nonempty
  std::uint64_t seed = 20240607;
  std::function<void(const CriterionResult&)> on_result;  // called as each line completes
};

/// Criteria 1..10 as selected.
std::vector<CriterionResult> run_criteria(const AcceptanceOptions& options);

/// CSV and JSON of the results, without timings.
std::string acceptance_csv(const std::vector<CriterionResult>& results);
std::string acceptance_json(const std::vector<CriterionResult>& results);

/// Criteria 1..10, then criterion 11: a second run must give byte-identical artifacts.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "PASS  3  name: detail (1.2 s)".
std::string format_result_line(const CriterionResult& r);

}  // namespace sumset
