#pragma once

#include <string>
#include <vector>

#include "hybridsim/cli/config.hpp"

// The numbered acceptance criteria as runnable checks. Shared by
// `hybridsim validate` and the acceptance binary.
namespace hybridsim::cli {

struct AcceptanceCheck {
  std::string name;
  double value = 0.0;
  double lo = 0.0;  // pass iff lo <= value <= hi
  double hi = 0.0;
  bool passed = false;
};

struct CriterionInfo {
  int id = 0;
  std::string title;
  double budget_s = 0.0;
};

struct CriterionReport {
  CriterionInfo info;
  std::vector<AcceptanceCheck> checks;  // includes the runtime budget
  std::vector<std::string> notes;       // measured context that is not a pass/fail
  double runtime_s = 0.0;
  bool passed = false;
  std::string error;  // set when the run threw
};

const std::vector<CriterionInfo>& acceptance_criteria();

// Device-derived criteria (1, 2, 12) read the device keys of `device`; the
// others use the quoted parameter sets. Exceptions become a failed report.
CriterionReport run_criterion(int id, const Config& device = Config());

// "a,b,c" -> ids; empty: all. Throws ConfigError on unknown ids.
std::vector<int> parse_criterion_filter(const std::string& filter);

// One line: "c01 PASS Device parameters (0.02 s / 1 s): check=value [lo, hi] ..."
std::string format_report_line(const CriterionReport& r);
json to_json(const CriterionReport& r);

}  // namespace hybridsim::cli
