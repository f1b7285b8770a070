// Acceptance runner: one pass/fail line per criterion; exit status 1 if any fails.
#include <CLI11.hpp>

#include <iostream>

#include "hybridsim/cli/acceptance.hpp"
#include "hybridsim/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hybridsim acceptance criteria"};
  std::string filter;
  bool json_out = false;
  app.add_option("--filter", filter, "criterion ids, e.g. 3 or 1,2,c12");
  app.add_flag("--json", json_out, "also print the reports as JSON");
  CLI11_PARSE(app, argc, argv);

  using namespace hybridsim::cli;
  std::vector<int> ids;
  try {
    ids = parse_criterion_filter(filter);
  } catch (const hybridsim::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  bool all = true;
  json reports = json::array();
  for (int id : ids) {
    const auto r = run_criterion(id);
    std::cout << format_report_line(r) << std::endl;
    for (const auto& n : r.notes) std::cout << "    " << n << '\n';
    reports.push_back(to_json(r));
    all = all && r.passed;
  }
  if (json_out) std::cout << reports.dump(2) << '\n';
  return all ? 0 : 1;
}
