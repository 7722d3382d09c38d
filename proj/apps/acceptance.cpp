// Runs every acceptance criterion and prints one PASS/FAIL line each; exit 1 if any fails.
#include "twaff/acceptance.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  twaff::AcceptanceOptions opt;
  std::vector<int> only;
  std::string json_out;
  app.add_option("--seed", opt.seed, "master seed")->capture_default_str();
  app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--only", only, "criterion ids to run")->check(CLI::Range(1, twaff::kCriterionCount));
  app.add_option("--json", json_out, "also write the full report to this file");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  twaff::Json report = twaff::Json::array();
  std::vector<int> ids = only;
  if (ids.empty())
    for (int i = 1; i <= twaff::kCriterionCount; ++i) ids.push_back(i);
  for (int id : ids) {
    const auto r = twaff::run_criterion(id, opt);
    std::cout << twaff::format_line(r) << std::endl;
    all = all && r.pass;
    report.push_back(twaff::to_json(r));
  }
  if (!json_out.empty()) std::ofstream(json_out) << report.dump(2) << '\n';
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
  return all ? 0 : 1;
}
