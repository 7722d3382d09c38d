#pragma once

#include "twaff/json_io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace twaff {

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  int threads = 1;
};

/// pass requires both the numerical tolerance and the runtime budget.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;
  double seconds = 0;
  double budget_seconds = 0;
  Json details;
};

constexpr int kCriterionCount = 11;

/// Independent stream per criterion, derived from the master seed.
std::uint64_t criterion_seed(std::uint64_t master, int id);

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& ids = {});

/// "PASS  6 heat-kernel route: ..." with the runtime.
std::string format_line(const CriterionResult& r);
Json to_json(const CriterionResult& r, bool include_timing = true);

}  // namespace twaff
