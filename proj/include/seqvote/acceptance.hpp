#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "seqvote/experiments.hpp"

namespace seqvote {

struct CriterionResult {
  std::string id;     // e.g. "1c", "4"
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  // Criterion ids to run; empty runs all of them.
  std::vector<std::string> only;
  // Worker count for the baseline runs. The determinism criterion always
  // compares 1 and 4 workers.
  int threads = 1;
  // Progress lines; may be null.
  std::ostream* log = nullptr;
};

std::vector<std::string> acceptance_ids();

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

// Seeded random ensembles used by the acceptance suites.
std::vector<InstanceDescriptor> random_suite(int count, int n_min, int n_max,
                                             std::optional<int> max_out,
                                             std::uint64_t base_seed);

// Evaluates one catalog expectation against a solved instance.
bool check_expectation(const ConfirmationNetwork& g, const Expectation& e,
                       const InstanceMetrics& m, std::string* detail);

}  // namespace seqvote
