#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqvote/balloting.hpp"
#include "seqvote/network.hpp"
#include "seqvote/rational.hpp"

namespace seqvote {

// What the solver is expected to report for a catalog instance under one
// rule. Agents are referred to by display name.
struct Expectation {
  Rule rule;
  std::optional<std::vector<std::string>> exact_winners;
  std::vector<std::string> must_contain;
  std::optional<int> gap;  // additive gap of the best winner
  std::optional<std::string> ratio_agent;
  std::optional<Rational> ratio;
  bool heavy = false;  // needs a long budget; skipped by default runs
};

struct InstanceSpec {
  std::string name;  // catalog identifier
  int k = 2;         // family parameter, where applicable
  std::vector<Expectation> expected;
};

// Catalog names: example1, example2, g_k, fig5, plurality_chain,
// kapproval_chain, h_k.
std::vector<std::string> catalog_names();

// Builds a catalog network, checks its structural degree targets, and fills
// `expected` (when given) with the catalog expectations. Throws InvalidInput
// on an unknown name or an invalid k, and std::logic_error when a generated
// network misses its degree targets.
ConfirmationNetwork gen_paper_instance(const InstanceSpec& spec,
                                       std::vector<Expectation>* expected =
                                           nullptr);

struct RandomSpec {
  int n = 1;
  double p = 0.0;
  std::optional<int> max_out;
  std::uint64_t seed = 0;
};

// Each ordered pair (a, b), a != b, visited a-major then b ascending, is kept
// when the next 53-bit draw of mt19937_64(seed) falls below p. Agents whose
// out-degree exceeds max_out keep a uniform subset chosen by a partial
// Fisher-Yates shuffle driven by the same stream.
ConfirmationNetwork gen_random(const RandomSpec& spec);

}  // namespace seqvote
