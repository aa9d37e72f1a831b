#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "seqvote/balloting.hpp"
#include "seqvote/families.hpp"
#include "seqvote/network.hpp"
#include "seqvote/rational.hpp"
#include "seqvote/spe_engine.hpp"

namespace seqvote {

struct WinnerMetrics {
  AgentId agent = 0;
  int popularity = 0;  // d(w)
  int max_in = 0;      // max in-degree once w's out-edges are removed
  int gap = 0;
  ExtRational ratio;
};

struct InstanceMetrics {
  std::vector<AgentId> winners;
  std::vector<WinnerMetrics> per_winner;
  int gap = 0;  // best winner
  ExtRational r_min;
  ExtRational r_max;
};

// Metrics for an already solved instance.
InstanceMetrics metrics_from(const ConfirmationNetwork& g,
                             const AchievableSet& w);
// Solves and measures. Throws BudgetExceeded.
InstanceMetrics metrics_of(const ConfirmationNetwork& g, const Rule& rule,
                           const SolverOptions& options = {});

// Enough information to regenerate an instance.
struct InstanceDescriptor {
  enum class Kind { kCatalog, kRandom, kGraph };
  Kind kind = Kind::kCatalog;
  std::string name;  // catalog
  int k = 2;         // catalog
  RandomSpec random;
  std::optional<ConfirmationNetwork> graph;  // inline graph

  static InstanceDescriptor catalog(std::string name, int k = 2);
  static InstanceDescriptor from_random(const RandomSpec& spec);
  static InstanceDescriptor inline_graph(ConfirmationNetwork g);

  ConfirmationNetwork materialize() const;
  std::string label() const;
  nlohmann::json to_json() const;
  static InstanceDescriptor from_json(const nlohmann::json& doc);
};

struct PathRecord {
  std::string policy;
  AgentId winner = 0;
  std::vector<Ballot> path;
};

enum class RecordStatus { kOk, kBudgetExceeded, kError };

// One solved (or failed) instance. Everything except `stats` is a pure
// function of (instance, rule).
struct RunRecord {
  static constexpr int kVersion = 1;
  InstanceDescriptor instance;
  Rule rule;
  RecordStatus status = RecordStatus::kOk;
  std::string error;
  InstanceMetrics metrics;
  std::vector<PathRecord> paths;
  // Hard invariant checks; any false entry is a violation.
  std::map<std::string, bool> verdicts;
  // Soft checks: false is a flagged finding, not a violation.
  std::map<std::string, bool> findings;
  SolverStats stats;
};

struct BatchOptions {
  SolverOptions solver;
  // Solve batch items concurrently on this many workers.
  int threads = 1;
  // Extract the canonical SPE path, and for capped rules the path biased
  // toward a most popular agent.
  bool policy_paths = true;
};

// The hard and soft invariant checks for one solved instance.
void check_invariants(const ConfirmationNetwork& g, RunRecord& record);

RunRecord run_one(const InstanceDescriptor& instance, const Rule& rule,
                  const BatchOptions& options);
// One record per spec, in input order. Failures are recorded, never thrown.
std::vector<RunRecord> run_batch(const std::vector<InstanceDescriptor>& specs,
                                 const Rule& rule,
                                 const BatchOptions& options);

// JSONL line form. `with_stats = false` drops the solver statistics so that
// records from different runs compare byte for byte.
nlohmann::json record_to_json(const RunRecord& r, bool with_stats = true);
// Throws InvalidInput on a malformed record or unknown version.
RunRecord record_from_json(const nlohmann::json& doc);

struct RuleSummary {
  std::string rule;
  int records = 0;
  int ok = 0;
  int budget_exceeded = 0;
  int errors = 0;
  int violations = 0;
  int findings = 0;
  std::optional<ExtRational> max_r_max;
  std::map<int, int> gap_histogram;
  double p50_seconds = 0;
  double p90_seconds = 0;
  double max_seconds = 0;
};

std::vector<RuleSummary> summarize(const std::vector<RunRecord>& records);
std::string summary_csv(const std::vector<RuleSummary>& rows);

}  // namespace seqvote
