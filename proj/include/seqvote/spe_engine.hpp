#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqvote/balloting.hpp"
#include "seqvote/network.hpp"

namespace seqvote {

// Thrown when a solve exceeds its node or time budget. Solves never return a
// truncated answer.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A node of the sequential game: `i` ballots have been cast and the next
// voter is voting_order[i]. Histories with equal (i, scores) have identical
// continuations.
struct SubgameState {
  int i = 0;
  ScoreVector scores;

  static SubgameState initial(const ConfirmationNetwork& g);
  // Applies ballots for voting_order[0..], one per entry of `history`.
  static SubgameState after(const ConfirmationNetwork& g,
                            const std::vector<Ballot>& history);

  friend bool operator==(const SubgameState&, const SubgameState&) = default;
};

struct SolverOptions {
  bool memoize = true;
  // Dead-agent normalization of memo keys, dominated-ballot elimination and
  // threshold cut-offs. Results are identical either way.
  bool prune = true;
  int threads = 1;
  std::uint64_t max_nodes = 0;  // 0 = unlimited
  double max_seconds = 0;       // 0 = unlimited
};

struct SolverStats {
  std::uint64_t nodes = 0;        // subgames expanded
  std::uint64_t cache_hits = 0;
  std::uint64_t transitions = 0;  // child subgames requested
  std::uint64_t pruned = 0;       // ballots skipped without solving
  std::uint64_t cache_entries = 0;
  double seconds = 0;
};

struct Witness {
  AgentId winner = 0;
  Ballot ballot;  // first canonical root ballot sustaining `winner`
};

struct AchievableSet {
  AgentMask winners = 0;
  std::vector<Witness> witnesses;  // only for non-terminal roots
  SolverStats stats;

  std::vector<AgentId> agents() const { return mask_to_agents(winners); }
  bool contains(AgentId a) const { return (winners & agent_bit(a)) != 0; }
  int size() const;
};

// The agents elected in at least one subgame perfect equilibrium.
AchievableSet achievable_winners(const ConfirmationNetwork& g, const Rule& rule,
                                 const SolverOptions& options = {});
AchievableSet achievable_winners_from(const ConfirmationNetwork& g,
                                      const Rule& rule,
                                      const SubgameState& state,
                                      const SolverOptions& options = {});

// Largest instance the naive solver accepts: legal_ballot_count^n leaves.
inline constexpr std::uint64_t kNaiveLeafLimit = 300000;

// Reference solver: plain recursion over voting histories, utilities in
// exact rational arithmetic, no memoization and no pruning. Throws
// InvalidInput above kNaiveLeafLimit leaves.
AchievableSet naive_achievable_winners(const ConfirmationNetwork& g,
                                       const Rule& rule);

struct Policy {
  enum class Kind { kCanonical, kBiasToward };
  Kind kind = Kind::kCanonical;
  AgentId target = 0;

  static Policy canonical() { return {}; }
  static Policy bias_toward(AgentId t) { return {Kind::kBiasToward, t}; }
  // "canonical" or "bias:<agent>" where <agent> is a name or an index.
  static Policy parse(const std::string& text, const ConfirmationNetwork& g);
  std::string to_string(const ConfirmationNetwork& g) const;
};

struct PolicyOutcome {
  std::vector<Ballot> path;  // on-path ballots in voting order
  AgentId winner = 0;
  SolverStats stats;
};

// Single backward induction that picks, at every subgame, one best ballot
// according to `policy`. The induced profile is an SPE.
PolicyOutcome policy_spe(const ConfirmationNetwork& g, const Rule& rule,
                         const Policy& policy,
                         const SolverOptions& options = {});

// s(a) plus the number of voters still to vote who confirm `a`.
int potential(const SubgameState& state, const ConfirmationNetwork& g,
              AgentId a);

struct LowOutdegreeReport {
  AgentId winner = 0;
  int achievable = 0;      // size of the achievable set of the subgame
  int max_potential = 0;   // P
  int winner_potential = 0;
  std::vector<AgentId> top_agents;  // agents with potential P
  bool unique = false;
  bool bound_holds = false;  // P - rho(w) <= [(w,m) in E'] for every top m
  bool pass = false;
  std::string detail;
};

// Solves a subgame in which every remaining voter confirms at most one
// agent, and checks uniqueness and the potential bound. Throws InvalidInput
// if some remaining voter has out-degree above one.
LowOutdegreeReport verify_low_outdegree_subgame(
    const SubgameState& state, const ConfirmationNetwork& g, const Rule& rule,
    const SolverOptions& options = {});

}  // namespace seqvote
