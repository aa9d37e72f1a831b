#pragma once

#include <optional>
#include <string>
#include <vector>

#include "seqvote/network.hpp"

namespace seqvote {

enum class RuleKind { kPlurality, kApproval, kKApproval };

// Plurality is 1-approval and approval is (n-1)-approval; `cap_for` maps
// every rule onto that common form.
struct Rule {
  RuleKind kind = RuleKind::kPlurality;
  std::optional<int> cap;  // k_approval only

  static Rule plurality() { return {RuleKind::kPlurality, std::nullopt}; }
  static Rule approval() { return {RuleKind::kApproval, std::nullopt}; }
  // Throws InvalidInput when k < 1.
  static Rule k_approval(int k);

  // Maximum ballot size for a network of n agents.
  int cap_for(int n) const;
  // "plurality", "approval", or "k-approval:<k>".
  std::string to_string() const;
  // Accepts the CLI spellings: plurality | approval | k-approval (with k).
  static Rule parse(const std::string& name, std::optional<int> k = {});

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Ballot {
  AgentMask approved = 0;

  int size() const;
  bool contains(AgentId a) const { return (approved & agent_bit(a)) != 0; }
  std::vector<AgentId> members() const { return mask_to_agents(approved); }

  friend bool operator==(const Ballot&, const Ballot&) = default;
};

using ScoreVector = std::vector<int>;

bool is_legal(const Rule& rule, AgentId voter, int n, const Ballot& b);

// Every legal ballot for `voter`, ascending by size and then
// lexicographically by sorted member indices. Starts with abstention.
std::vector<Ballot> legal_ballots(const Rule& rule, AgentId voter, int n);

// Number of legal ballots, sum_{j<=cap} C(n-1, j).
std::uint64_t legal_ballot_count(const Rule& rule, int n);

ScoreVector apply_ballot(ScoreVector s, const Ballot& b);

// Max scorer, ties resolved by earliest position in `tiebreak_order`.
AgentId winner(const ScoreVector& s, const std::vector<AgentId>& tiebreak_order);

// The canonical truthful ballot: the whole confirmation set under approval,
// otherwise the `cap` lowest-index confirmed agents (empty if none).
Ballot truthful_ballot(const ConfirmationNetwork& g, const Rule& rule,
                       AgentId voter);

// True when `b` is in the truthful class: only confirmed agents, and as many
// of them as the cap allows.
bool is_truthful_class(const ConfirmationNetwork& g, const Rule& rule,
                       AgentId voter, const Ballot& b);

}  // namespace seqvote
