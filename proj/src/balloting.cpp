#include "seqvote/balloting.hpp"

#include <algorithm>
#include <bit>

namespace seqvote {

Rule Rule::k_approval(int k) {
  if (k < 1) throw InvalidInput("k-approval requires k >= 1");
  return {RuleKind::kKApproval, k};
}

int Rule::cap_for(int n) const {
  switch (kind) {
    case RuleKind::kPlurality:
      return std::min(1, n - 1);
    case RuleKind::kApproval:
      return n - 1;
    case RuleKind::kKApproval:
      if (!cap || *cap < 1) throw InvalidInput("k-approval requires k >= 1");
      return std::min(*cap, n - 1);
  }
  return 0;
}

std::string Rule::to_string() const {
  switch (kind) {
    case RuleKind::kPlurality:
      return "plurality";
    case RuleKind::kApproval:
      return "approval";
    case RuleKind::kKApproval:
      return "k-approval:" + std::to_string(cap.value_or(0));
  }
  return "?";
}

Rule Rule::parse(const std::string& name, std::optional<int> k) {
  if (name == "plurality") return plurality();
  if (name == "approval") return approval();
  if (name == "k-approval" || name == "k_approval") {
    if (!k) throw InvalidInput("k-approval requires --k");
    return k_approval(*k);
  }
  if (name.rfind("k-approval:", 0) == 0) {
    try {
      return k_approval(std::stoi(name.substr(11)));
    } catch (const std::logic_error&) {
      throw InvalidInput("malformed rule '" + name + "'");
    }
  }
  throw InvalidInput("unknown rule '" + name + "'");
}

int Ballot::size() const { return std::popcount(approved); }

bool is_legal(const Rule& rule, AgentId voter, int n, const Ballot& b) {
  if (b.contains(voter)) return false;
  const AgentMask all = n == kMaxAgents ? ~AgentMask{0} : agent_bit(n) - 1;
  if ((b.approved & ~all) != 0) return false;
  return b.size() <= rule.cap_for(n);
}

std::vector<Ballot> legal_ballots(const Rule& rule, AgentId voter, int n) {
  if (n < 1) throw InvalidInput("legal_ballots requires n >= 1");
  if (voter < 0 || voter >= n) {
    throw InvalidInput("invalid voter " + std::to_string(voter));
  }
  const int cap = rule.cap_for(n);
  std::vector<AgentId> others;
  for (AgentId a = 0; a < n; ++a) {
    if (a != voter) others.push_back(a);
  }
  std::vector<Ballot> out;
  out.push_back(Ballot{});
  // Combinations of each size in lexicographic order of index vectors.
  const int m = static_cast<int>(others.size());
  for (int size = 1; size <= cap; ++size) {
    std::vector<int> idx(size);
    for (int j = 0; j < size; ++j) idx[j] = j;
    while (true) {
      AgentMask mask = 0;
      for (int j : idx) mask |= agent_bit(others[j]);
      out.push_back(Ballot{mask});
      int j = size - 1;
      while (j >= 0 && idx[j] == m - size + j) --j;
      if (j < 0) break;
      ++idx[j];
      for (int t = j + 1; t < size; ++t) idx[t] = idx[t - 1] + 1;
    }
  }
  return out;
}

std::uint64_t legal_ballot_count(const Rule& rule, int n) {
  const int cap = rule.cap_for(n);
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n-1, j)
  for (int j = 0; j <= cap; ++j) {
    total += binom;
    binom = binom * static_cast<std::uint64_t>(n - 1 - j) / (j + 1);
  }
  return total;
}

ScoreVector apply_ballot(ScoreVector s, const Ballot& b) {
  for (AgentId a : b.members()) ++s.at(a);
  return s;
}

AgentId winner(const ScoreVector& s, const std::vector<AgentId>& tiebreak_order) {
  AgentId best = tiebreak_order.at(0);
  for (AgentId a : tiebreak_order) {
    if (s.at(a) > s.at(best)) best = a;
  }
  return best;
}

Ballot truthful_ballot(const ConfirmationNetwork& g, const Rule& rule,
                       AgentId voter) {
  const int cap = rule.cap_for(g.size());
  AgentMask out = g.out_mask(voter);
  AgentMask chosen = 0;
  for (int taken = 0; out != 0 && taken < cap; ++taken) {
    AgentMask low = out & (~out + 1);
    chosen |= low;
    out &= out - 1;
  }
  return Ballot{chosen};
}

bool is_truthful_class(const ConfirmationNetwork& g, const Rule& rule,
                       AgentId voter, const Ballot& b) {
  const AgentMask confirmed = g.out_mask(voter);
  if ((b.approved & ~confirmed) != 0) return false;
  const int want = std::min(rule.cap_for(g.size()), std::popcount(confirmed));
  return b.size() == want;
}

}  // namespace seqvote
