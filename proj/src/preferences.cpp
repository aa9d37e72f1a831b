#include "seqvote/preferences.hpp"

#include <bit>

namespace seqvote {

OutcomeLevel outcome_level(const ConfirmationNetwork& g, AgentId x,
                           AgentId y) {
  if (x == y) {
    g.check_agent(x);
    return OutcomeLevel::kSelf;
  }
  return g.has_edge(x, y) ? OutcomeLevel::kConfirmed
                          : OutcomeLevel::kUnconfirmed;
}

BallotAssessment assess(const ConfirmationNetwork& g, AgentId x,
                        const Ballot& b) {
  const AgentMask confirmed = g.out_mask(x);
  return {std::popcount(b.approved & confirmed),
          std::popcount(b.approved & ~confirmed)};
}

PrefKey pref_key(const ConfirmationNetwork& g, AgentId x, const Ballot& b,
                 AgentId w) {
  const BallotAssessment a = assess(g, x, b);
  return {static_cast<int>(outcome_level(g, x, w)), -a.g, a.f};
}

Rational outcome_utility(OutcomeLevel level) {
  switch (level) {
    case OutcomeLevel::kSelf:
      return Rational(1);
    case OutcomeLevel::kConfirmed:
      return Rational(1, 2);
    case OutcomeLevel::kUnconfirmed:
      return Rational(0);
  }
  return Rational(0);
}

Rational exact_utility(OutcomeLevel level, int f, int g, int n,
                       const Rational& eps) {
  if (!(eps > Rational(0)) || !(eps < Rational(1, 2 * n))) {
    throw InvalidInput("epsilon " + eps.to_string() +
                       " outside (0, 1/(2n)) for n=" + std::to_string(n));
  }
  return outcome_utility(level) + eps * eps * Rational(f) - eps * Rational(g);
}

Rational exact_utility(const ConfirmationNetwork& g, AgentId x,
                       const Ballot& b, AgentId w, const Rational& eps) {
  const BallotAssessment a = assess(g, x, b);
  return exact_utility(outcome_level(g, x, w), a.f, a.g, g.size(), eps);
}

}  // namespace seqvote
