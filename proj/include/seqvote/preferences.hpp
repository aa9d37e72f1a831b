#pragma once

#include <compare>

#include "seqvote/balloting.hpp"
#include "seqvote/network.hpp"
#include "seqvote/rational.hpp"

namespace seqvote {

// Outcome levels stored as 2 (self), 1 (confirmed), 0 (unconfirmed). Any
// three-level utility orders outcomes the same way.
enum class OutcomeLevel : int { kUnconfirmed = 0, kConfirmed = 1, kSelf = 2 };

struct BallotAssessment {
  int f = 0;  // confirmed agents on the ballot
  int g = 0;  // unconfirmed agents on the ballot
  friend bool operator==(const BallotAssessment&,
                         const BallotAssessment&) = default;
};

// Lexicographic preference value (level, -g, f). Equivalent to comparing
// U_x(w) + eps^2 f - eps g for every 0 < eps < 1/(2n).
struct PrefKey {
  int level = 0;
  int neg_g = 0;
  int f = 0;

  friend bool operator==(const PrefKey&, const PrefKey&) = default;
  friend auto operator<=>(const PrefKey&, const PrefKey&) = default;
};

OutcomeLevel outcome_level(const ConfirmationNetwork& g, AgentId x, AgentId y);
BallotAssessment assess(const ConfirmationNetwork& g, AgentId x,
                        const Ballot& b);
PrefKey pref_key(const ConfirmationNetwork& g, AgentId x, const Ballot& b,
                 AgentId w);

// 1, 1/2 or 0 for the three outcome levels.
Rational outcome_utility(OutcomeLevel level);

// U_x(w) + eps^2 f - eps g in exact arithmetic. Throws InvalidInput unless
// 0 < eps < 1/(2n).
Rational exact_utility(const ConfirmationNetwork& g, AgentId x,
                       const Ballot& b, AgentId w, const Rational& eps);

// Same value from raw components; used by the naive solver and by tests
// that sweep (level, f, g) without building ballots.
Rational exact_utility(OutcomeLevel level, int f, int g, int n,
                       const Rational& eps);

}  // namespace seqvote
