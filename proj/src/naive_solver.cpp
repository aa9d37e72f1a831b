#include <bit>
#include <cmath>

#include "seqvote/preferences.hpp"
#include "seqvote/spe_engine.hpp"

namespace seqvote {
namespace {

// Literal extensive-form recursion over full voting histories.
class NaiveGame {
 public:
  NaiveGame(const ConfirmationNetwork& g, const Rule& rule)
      : g_(g), n_(g.size()), eps_(1, 4 * g.size()) {
    for (int i = 0; i < n_; ++i) {
      const AgentId voter = g.voting_order()[i];
      std::vector<Ballot> options;
      for (AgentMask m = 0; m < (AgentMask{1} << n_); ++m) {
        if (is_legal(rule, voter, n_, Ballot{m})) options.push_back(Ballot{m});
      }
      ballots_.push_back(std::move(options));
    }
  }

  AgentMask solve(std::vector<Ballot>& history) {
    const int i = static_cast<int>(history.size());
    if (i == n_) return agent_bit(tally(history));
    const AgentId x = g_.voting_order()[i];
    const auto& options = ballots_[i];
    std::vector<AgentMask> outcomes;
    for (const Ballot& b : options) {
      history.push_back(b);
      outcomes.push_back(solve(history));
      history.pop_back();
    }
    AgentMask result = 0;
    for (std::size_t k = 0; k < options.size(); ++k) {
      for (AgentId w : mask_to_agents(outcomes[k])) {
        const Rational u = exact_utility(g_, x, options[k], w, eps_);
        // w is sustained via options[k] if every deviation has some
        // continuation equilibrium that is no better for x.
        bool sustained = true;
        for (std::size_t j = 0; j < options.size() && sustained; ++j) {
          bool punished = false;
          for (AgentId z : mask_to_agents(outcomes[j])) {
            if (exact_utility(g_, x, options[j], z, eps_) <= u) {
              punished = true;
              break;
            }
          }
          sustained = punished;
        }
        if (sustained) result |= agent_bit(w);
      }
    }
    return result;
  }

 private:
  AgentId tally(const std::vector<Ballot>& history) const {
    std::vector<int> votes(n_, 0);
    for (const Ballot& b : history) {
      for (AgentId a = 0; a < n_; ++a) {
        if (b.approved & agent_bit(a)) ++votes[a];
      }
    }
    int top = -1;
    for (int v : votes) top = std::max(top, v);
    for (AgentId a : g_.tiebreak_order()) {
      if (votes[a] == top) return a;
    }
    return g_.tiebreak_order().front();
  }

  const ConfirmationNetwork& g_;
  int n_;
  Rational eps_;
  std::vector<std::vector<Ballot>> ballots_;
};

}  // namespace

AchievableSet naive_achievable_winners(const ConfirmationNetwork& g,
                                       const Rule& rule) {
  const double leaves =
      std::pow(static_cast<double>(legal_ballot_count(rule, g.size())),
               g.size());
  if (g.size() > 16 || leaves > static_cast<double>(kNaiveLeafLimit)) {
    throw InvalidInput("instance too large for the naive solver (" +
                       std::to_string(static_cast<long long>(leaves)) +
                       " leaves)");
  }
  NaiveGame game(g, rule);
  std::vector<Ballot> history;
  AchievableSet out;
  out.winners = game.solve(history);
  return out;
}

}  // namespace seqvote
