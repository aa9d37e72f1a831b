#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "seqvote/families.hpp"
#include "seqvote/preferences.hpp"

using namespace seqvote;

namespace {

Ballot of(std::initializer_list<AgentId> agents) {
  return Ballot{agents_to_mask(agents)};
}

}  // namespace

TEST_CASE("outcome levels and assessments") {
  const auto e1 = gen_paper_instance({"example1", 2, {}});
  auto id = [&e1](const char* a) { return e1.id_of(a); };
  CHECK(outcome_level(e1, id("3"), id("3")) == OutcomeLevel::kSelf);
  CHECK(outcome_level(e1, id("2"), id("5")) == OutcomeLevel::kConfirmed);
  CHECK(outcome_level(e1, id("1"), id("2")) == OutcomeLevel::kUnconfirmed);
  CHECK(assess(e1, id("2"), of({})) == BallotAssessment{0, 0});
  CHECK(assess(e1, id("2"), of({id("1"), id("5")})) == BallotAssessment{2, 0});

  const auto e2 = gen_paper_instance({"example2", 2, {}});
  CHECK(assess(e2, e2.id_of("1"), of({e2.id_of("4"), e2.id_of("2")})) ==
        BallotAssessment{1, 1});
}

TEST_CASE("pref keys") {
  const auto e1 = gen_paper_instance({"example1", 2, {}});
  auto id = [&e1](const char* a) { return e1.id_of(a); };
  const AgentId x = id("2"), w = id("5");
  CHECK(pref_key(e1, x, of({id("1"), id("5")}), w) >
        pref_key(e1, x, of({id("1")}), w));

  // Truthful ballot with the voter elected beats every (ballot, x) pair.
  const auto g = gen_paper_instance({"h_k", 2, {}});
  for (AgentId v = 0; v < g.size(); ++v) {
    const Ballot truth = truthful_ballot(g, Rule::approval(), v);
    for (const Ballot& b : legal_ballots(Rule::approval(), v, g.size())) {
      CHECK(pref_key(g, v, truth, v) >= pref_key(g, v, b, v));
    }
  }

  // A voter confirming nobody prefers abstaining.
  const AgentId lonely = id("5");
  for (AgentId z = 0; z < 5; ++z) {
    if (z == lonely) continue;
    for (AgentId w2 = 0; w2 < 5; ++w2) {
      CHECK(pref_key(e1, lonely, of({z}), w2) < pref_key(e1, lonely, of({}), w2));
    }
  }
}

TEST_CASE("exact utility") {
  const auto e1 = gen_paper_instance({"example1", 2, {}});
  CHECK(exact_utility(e1, 0, of({}), 0, Rational(1, 20)) == Rational(1));
  CHECK(exact_utility(OutcomeLevel::kConfirmed, 2, 0, 5, Rational(1, 20)) ==
        Rational(101, 200));
  CHECK(outcome_utility(OutcomeLevel::kConfirmed) == Rational(1, 2));
  CHECK_THROWS_AS(exact_utility(OutcomeLevel::kSelf, 0, 0, 5, Rational(1, 10)),
                  InvalidInput);
  CHECK_THROWS_AS(exact_utility(OutcomeLevel::kSelf, 0, 0, 5, Rational(0)),
                  InvalidInput);
}

TEST_CASE("pref key agrees with utility on random ballots (property)") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 150; ++t) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto g = oracle::random_network(rng, n, 0.4);
    const Rational eps(1, 2 * n + 1 + static_cast<int>(rng() % 50));
    const AgentId x = static_cast<AgentId>(rng() % n);
    const auto ballots = oracle::ballots_for(x, n, n - 1);
    for (int s = 0; s < 40; ++s) {
      const AgentMask b1 = ballots[rng() % ballots.size()];
      const AgentMask b2 = ballots[rng() % ballots.size()];
      const AgentId w1 = static_cast<AgentId>(rng() % n);
      const AgentId w2 = static_cast<AgentId>(rng() % n);
      const auto key = pref_key(g, x, Ballot{b1}, w1) <=>
                       pref_key(g, x, Ballot{b2}, w2);
      const auto val = oracle::utility(g, x, b1, w1, eps) <=>
                       oracle::utility(g, x, b2, w2, eps);
      CHECK(key == val);
    }
  }
}

TEST_CASE("pref key is a total order (property)") {
  std::mt19937_64 rng(32);
  auto draw = [&rng] {
    return PrefKey{static_cast<int>(rng() % 3), -static_cast<int>(rng() % 5),
                   static_cast<int>(rng() % 5)};
  };
  for (int t = 0; t < 5000; ++t) {
    const PrefKey a = draw(), b = draw(), c = draw();
    CHECK(((a < b) + (b < a) + (a == b)) == 1);
    if (a <= b && b <= c) CHECK(a <= c);
  }
}
