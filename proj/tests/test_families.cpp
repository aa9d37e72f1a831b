#include "doctest.h"
#include "seqvote/families.hpp"

using namespace seqvote;

namespace {

std::vector<std::string> order_names(const ConfirmationNetwork& g) {
  std::vector<std::string> out;
  for (AgentId a : g.voting_order()) out.push_back(g.name_of(a));
  return out;
}

int d(const ConfirmationNetwork& g, const char* a) {
  return popularity(g, g.id_of(a));
}

}  // namespace

TEST_CASE("example instances") {
  const auto e1 = gen_paper_instance({"example1", 2, {}});
  CHECK(e1.size() == 5);
  CHECK(d(e1, "5") == 3);
  for (const char* a : {"1", "2", "3", "4"}) CHECK(d(e1, a) <= 1);

  const auto e2 = gen_paper_instance({"example2", 2, {}});
  CHECK(degree_profile(e2).max_out == 1);
  CHECK(d(e2, "4") == 2);
}

TEST_CASE("G_2 layout and degrees") {
  std::vector<Expectation> expected;
  const auto g = gen_paper_instance({"g_k", 2, {}}, &expected);
  CHECK(g.size() == 9);
  CHECK(order_names(g) == std::vector<std::string>{"d1a", "d1b", "c3", "c2",
                                                   "c1", "b1a", "b1b", "b2a",
                                                   "b2b"});
  CHECK(d(g, "c1") == 4);
  CHECK(d(g, "c3") == 2);
  CHECK(g.has_edge(g.id_of("c3"), g.id_of("c2")));
  CHECK(expected.size() == 2);
}

TEST_CASE("G_k degree targets for larger k") {
  for (int k = 3; k <= 4; ++k) {
    const auto g = gen_paper_instance({"g_k", k, {}});
    const int top = k * (k + 1) / 2 + k - 1;
    CHECK(d(g, "c1") == top);
    CHECK(popularity(g, g.id_of("c" + std::to_string(k + 1))) ==
          k * (k + 1) / 2 - 1);
  }
}

TEST_CASE("plurality chains") {
  const auto f5 = gen_paper_instance({"fig5", 3, {}});
  CHECK(order_names(f5) ==
        std::vector<std::string>{"d1", "d2", "d3", "c3", "c2", "c1", "b1"});
  CHECK(d(f5, "c1") == 3);
  CHECK(d(f5, "c3") == 1);

  for (int k = 3; k <= 5; ++k) {
    const auto g = gen_paper_instance({"plurality_chain", k, {}});
    CHECK(g.size() == 3 * k - 1);
    CHECK(d(g, "c1") == k);
    CHECK(popularity(g, g.id_of("c" + std::to_string(k))) == 1);
  }
}

TEST_CASE("k-approval chain") {
  const auto g = gen_paper_instance({"kapproval_chain", 2, {}});
  const auto order = order_names(g);
  CHECK(std::vector<std::string>(order.begin(), order.begin() + 6) ==
        std::vector<std::string>{"d1", "d2", "d3", "c3", "c2", "c1"});
  CHECK(degree_profile(g).out_degree[g.id_of("d1")] == 3);
  CHECK(degree_profile(g).out_degree[g.id_of("d3")] == 4);
  CHECK(d(g, "c1") == 3);
}

TEST_CASE("H_k") {
  const auto h2 = gen_paper_instance({"h_k", 2, {}});
  CHECK(h2.size() == 7);
  CHECK(d(h2, "m") == 4);
  CHECK(d(h2, "c1") == 2);
  CHECK(d(h2, "c2") == 2);
  for (int k = 2; k <= 4; ++k) {
    const auto g = gen_paper_instance({"h_k", k, {}});
    const int m = popularity(g, g.id_of("m"));
    for (AgentId a = 0; a < g.size(); ++a) {
      if (g.name_of(a) != "m") CHECK(m - popularity(g, a) >= k);
    }
  }
}

TEST_CASE("catalog errors") {
  CHECK_THROWS_AS(gen_paper_instance({"nope", 2, {}}), InvalidInput);
  CHECK_THROWS_AS(gen_paper_instance({"g_k", 0, {}}), InvalidInput);
  for (const auto& name : catalog_names()) {
    CHECK_NOTHROW(gen_paper_instance({name, 3, {}}));
  }
}

TEST_CASE("random generator") {
  const auto empty = gen_random({5, 0.0, std::nullopt, 1});
  CHECK(empty.edges().empty());
  const auto full = gen_random({5, 1.0, std::nullopt, 1});
  CHECK(full.edges().size() == 20);

  const RandomSpec spec{6, 0.4, std::nullopt, 7};
  CHECK(gen_random(spec) == gen_random(spec));
  CHECK_FALSE(gen_random(spec) == gen_random({6, 0.4, std::nullopt, 8}));

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int cap = static_cast<int>(seed % 3);
    const auto g = gen_random({8, 0.7, cap, seed});
    CHECK(degree_profile(g).max_out <= cap);
  }
  CHECK_THROWS_AS(gen_random({0, 0.5, std::nullopt, 0}), InvalidInput);
  CHECK_THROWS_AS(gen_random({3, 1.5, std::nullopt, 0}), InvalidInput);
  CHECK_THROWS_AS(gen_random({3, 0.5, -1, 0}), InvalidInput);
}
