#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "seqvote/families.hpp"
#include "seqvote/graph_io.hpp"
#include "seqvote/network.hpp"

using namespace seqvote;

namespace {

ConfirmationNetwork example(const char* name, int k = 2) {
  return gen_paper_instance({name, k, {}});
}

}  // namespace

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(ConfirmationNetwork(2, {{0, 0}}), InvalidInput);
  CHECK_THROWS_AS(ConfirmationNetwork(2, {{0, 1}, {0, 1}}), InvalidInput);
  CHECK_THROWS_AS(ConfirmationNetwork(2, {{0, 2}}), InvalidInput);
  CHECK_THROWS_AS(ConfirmationNetwork(3, {}, {0, 1}), InvalidInput);
  CHECK_THROWS_AS(ConfirmationNetwork(3, {}, {0, 1, 1}), InvalidInput);
  CHECK_THROWS_AS(ConfirmationNetwork(3, {}, {}, {2, 0, 0}), InvalidInput);
  CHECK_THROWS_AS(ConfirmationNetwork(2, {}, {}, {}, {"a"}), InvalidInput);
  CHECK_NOTHROW(ConfirmationNetwork(1, {}));
}

TEST_CASE("popularity and confirmers") {
  const auto g = example("example1");
  CHECK(popularity(g, g.id_of("5")) == 3);
  CHECK(agents_to_mask(confirmers(g, g.id_of("5"))) ==
        (agent_bit(g.id_of("1")) | agent_bit(g.id_of("2")) |
         agent_bit(g.id_of("3"))));
  CHECK(confirmers(g, g.id_of("2")).empty());

  const ConfirmationNetwork empty(4, {});
  for (AgentId a = 0; a < 4; ++a) CHECK(popularity(empty, a) == 0);

  const auto h2 = example("h_k", 2);
  std::vector<std::string> names;
  for (AgentId a : confirmers(h2, h2.id_of("c1"))) {
    names.push_back(h2.name_of(a));
  }
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"d1", "e2"});

  // H_3: every c_j, every d_i and the k-1 dedicated b agents confirm m.
  const auto h3 = example("h_k", 3);
  const AgentId m = h3.id_of("m");
  CHECK(popularity(h3, m) == 3 + 2 + 2);
  for (AgentId a = 0; a < h3.size(); ++a) {
    if (a != m) CHECK(popularity(h3, m) - popularity(h3, a) >= 3);
  }
}

TEST_CASE("removing out-edges") {
  const auto g = example("example2");
  const auto h = remove_out_edges(g, g.id_of("3"));
  std::vector<Edge> want = {{g.id_of("1"), g.id_of("4")},
                            {g.id_of("2"), g.id_of("3")}};
  std::sort(want.begin(), want.end());
  CHECK(h.edges() == want);
  CHECK(h.voting_order() == g.voting_order());
  CHECK(remove_out_edges(g, g.id_of("4")) == g);

  const auto g2 = example("g_k", 2);
  const auto cut = remove_out_edges(g2, g2.id_of("c3"));
  CHECK(degree_profile(cut).max_in == 4);
  CHECK(popularity(cut, cut.id_of("c1")) == 4);
}

TEST_CASE("gap and ratio") {
  const auto g2 = example("g_k", 2);
  CHECK(additive_gap(g2, g2.id_of("c3")) == 2);
  CHECK(ratio(g2, g2.id_of("c3")) == ExtRational(Rational(2)));

  const auto e2 = example("example2");
  CHECK(additive_gap(e2, e2.id_of("3")) == 0);
  CHECK(max_in_without(e2, e2.id_of("3")) == 1);

  const auto f5 = example("fig5", 3);
  CHECK(ratio(f5, f5.id_of("c3")) == ExtRational(Rational(3)));

  const auto h2 = example("h_k", 2);
  CHECK(ratio(h2, h2.id_of("c1")) == ExtRational(Rational(3, 2)));

  const ConfirmationNetwork single(1, {});
  CHECK(ratio(single, 0) == ExtRational(Rational(1)));
  // w's own edge does not count, so this is 0/0.
  const ConfirmationNetwork pair(2, {{0, 1}});
  CHECK(ratio(pair, 0) == ExtRational(Rational(1)));
  const ConfirmationNetwork other(3, {{1, 2}});
  CHECK(ratio(other, 0).is_infinite());
  // A unique most popular agent without out-edges has no gap.
  const ConfirmationNetwork star(3, {{1, 0}, {2, 0}});
  CHECK(additive_gap(star, 0) == 0);
}

TEST_CASE("degree sums agree (property)") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const auto g = oracle::random_network(rng, n, 0.35);
    const auto d = degree_profile(g);
    int in = 0, out = 0;
    for (int a = 0; a < n; ++a) {
      in += d.in_degree[a];
      out += d.out_degree[a];
      CHECK(d.in_degree[a] == popularity(g, a));
    }
    CHECK(in == static_cast<int>(g.edges().size()));
    CHECK(out == static_cast<int>(g.edges().size()));
    for (AgentId w = 0; w < n; ++w) {
      CHECK(additive_gap(g, w) >= 0);
      CHECK(max_in_without(g, w) >= popularity(g, w));
    }
  }
}

TEST_CASE("graph JSON round trip (property)") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const auto g = oracle::random_network(rng, n, 0.3);
    CHECK(parse_network(serialize_network(g)) == g);
  }
  for (const auto& name : catalog_names()) {
    const auto g = example(name.c_str(), 3);
    CHECK(parse_network(serialize_network(g)) == g);
  }
}

TEST_CASE("graph JSON validation") {
  CHECK_NOTHROW(parse_network(R"({"n":2,"edges":[[0,1]]})"));
  CHECK_THROWS_AS(parse_network(R"({"n":2,"edges":[[0,0]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_network(R"({"n":2,"edges":[[0,1]],"x":1})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_network(R"({"edges":[]})"), InvalidInput);
  CHECK_THROWS_AS(parse_network("not json"), InvalidInput);
}
