#include "seqvote/families.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

namespace seqvote {
namespace {

// Adds agents in voting order; edges by display name.
class Builder {
 public:
  AgentId add(const std::string& name) {
    if (ids_.count(name) != 0) throw std::logic_error("duplicate " + name);
    ids_[name] = static_cast<AgentId>(names_.size());
    names_.push_back(name);
    return ids_[name];
  }

  // `count` agents named prefix + a, b, c, ... (prefix + index past 26).
  std::vector<std::string> add_group(const std::string& prefix, int count) {
    std::vector<std::string> out;
    for (int j = 0; j < count; ++j) {
      std::string name =
          count == 1 ? prefix
          : count <= 26
              ? prefix + static_cast<char>('a' + j)
              : prefix + "_" + std::to_string(j + 1);
      add(name);
      out.push_back(name);
    }
    return out;
  }

  void edge(const std::string& src, const std::string& dst) {
    edges_.push_back({ids_.at(src), ids_.at(dst)});
  }

  ConfirmationNetwork build() const {
    return ConfirmationNetwork(static_cast<int>(names_.size()), edges_, {}, {},
                               names_);
  }

 private:
  std::map<std::string, AgentId> ids_;
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
};

Expectation exact(Rule rule, std::vector<std::string> winners) {
  Expectation e;
  e.rule = rule;
  e.exact_winners = std::move(winners);
  return e;
}

Expectation containing(Rule rule, std::string agent) {
  Expectation e;
  e.rule = rule;
  e.must_contain = {std::move(agent)};
  return e;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("catalog instance check failed: " + what);
}

int pop(const ConfirmationNetwork& g, const std::string& name) {
  return popularity(g, g.id_of(name));
}

std::string idx(const char* prefix, int i) {
  return prefix + std::to_string(i);
}

ConfirmationNetwork example1(std::vector<Expectation>* expected) {
  Builder b;
  for (int a = 1; a <= 5; ++a) b.add(std::to_string(a));
  b.edge("1", "5");
  b.edge("2", "1");
  b.edge("2", "5");
  b.edge("3", "5");
  b.edge("4", "3");
  ConfirmationNetwork g = b.build();
  require(pop(g, "5") == 3, "example1: agent 5 has three confirmers");
  for (const char* a : {"1", "2", "3", "4"}) {
    require(pop(g, a) <= 1, "example1: others have at most one confirmer");
  }
  if (expected) {
    expected->push_back(exact(Rule::plurality(), {"1"}));
    expected->push_back(exact(Rule::approval(), {"5"}));
  }
  return g;
}

ConfirmationNetwork example2(std::vector<Expectation>* expected) {
  Builder b;
  for (int a = 1; a <= 4; ++a) b.add(std::to_string(a));
  b.edge("1", "4");
  b.edge("2", "3");
  b.edge("3", "4");
  ConfirmationNetwork g = b.build();
  require(degree_profile(g).max_out == 1, "example2: out-degree at most one");
  if (expected) {
    Expectation p = exact(Rule::plurality(), {"3"});
    p.gap = 0;
    Expectation a = exact(Rule::approval(), {"4"});
    a.gap = 0;
    expected->push_back(p);
    expected->push_back(a);
  }
  return g;
}

// Agents d_i (group of i+1, i < k) confirm c_i and c_{k+1}; c_{k+1}
// confirms c_k; group b_i confirms c_i. Group sizes for b_i meet
// d(c_1) = k(k+1)/2 + k - 1 and d(c_i) = d(c_1) - (i - 1) for i >= 2,
// which reproduces the pinned k = 2 instance.
ConfirmationNetwork g_k(int k, std::vector<Expectation>* expected) {
  if (k < 2) throw InvalidInput("g_k requires k >= 2");
  Builder b;
  std::vector<std::vector<std::string>> d(k);
  for (int i = 1; i <= k - 1; ++i) d[i] = b.add_group(idx("d", i), i + 1);
  for (int i = k + 1; i >= 1; --i) b.add(idx("c", i));
  const int top = k * (k + 1) / 2 + k - 1;
  std::vector<std::vector<std::string>> groups(k + 1);
  for (int i = 1; i <= k; ++i) {
    const int target = i == 1 ? top : top - (i - 1);
    const int from_d = i <= k - 1 ? i + 1 : 0;
    const int from_c = i == k ? 1 : 0;
    groups[i] = b.add_group(idx("b", i), target - from_d - from_c);
  }
  const std::string last = idx("c", k + 1);
  for (int i = 1; i <= k - 1; ++i) {
    for (const auto& agent : d[i]) {
      b.edge(agent, idx("c", i));
      b.edge(agent, last);
    }
  }
  b.edge(last, idx("c", k));
  for (int i = 1; i <= k; ++i) {
    for (const auto& agent : groups[i]) b.edge(agent, idx("c", i));
  }
  ConfirmationNetwork g = b.build();
  require(pop(g, "c1") == top, "g_k: popularity of c1");
  require(pop(g, last) == k * (k + 1) / 2 - 1, "g_k: popularity of c_{k+1}");
  require(degree_profile(g).max_out == 2, "g_k: out-degree two");
  if (expected) {
    for (Rule rule : {Rule::plurality(), Rule::approval()}) {
      Expectation e = exact(rule, {last});
      e.gap = k;
      e.heavy = rule.kind == RuleKind::kApproval;
      expected->push_back(e);
    }
  }
  return g;
}

// d1 -> {c1, b1}, d2 -> {c1, c2}, d3 -> {c1, c2, c3}; order
// d1, d2, d3, c3, c2, c1, b1.
ConfirmationNetwork fig5(std::vector<Expectation>* expected) {
  Builder b;
  for (const char* a : {"d1", "d2", "d3", "c3", "c2", "c1", "b1"}) b.add(a);
  b.edge("d1", "c1");
  b.edge("d1", "b1");
  b.edge("d2", "c1");
  b.edge("d2", "c2");
  b.edge("d3", "c1");
  b.edge("d3", "c2");
  b.edge("d3", "c3");
  ConfirmationNetwork g = b.build();
  require(pop(g, "c1") == 3 && pop(g, "c3") == 1, "fig5: degrees");
  if (expected) {
    Expectation e = containing(Rule::plurality(), "c3");
    e.ratio_agent = "c3";
    e.ratio = Rational(3);
    expected->push_back(e);
  }
  return g;
}

ConfirmationNetwork plurality_chain(int k, std::vector<Expectation>* expected) {
  if (k < 2) throw InvalidInput("plurality_chain requires k >= 2");
  Builder b;
  for (int i = 1; i <= k; ++i) b.add(idx("d", i));
  for (int i = k; i >= 1; --i) b.add(idx("c", i));
  for (int i = 1; i <= k - 1; ++i) b.add(idx("b", i));
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= i; ++j) b.edge(idx("d", i), idx("c", j));
    if (i <= k - 1) b.edge(idx("d", i), idx("b", i));
  }
  ConfirmationNetwork g = b.build();
  require(pop(g, "c1") == k && pop(g, idx("c", k)) == 1,
          "plurality_chain: degrees");
  if (expected) {
    Expectation e = containing(Rule::plurality(), idx("c", k));
    e.ratio_agent = idx("c", k);
    e.ratio = Rational(k);
    expected->push_back(e);
  }
  return g;
}

ConfirmationNetwork kapproval_chain(int k, std::vector<Expectation>* expected) {
  if (k < 2) throw InvalidInput("kapproval_chain requires k >= 2");
  Builder b;
  for (const char* a : {"d1", "d2", "d3", "c3", "c2", "c1"}) b.add(a);
  const auto b1 = b.add_group("b1", k);
  const auto b2 = b.add_group("b2", k - 1);
  const auto b3 = b.add_group("b3", k - 1);
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= i; ++j) b.edge(idx("d", i), idx("c", j));
  }
  for (const auto& a : b1) b.edge("d1", a);
  for (const auto& a : b2) b.edge("d2", a);
  for (const auto& a : b3) b.edge("d3", a);
  ConfirmationNetwork g = b.build();
  require(pop(g, "c1") == 3 && pop(g, "c3") == 1, "kapproval_chain: degrees");
  if (expected) {
    Expectation e = containing(Rule::k_approval(k), "c3");
    e.ratio_agent = "c3";
    e.ratio = Rational(3);
    e.heavy = true;
    expected->push_back(e);
  }
  return g;
}

// Order c1, d1, e2, c2, d2, e3, ..., e_k, c_k, then b_2..b_k groups, then
// the b_m group, then m.
ConfirmationNetwork h_k(int k, std::vector<Expectation>* expected) {
  if (k < 2) throw InvalidInput("h_k requires k >= 2");
  Builder b;
  for (int i = 1; i <= k; ++i) {
    if (i >= 2) b.add(idx("e", i));
    b.add(idx("c", i));
    if (i <= k - 1) b.add(idx("d", i));
  }
  std::vector<std::vector<std::string>> groups(k + 1);
  for (int i = 2; i <= k; ++i) groups[i] = b.add_group(idx("b", i), 2 * i - 3);
  const auto bm = b.add_group("bm", k - 1);
  b.add("m");
  for (int i = 1; i <= k; ++i) b.edge(idx("c", i), "m");
  for (int i = 1; i <= k - 1; ++i) {
    b.edge(idx("d", i), "m");
    for (int j = 1; j <= i; ++j) b.edge(idx("d", i), idx("c", j));
  }
  for (int i = 2; i <= k; ++i) {
    for (int j = 1; j <= i; ++j) b.edge(idx("e", i), idx("c", j));
  }
  for (int i = 2; i <= k; ++i) {
    for (const auto& a : groups[i]) b.edge(a, idx("c", i));
  }
  for (const auto& a : bm) b.edge(a, "m");
  ConfirmationNetwork g = b.build();
  require(pop(g, "m") == 3 * k - 2, "h_k: popularity of m");
  for (int i = 1; i <= k; ++i) {
    require(pop(g, idx("c", i)) == 2 * k - 2, "h_k: popularity of c_i");
  }
  if (expected) {
    Expectation a = exact(Rule::approval(), {"c1"});
    a.ratio_agent = "c1";
    a.ratio = Rational(3, 2);
    a.heavy = k >= 3;
    Expectation p = containing(Rule::plurality(), "m");
    p.heavy = k >= 3;
    expected->push_back(a);
    expected->push_back(p);
  }
  return g;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"example1", "example2",        "g_k", "fig5",
          "plurality_chain", "kapproval_chain", "h_k"};
}

ConfirmationNetwork gen_paper_instance(const InstanceSpec& spec,
                                       std::vector<Expectation>* expected) {
  const std::string& n = spec.name;
  if (n == "example1") return example1(expected);
  if (n == "example2") return example2(expected);
  if (n == "g_k") return g_k(spec.k, expected);
  if (n == "fig5") return fig5(expected);
  if (n == "plurality_chain") return plurality_chain(spec.k, expected);
  if (n == "kapproval_chain") return kapproval_chain(spec.k, expected);
  if (n == "h_k") return h_k(spec.k, expected);
  throw InvalidInput("unknown catalog instance '" + n + "'");
}

ConfirmationNetwork gen_random(const RandomSpec& spec) {
  if (spec.n < 1) throw InvalidInput("random graph requires n >= 1");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) {
    throw InvalidInput("edge probability must lie in [0, 1]");
  }
  if (spec.max_out && *spec.max_out < 0) {
    throw InvalidInput("max out-degree must be non-negative");
  }
  std::mt19937_64 rng(spec.seed);
  auto unit = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  auto below = [&rng](std::uint64_t bound) {
    // Rejection sampling keeps the draw uniform.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v;
    do {
      v = rng();
    } while (v >= limit);
    return v % bound;
  };
  std::vector<Edge> edges;
  for (AgentId a = 0; a < spec.n; ++a) {
    std::vector<AgentId> targets;
    for (AgentId b = 0; b < spec.n; ++b) {
      if (a == b) continue;
      if (unit() < spec.p) targets.push_back(b);
    }
    if (spec.max_out && static_cast<int>(targets.size()) > *spec.max_out) {
      for (int j = 0; j < *spec.max_out; ++j) {
        const auto pick = j + below(targets.size() - j);
        std::swap(targets[j], targets[pick]);
      }
      targets.resize(*spec.max_out);
      std::sort(targets.begin(), targets.end());
    }
    for (AgentId b : targets) edges.push_back({a, b});
  }
  return ConfirmationNetwork(spec.n, std::move(edges));
}

}  // namespace seqvote
