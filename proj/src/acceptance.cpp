#include "seqvote/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "seqvote/graph_io.hpp"
#include "seqvote/preferences.hpp"

namespace seqvote {
namespace {

using Clock = std::chrono::steady_clock;

CriterionResult started(std::string id, std::string title) {
  CriterionResult r;
  r.id = std::move(id);
  r.title = std::move(title);
  return r;
}

struct GoldenCase {
  std::string criterion;
  std::string name;
  int k;
  Expectation expectation;
  double budget_seconds;
};

// Time limits per golden instance and rule.
double golden_budget(const std::string& name, const Rule& rule) {
  const bool approval = rule.kind == RuleKind::kApproval;
  if (name == "example1" || name == "example2") return 10;
  if (name == "g_k") return approval ? 3600 : 10;
  if (name == "fig5" || name == "plurality_chain") return 300;
  if (name == "kapproval_chain") return 1800;
  if (name == "h_k") return approval ? 300 : 60;
  return 600;
}

// Heavy instances whose unpruned solve does not fit in time or memory.
bool pruning_required(const GoldenCase& c) {
  return c.name == "g_k" && c.expectation.rule.kind == RuleKind::kApproval;
}

std::vector<GoldenCase> golden_cases() {
  const std::vector<std::tuple<std::string, std::string, int>> table = {
      {"1a", "example1", 2},        {"1b", "example2", 2},
      {"1c", "g_k", 2},             {"1d", "fig5", 3},
      {"1d", "plurality_chain", 3}, {"1d", "plurality_chain", 4},
      {"1e", "kapproval_chain", 2}, {"1f", "h_k", 2},
  };
  std::vector<GoldenCase> out;
  for (const auto& [criterion, name, k] : table) {
    std::vector<Expectation> expected;
    gen_paper_instance({name, k, {}}, &expected);
    for (const Expectation& e : expected) {
      out.push_back({criterion, name, k, e, golden_budget(name, e.rule)});
    }
  }
  return out;
}

std::string names_of(const ConfirmationNetwork& g,
                     const std::vector<AgentId>& agents) {
  std::string s = "{";
  for (std::size_t j = 0; j < agents.size(); ++j) {
    if (j) s += ",";
    s += g.name_of(agents[j]);
  }
  return s + "}";
}

struct RandomSuite {
  std::string key;
  Rule rule;
  std::vector<InstanceDescriptor> specs;
};

std::vector<RandomSuite> random_suites(const std::string& criterion) {
  std::vector<RandomSuite> out;
  if (criterion == "2") {
    out.push_back({"2:plurality", Rule::plurality(),
                   random_suite(100, 1, 5, std::nullopt, 2000)});
    out.push_back({"2:approval", Rule::approval(),
                   random_suite(100, 1, 4, std::nullopt, 3000)});
    out.push_back({"2:2-approval", Rule::k_approval(2),
                   random_suite(100, 1, 4, std::nullopt, 4000)});
  } else if (criterion == "3") {
    const auto specs = random_suite(200, 1, 7, 1, 5000);
    out.push_back({"3:plurality", Rule::plurality(), specs});
    out.push_back({"3:approval", Rule::approval(), specs});
  } else if (criterion == "4") {
    out.push_back({"4:approval", Rule::approval(),
                   random_suite(200, 1, 6, std::nullopt, 6000)});
  } else if (criterion == "5") {
    out.push_back({"5:plurality", Rule::plurality(),
                   random_suite(300, 1, 7, std::nullopt, 7000)});
  }
  return out;
}

class Runner {
 public:
  explicit Runner(const AcceptanceOptions& options) : opt_(options) {
    base_.solver.threads = options.threads;
    base_.threads = 1;
  }

  void log(const std::string& line) {
    if (opt_.log) *opt_.log << line << std::endl;
  }

  const RunRecord& golden_record(std::size_t j) {
    auto it = golden_.find(j);
    if (it == golden_.end()) {
      it = golden_.emplace(j, golden_run(j, base_.solver.threads, true)).first;
    }
    return it->second;
  }

  const std::vector<RunRecord>& suite(const RandomSuite& s) {
    auto it = random_.find(s.key);
    if (it == random_.end()) {
      it = random_.emplace(s.key, run_batch(s.specs, s.rule, base_)).first;
    }
    return it->second;
  }

  CriterionResult golden_criterion(const std::string& id,
                                   const std::string& title) {
    CriterionResult r = started(id, title);
    const auto cases = golden_cases();
    bool pass = true;
    std::ostringstream detail;
    for (std::size_t j = 0; j < cases.size(); ++j) {
      if (cases[j].criterion != id) continue;
      const GoldenCase& c = cases[j];
      const RunRecord& rec = golden_record(j);
      const ConfirmationNetwork g = rec.instance.materialize();
      std::string why;
      bool ok = rec.status == RecordStatus::kOk;
      if (ok) {
        ok = check_expectation(g, c.expectation, rec.metrics, &why);
      } else {
        why = rec.error;
      }
      if (ok && c.name == "example2" &&
          c.expectation.rule.kind == RuleKind::kApproval) {
        const AgentId w = rec.metrics.winners.front();
        if (popularity(g, w) != degree_profile(g).max_in) {
          ok = false;
          why = "approval winner is not most popular";
        }
      }
      detail << rec.instance.label() << "/" << c.expectation.rule.to_string()
             << ": " << (ok ? "ok" : "FAIL") << " W="
             << (rec.status == RecordStatus::kOk
                     ? names_of(g, rec.metrics.winners)
                     : std::string("n/a"))
             << (why.empty() ? "" : " (" + why + ")") << "; ";
      pass = pass && ok;
    }
    if (id == "1c") detail << walkthrough_g2();
    r.pass = pass;
    r.detail = detail.str();
    return r;
  }

  // The two G_2 approval subgames narrated for k = 2.
  std::string walkthrough_g2() {
    const ConfirmationNetwork g = gen_paper_instance({"g_k", 2, {}});
    auto ballot = [&g](std::initializer_list<const char*> names) {
      Ballot b;
      for (const char* a : names) b.approved |= agent_bit(g.id_of(a));
      return b;
    };
    SolverOptions opt = base_.solver;
    opt.max_seconds = 600;
    std::ostringstream os;
    const std::vector<std::pair<std::vector<Ballot>, std::string>> cases = {
        {{ballot({"c3"}), ballot({"c1", "c3"})}, "c2"},
        {{ballot({"c3"}), ballot({"c3"})}, "c3"},
    };
    for (const auto& [history, want] : cases) {
      try {
        const AchievableSet w = achievable_winners_from(
            g, Rule::approval(), SubgameState::after(g, history), opt);
        const bool ok = w.winners == agent_bit(g.id_of(want));
        os << "walkthrough " << (history[1].size() == 2 ? "[c3|c1,c3]" : "[c3|c3]")
           << " -> " << names_of(g, w.agents()) << " "
           << (ok ? "ok" : "FAIL") << "; ";
      } catch (const BudgetExceeded& e) {
        os << "walkthrough budget exceeded; ";
      }
    }
    return os.str();
  }

  CriterionResult oracle_equivalence() {
    CriterionResult r = started("2", "oracle equivalence (memoized/pruned vs naive)");
    int checked = 0, mismatches = 0;
    std::ostringstream detail;
    for (const RandomSuite& s : random_suites("2")) {
      for (const InstanceDescriptor& d : s.specs) {
        const ConfirmationNetwork g = d.materialize();
        const AgentMask want = naive_achievable_winners(g, s.rule).winners;
        for (bool prune : {true, false}) {
          for (bool memo : {true, false}) {
            for (int threads : {1, 4}) {
              if (!memo && threads > 1) continue;
              SolverOptions opt;
              opt.prune = prune;
              opt.memoize = memo;
              opt.threads = threads;
              const AgentMask got = achievable_winners(g, s.rule, opt).winners;
              ++checked;
              if (got != want) {
                ++mismatches;
                if (mismatches <= 5) {
                  detail << "mismatch " << d.label() << " " << s.key
                         << " prune=" << prune << " memo=" << memo
                         << " threads=" << threads << "; ";
                }
              }
            }
          }
        }
      }
      // Keep baseline records for the determinism comparison.
      suite(s);
    }
    detail << checked << " comparisons, " << mismatches << " mismatches";
    r.pass = mismatches == 0;
    r.detail = detail.str();
    return r;
  }

  CriterionResult low_outdegree() {
    CriterionResult r = started("3", "max out-degree one: unique outcome, zero gap");
    int instances = 0, violations = 0, subgames = 0;
    std::ostringstream detail;
    for (const RandomSuite& s : random_suites("3")) {
      for (const RunRecord& rec : suite(s)) {
        ++instances;
        const ConfirmationNetwork g = rec.instance.materialize();
        bool ok = rec.status == RecordStatus::kOk &&
                  rec.verdicts.at("unique_outcome") &&
                  rec.verdicts.at("zero_gap");
        std::string why = ok ? "" : "unique/zero-gap";
        // Every state on the canonical path is itself a low out-degree
        // subgame.
        if (ok) {
          const PathRecord& path = rec.paths.front();
          for (std::size_t len = 0; len <= path.path.size() && ok; ++len) {
            const std::vector<Ballot> prefix(path.path.begin(),
                                             path.path.begin() + len);
            const LowOutdegreeReport rep = verify_low_outdegree_subgame(
                SubgameState::after(g, prefix), g, s.rule, base_.solver);
            ++subgames;
            if (!rep.pass) {
              ok = false;
              why = rep.detail;
            }
          }
        }
        if (!ok) {
          ++violations;
          if (violations <= 5) {
            detail << rec.instance.label() << " " << s.key << ": " << why
                   << " graph=" << serialize_network(g) << "; ";
          }
        }
      }
    }
    detail << instances << " instances, " << subgames << " subgames, "
           << violations << " violations";
    r.pass = violations == 0;
    r.detail = detail.str();
    return r;
  }

  CriterionResult verdict_suite(const std::string& id, const std::string& title,
                                const std::string& verdict) {
    CriterionResult r = started(id, title);
    int instances = 0, violations = 0, findings = 0;
    std::ostringstream detail;
    for (const RandomSuite& s : random_suites(id)) {
      for (const RunRecord& rec : suite(s)) {
        ++instances;
        const bool ok =
            rec.status == RecordStatus::kOk && rec.verdicts.count(verdict) &&
            rec.verdicts.at(verdict) && rec.verdicts.at("nonempty");
        if (!ok) {
          ++violations;
          if (violations <= 5) {
            detail << "violation " << rec.instance.label() << " " << s.key
                   << (rec.error.empty() ? "" : " " + rec.error) << "; ";
          }
        }
        for (const auto& [name, held] : rec.findings) {
          if (held) continue;
          ++findings;
          log("finding " + name + " on " + rec.instance.label() + " graph=" +
              serialize_network(rec.instance.materialize()));
          if (findings <= 3) {
            detail << "finding " << name << " " << rec.instance.label()
                   << "; ";
          }
        }
      }
    }
    detail << instances << " instances, " << violations
           << " hard violations, " << findings << " flagged findings";
    r.pass = violations == 0;
    r.detail = detail.str();
    return r;
  }

  CriterionResult truthful_paths() {
    CriterionResult r = started("6", "non-confirmers of the winner are truthful on path");
    int paths = 0, violations = 0;
    std::ostringstream detail;
    for (const std::string id : {"3", "4", "5"}) {
      for (const RandomSuite& s : random_suites(id)) {
        for (const RunRecord& rec : suite(s)) {
          for (const auto& [name, held] : rec.verdicts) {
            if (name.rfind("truthful_off_winner:", 0) != 0) continue;
            ++paths;
            if (!held) {
              ++violations;
              if (violations <= 5) {
                detail << rec.instance.label() << " " << s.key << " " << name
                       << "; ";
              }
            }
          }
        }
      }
    }
    detail << paths << " paths, " << violations << " violations";
    r.pass = violations == 0 && paths > 0;
    r.detail = detail.str();
    return r;
  }

  CriterionResult comparator() {
    CriterionResult r = started("7", "PrefKey order equals exact utility order");
    std::mt19937_64 rng(8);
    long long comparisons = 0, disagreements = 0;
    for (int n = 1; n <= 8; ++n) {
      std::vector<Rational> eps;
      const std::int64_t q = 2 * n;
      eps.push_back(Rational(1, q * 1000000) );
      eps.push_back(Rational(999999, q * 1000000));
      while (eps.size() < 25) {
        const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 100000);
        const std::int64_t num =
            1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(den));
        Rational e = Rational(num, den) * Rational(1, q);
        if (e < Rational(1, q)) eps.push_back(e);
      }
      struct Triple {
        OutcomeLevel level;
        int f, g;
      };
      std::vector<Triple> triples;
      for (int level = 0; level <= 2; ++level) {
        for (int f = 0; f <= n - 1; ++f) {
          for (int g = 0; g <= n - 1; ++g) {
            triples.push_back({static_cast<OutcomeLevel>(level), f, g});
          }
        }
      }
      for (const Rational& e : eps) {
        std::vector<Rational> value;
        value.reserve(triples.size());
        for (const Triple& t : triples) {
          value.push_back(exact_utility(t.level, t.f, t.g, n, e));
        }
        for (std::size_t a = 0; a < triples.size(); ++a) {
          for (std::size_t b = 0; b < triples.size(); ++b) {
            const PrefKey ka{static_cast<int>(triples[a].level), -triples[a].g,
                             triples[a].f};
            const PrefKey kb{static_cast<int>(triples[b].level), -triples[b].g,
                             triples[b].f};
            ++comparisons;
            if ((ka <=> kb) != (value[a] <=> value[b])) ++disagreements;
          }
        }
      }
    }
    r.pass = disagreements == 0;
    r.detail = std::to_string(comparisons) + " comparisons, " +
               std::to_string(disagreements) + " disagreements";
    return r;
  }

  CriterionResult determinism() {
    CriterionResult r = started("8", "records identical across workers and pruning");
    auto dump = [](const std::vector<RunRecord>& records) {
      std::string s;
      for (const RunRecord& rec : records) {
        s += record_to_json(rec, false).dump();
        s += '\n';
      }
      return s;
    };
    std::map<std::string, std::string> baseline;
    for (const std::string id : {"2", "3", "4", "5"}) {
      for (const RandomSuite& s : random_suites(id)) {
        baseline[s.key] = dump(suite(s));
      }
    }
    int compared = 0, differing = 0;
    std::ostringstream detail;
    const auto cases = golden_cases();
    for (int threads : {1, 4}) {
      for (bool prune : {true, false}) {
        if (prune && threads == base_.solver.threads) continue;  // baseline
        BatchOptions opt;
        opt.solver.threads = threads;
        opt.solver.prune = prune;
        log("determinism: threads=" + std::to_string(threads) +
            " prune=" + std::to_string(prune));
        auto compare = [&](const std::string& key, const std::string& want,
                           const std::string& got) {
          ++compared;
          if (got != want) {
            ++differing;
            detail << key << " differs (threads=" << threads
                   << " prune=" << prune << "); ";
          }
        };
        for (std::size_t j = 0; j < cases.size(); ++j) {
          // The approval G_2 solve is only feasible with pruning.
          if (!prune && pruning_required(cases[j])) continue;
          const RunRecord got = golden_run(j, threads, prune);
          compare(got.instance.label() + "/" + got.rule.to_string(),
                  dump({golden_record(j)}), dump({got}));
        }
        for (const std::string id : {"2", "3", "4", "5"}) {
          for (const RandomSuite& s : random_suites(id)) {
            compare(s.key, baseline.at(s.key),
                    dump(run_batch(s.specs, s.rule, opt)));
          }
        }
      }
    }
    for (const GoldenCase& c : cases) {
      if (pruning_required(c)) {
        detail << c.name << "(k=" << c.k << ")/" << c.expectation.rule.to_string()
               << " compared with pruning on only; ";
      }
    }
    detail << compared << " suite comparisons, " << differing << " differing";
    r.pass = differing == 0;
    r.detail = detail.str();
    return r;
  }

  RunRecord golden_run(std::size_t j, int threads, bool prune) {
    const GoldenCase c = golden_cases()[j];
    BatchOptions opt;
    opt.solver.threads = threads;
    opt.solver.prune = prune;
    opt.solver.max_seconds = c.budget_seconds;
    return run_one(InstanceDescriptor::catalog(c.name, c.k), c.expectation.rule,
                   opt);
  }

 private:
  AcceptanceOptions opt_;
  BatchOptions base_;
  std::map<std::size_t, RunRecord> golden_;
  std::map<std::string, std::vector<RunRecord>> random_;
};

}  // namespace

std::vector<InstanceDescriptor> random_suite(int count, int n_min, int n_max,
                                             std::optional<int> max_out,
                                             std::uint64_t base_seed) {
  static constexpr double kDensities[] = {0.15, 0.3, 0.45, 0.6, 0.8};
  std::vector<InstanceDescriptor> out;
  for (int j = 0; j < count; ++j) {
    RandomSpec spec;
    spec.n = n_min + j % (n_max - n_min + 1);
    spec.p = kDensities[j % 5];
    spec.max_out = max_out;
    spec.seed = base_seed + static_cast<std::uint64_t>(j);
    out.push_back(InstanceDescriptor::from_random(spec));
  }
  return out;
}

bool check_expectation(const ConfirmationNetwork& g, const Expectation& e,
                       const InstanceMetrics& m, std::string* detail) {
  auto fail = [detail](const std::string& why) {
    if (detail) *detail = why;
    return false;
  };
  if (e.exact_winners) {
    std::vector<AgentId> want;
    for (const std::string& a : *e.exact_winners) want.push_back(g.id_of(a));
    std::sort(want.begin(), want.end());
    if (want != m.winners) {
      return fail("expected W=" + names_of(g, want));
    }
  }
  for (const std::string& a : e.must_contain) {
    if (std::find(m.winners.begin(), m.winners.end(), g.id_of(a)) ==
        m.winners.end()) {
      return fail("expected " + a + " in W");
    }
  }
  if (e.gap && m.gap != *e.gap) {
    return fail("expected gap " + std::to_string(*e.gap) + ", got " +
                std::to_string(m.gap));
  }
  if (e.ratio_agent && e.ratio) {
    const ExtRational got = ratio(g, g.id_of(*e.ratio_agent));
    if (got != ExtRational(*e.ratio)) {
      return fail("expected ratio(" + *e.ratio_agent + ")=" +
                  e.ratio->to_string() + ", got " + got.to_string());
    }
    if (m.r_max < ExtRational(*e.ratio)) {
      return fail("max ratio below " + e.ratio->to_string());
    }
  }
  return true;
}

std::vector<std::string> acceptance_ids() {
  return {"1a", "1b", "1c", "1d", "1e", "1f", "2", "3", "4", "5", "6", "7", "8"};
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  Runner runner(options);
  const std::map<std::string, std::function<CriterionResult()>> table = {
      {"1a", [&] { return runner.golden_criterion("1a", "example1 goldens"); }},
      {"1b", [&] { return runner.golden_criterion("1b", "example2 goldens"); }},
      {"1c", [&] { return runner.golden_criterion("1c", "G_2 goldens"); }},
      {"1d",
       [&] { return runner.golden_criterion("1d", "plurality ratio chains"); }},
      {"1e",
       [&] { return runner.golden_criterion("1e", "k-approval ratio chain"); }},
      {"1f", [&] { return runner.golden_criterion("1f", "H_2 goldens"); }},
      {"2", [&] { return runner.oracle_equivalence(); }},
      {"3", [&] { return runner.low_outdegree(); }},
      {"4",
       [&] {
         return runner.verdict_suite(
             "4", "approval: every winner within factor two",
             "approval_bound");
       }},
      {"5",
       [&] {
         return runner.verdict_suite(
             "5", "plurality: some winner within factor two",
             "exists_within_two");
       }},
      {"6", [&] { return runner.truthful_paths(); }},
      {"7", [&] { return runner.comparator(); }},
      {"8", [&] { return runner.determinism(); }},
  };
  std::vector<CriterionResult> out;
  for (const std::string& id : acceptance_ids()) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), id) ==
            options.only.end()) {
      continue;
    }
    runner.log("criterion " + id + " ...");
    const auto start = Clock::now();
    CriterionResult r = table.at(id)();
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    runner.log(std::string(r.pass ? "PASS " : "FAIL ") + id + " " + r.title +
               " : " + r.detail);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace seqvote
