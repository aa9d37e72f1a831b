#include "seqvote/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "seqvote/graph_io.hpp"

namespace seqvote {

using nlohmann::json;

InstanceMetrics metrics_from(const ConfirmationNetwork& g,
                             const AchievableSet& w) {
  InstanceMetrics m;
  m.winners = w.agents();
  bool first = true;
  for (AgentId a : m.winners) {
    WinnerMetrics wm;
    wm.agent = a;
    wm.popularity = popularity(g, a);
    wm.max_in = max_in_without(g, a);
    wm.gap = wm.max_in - wm.popularity;
    wm.ratio = ratio(g, a);
    if (first) {
      m.gap = wm.gap;
      m.r_min = m.r_max = wm.ratio;
      first = false;
    } else {
      m.gap = std::min(m.gap, wm.gap);
      m.r_min = std::min(m.r_min, wm.ratio);
      m.r_max = std::max(m.r_max, wm.ratio);
    }
    m.per_winner.push_back(wm);
  }
  return m;
}

InstanceMetrics metrics_of(const ConfirmationNetwork& g, const Rule& rule,
                           const SolverOptions& options) {
  return metrics_from(g, achievable_winners(g, rule, options));
}

InstanceDescriptor InstanceDescriptor::catalog(std::string name, int k) {
  InstanceDescriptor d;
  d.kind = Kind::kCatalog;
  d.name = std::move(name);
  d.k = k;
  return d;
}

InstanceDescriptor InstanceDescriptor::from_random(const RandomSpec& spec) {
  InstanceDescriptor d;
  d.kind = Kind::kRandom;
  d.random = spec;
  return d;
}

InstanceDescriptor InstanceDescriptor::inline_graph(ConfirmationNetwork g) {
  InstanceDescriptor d;
  d.kind = Kind::kGraph;
  d.graph.emplace(std::move(g));
  return d;
}

ConfirmationNetwork InstanceDescriptor::materialize() const {
  switch (kind) {
    case Kind::kCatalog:
      return gen_paper_instance({name, k, {}});
    case Kind::kRandom:
      return gen_random(random);
    case Kind::kGraph:
      if (!graph) throw InvalidInput("graph descriptor without a graph");
      return *graph;
  }
  throw InvalidInput("bad instance descriptor");
}

std::string InstanceDescriptor::label() const {
  switch (kind) {
    case Kind::kCatalog:
      return name + "(k=" + std::to_string(k) + ")";
    case Kind::kRandom: {
      std::ostringstream os;
      os << "random(n=" << random.n << ",p=" << random.p;
      if (random.max_out) os << ",cap=" << *random.max_out;
      os << ",seed=" << random.seed << ")";
      return os.str();
    }
    case Kind::kGraph:
      return "graph(n=" + std::to_string(graph ? graph->size() : 0) + ")";
  }
  return "?";
}

json InstanceDescriptor::to_json() const {
  json doc;
  switch (kind) {
    case Kind::kCatalog:
      doc = {{"kind", "catalog"}, {"name", name}, {"k", k}};
      break;
    case Kind::kRandom:
      doc = {{"kind", "random"},
             {"n", random.n},
             {"p", random.p},
             {"seed", random.seed}};
      doc["max_out"] = random.max_out ? json(*random.max_out) : json(nullptr);
      break;
    case Kind::kGraph:
      doc = {{"kind", "graph"}, {"graph", network_to_json(materialize())}};
      break;
  }
  return doc;
}

InstanceDescriptor InstanceDescriptor::from_json(const json& doc) {
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "catalog") {
      return catalog(doc.at("name").get<std::string>(),
                     doc.value("k", 2));
    }
    if (kind == "random") {
      RandomSpec spec;
      spec.n = doc.at("n").get<int>();
      spec.p = doc.at("p").get<double>();
      spec.seed = doc.at("seed").get<std::uint64_t>();
      if (doc.contains("max_out") && !doc.at("max_out").is_null()) {
        spec.max_out = doc.at("max_out").get<int>();
      }
      return from_random(spec);
    }
    if (kind == "graph") return inline_graph(network_from_json(doc.at("graph")));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed instance descriptor: ") +
                       e.what());
  }
  throw InvalidInput("unknown instance kind in descriptor");
}

namespace {

bool within_two(const WinnerMetrics& w) { return w.max_in <= 2 * w.popularity; }

// Every voter other than the winner who does not confirm the winner cast a
// ballot in the truthful class.
bool truthful_off_winner(const ConfirmationNetwork& g, const Rule& rule,
                         const PathRecord& p) {
  for (int i = 0; i < static_cast<int>(p.path.size()); ++i) {
    const AgentId x = g.voting_order()[i];
    if (x == p.winner || g.has_edge(x, p.winner)) continue;
    if (!is_truthful_class(g, rule, x, p.path[i])) return false;
  }
  return true;
}

}  // namespace

void check_invariants(const ConfirmationNetwork& g, RunRecord& r) {
  const InstanceMetrics& m = r.metrics;
  r.verdicts["nonempty"] = !m.winners.empty();
  const bool approval_like = r.rule.cap_for(g.size()) >= g.size() - 1;
  if (approval_like) {
    r.verdicts["approval_bound"] =
        std::all_of(m.per_winner.begin(), m.per_winner.end(), within_two);
  }
  r.verdicts["exists_within_two"] =
      std::any_of(m.per_winner.begin(), m.per_winner.end(), within_two);
  if (degree_profile(g).max_out <= 1) {
    r.verdicts["unique_outcome"] = m.winners.size() == 1;
    r.verdicts["zero_gap"] = m.winners.size() == 1 && m.gap == 0;
  }
  for (const PathRecord& p : r.paths) {
    r.verdicts["path_winner_achievable:" + p.policy] =
        std::find(m.winners.begin(), m.winners.end(), p.winner) !=
        m.winners.end();
    r.verdicts["truthful_off_winner:" + p.policy] =
        truthful_off_winner(g, r.rule, p);
    if (p.policy.rfind("bias:", 0) == 0) {
      WinnerMetrics wm;
      wm.popularity = popularity(g, p.winner);
      wm.max_in = max_in_without(g, p.winner);
      r.findings["bias_within_two"] = within_two(wm);
    }
  }
}

RunRecord run_one(const InstanceDescriptor& instance, const Rule& rule,
                  const BatchOptions& options) {
  RunRecord r;
  r.instance = instance;
  r.rule = rule;
  try {
    const ConfirmationNetwork g = instance.materialize();
    const AchievableSet w = achievable_winners(g, rule, options.solver);
    r.metrics = metrics_from(g, w);
    r.stats = w.stats;
    if (options.policy_paths) {
      std::vector<Policy> policies{Policy::canonical()};
      if (rule.cap_for(g.size()) < g.size() - 1) {
        const DegreeProfile deg = degree_profile(g);
        for (AgentId a = 0; a < g.size(); ++a) {
          if (deg.in_degree[a] == deg.max_in) {
            policies.push_back(Policy::bias_toward(a));
            break;
          }
        }
      }
      for (const Policy& policy : policies) {
        const PolicyOutcome out = policy_spe(g, rule, policy, options.solver);
        r.paths.push_back({policy.to_string(g), out.winner, out.path});
        r.stats.nodes += out.stats.nodes;
        r.stats.cache_hits += out.stats.cache_hits;
        r.stats.transitions += out.stats.transitions;
        r.stats.pruned += out.stats.pruned;
        r.stats.cache_entries += out.stats.cache_entries;
        r.stats.seconds += out.stats.seconds;
      }
    }
    check_invariants(g, r);
  } catch (const BudgetExceeded& e) {
    r.status = RecordStatus::kBudgetExceeded;
    r.error = e.what();
  } catch (const std::exception& e) {
    r.status = RecordStatus::kError;
    r.error = e.what();
  }
  return r;
}

std::vector<RunRecord> run_batch(const std::vector<InstanceDescriptor>& specs,
                                 const Rule& rule,
                                 const BatchOptions& options) {
  std::vector<RunRecord> out(specs.size());
  BatchOptions item = options;
  if (options.threads > 1) item.solver.threads = 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, options.threads)) if (options.threads > 1)
  for (std::size_t k = 0; k < specs.size(); ++k) {
    out[k] = run_one(specs[k], rule, item);
  }
  return out;
}

namespace {

const char* status_name(RecordStatus s) {
  switch (s) {
    case RecordStatus::kOk:
      return "ok";
    case RecordStatus::kBudgetExceeded:
      return "budget_exceeded";
    case RecordStatus::kError:
      return "error";
  }
  return "error";
}

RecordStatus parse_status(const std::string& s) {
  if (s == "ok") return RecordStatus::kOk;
  if (s == "budget_exceeded") return RecordStatus::kBudgetExceeded;
  if (s == "error") return RecordStatus::kError;
  throw InvalidInput("unknown record status '" + s + "'");
}

json ratio_json(const ExtRational& r) { return r.to_string(); }

}  // namespace

json record_to_json(const RunRecord& r, bool with_stats) {
  json doc;
  doc["v"] = RunRecord::kVersion;
  doc["instance"] = r.instance.to_json();
  doc["rule"] = r.rule.to_string();
  doc["status"] = status_name(r.status);
  if (!r.error.empty()) doc["error"] = r.error;
  if (r.status == RecordStatus::kOk) {
    json per = json::array();
    for (const WinnerMetrics& w : r.metrics.per_winner) {
      per.push_back({{"agent", w.agent},
                     {"d", w.popularity},
                     {"max_in", w.max_in},
                     {"gap", w.gap},
                     {"ratio", ratio_json(w.ratio)}});
    }
    doc["metrics"] = {{"winners", r.metrics.winners},
                      {"per_winner", per},
                      {"gap", r.metrics.gap},
                      {"r_min", ratio_json(r.metrics.r_min)},
                      {"r_max", ratio_json(r.metrics.r_max)}};
    json paths = json::array();
    for (const PathRecord& p : r.paths) {
      json ballots = json::array();
      for (const Ballot& b : p.path) ballots.push_back(b.members());
      paths.push_back(
          {{"policy", p.policy}, {"winner", p.winner}, {"path", ballots}});
    }
    doc["paths"] = paths;
    doc["verdicts"] = r.verdicts;
    doc["findings"] = r.findings;
  }
  if (with_stats) {
    doc["stats"] = {{"nodes", r.stats.nodes},
                    {"cache_hits", r.stats.cache_hits},
                    {"transitions", r.stats.transitions},
                    {"pruned", r.stats.pruned},
                    {"cache_entries", r.stats.cache_entries},
                    {"seconds", r.stats.seconds}};
  }
  return doc;
}

RunRecord record_from_json(const json& doc) {
  RunRecord r;
  try {
    if (doc.at("v").get<int>() != RunRecord::kVersion) {
      throw InvalidInput("unsupported record version");
    }
    r.instance = InstanceDescriptor::from_json(doc.at("instance"));
    r.rule = Rule::parse(doc.at("rule").get<std::string>());
    r.status = parse_status(doc.at("status").get<std::string>());
    r.error = doc.value("error", "");
    if (r.status == RecordStatus::kOk) {
      const json& m = doc.at("metrics");
      r.metrics.winners = m.at("winners").get<std::vector<AgentId>>();
      for (const json& w : m.at("per_winner")) {
        WinnerMetrics wm;
        wm.agent = w.at("agent").get<AgentId>();
        wm.popularity = w.at("d").get<int>();
        wm.max_in = w.at("max_in").get<int>();
        wm.gap = w.at("gap").get<int>();
        wm.ratio = ExtRational::parse(w.at("ratio").get<std::string>());
        r.metrics.per_winner.push_back(wm);
      }
      r.metrics.gap = m.at("gap").get<int>();
      r.metrics.r_min = ExtRational::parse(m.at("r_min").get<std::string>());
      r.metrics.r_max = ExtRational::parse(m.at("r_max").get<std::string>());
      for (const json& p : doc.value("paths", json::array())) {
        PathRecord pr;
        pr.policy = p.at("policy").get<std::string>();
        pr.winner = p.at("winner").get<AgentId>();
        for (const json& b : p.at("path")) {
          pr.path.push_back(Ballot{agents_to_mask(b.get<std::vector<AgentId>>())});
        }
        r.paths.push_back(std::move(pr));
      }
      r.verdicts = doc.value("verdicts", std::map<std::string, bool>{});
      r.findings = doc.value("findings", std::map<std::string, bool>{});
    }
    if (doc.contains("stats")) {
      const json& s = doc.at("stats");
      r.stats.nodes = s.value("nodes", std::uint64_t{0});
      r.stats.cache_hits = s.value("cache_hits", std::uint64_t{0});
      r.stats.transitions = s.value("transitions", std::uint64_t{0});
      r.stats.pruned = s.value("pruned", std::uint64_t{0});
      r.stats.cache_entries = s.value("cache_entries", std::uint64_t{0});
      r.stats.seconds = s.value("seconds", 0.0);
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed run record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(std::string("malformed run record: ") + e.what());
  }
  return r;
}

namespace {

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(v.size())) - 1);
  return v[std::min(idx, v.size() - 1)];
}

}  // namespace

std::vector<RuleSummary> summarize(const std::vector<RunRecord>& records) {
  std::map<std::string, RuleSummary> by_rule;
  std::map<std::string, std::vector<double>> times;
  for (const RunRecord& r : records) {
    const std::string key = r.rule.to_string();
    RuleSummary& s = by_rule[key];
    s.rule = key;
    ++s.records;
    times[key].push_back(r.stats.seconds);
    switch (r.status) {
      case RecordStatus::kOk:
        ++s.ok;
        break;
      case RecordStatus::kBudgetExceeded:
        ++s.budget_exceeded;
        continue;
      case RecordStatus::kError:
        ++s.errors;
        continue;
    }
    if (r.metrics.winners.empty() ||
        r.metrics.per_winner.size() != r.metrics.winners.size()) {
      throw InvalidInput("malformed record: winner metrics missing for " +
                         r.instance.label());
    }
    for (const auto& [_, ok] : r.verdicts) s.violations += ok ? 0 : 1;
    for (const auto& [_, ok] : r.findings) s.findings += ok ? 0 : 1;
    if (!s.max_r_max || r.metrics.r_max > *s.max_r_max) {
      s.max_r_max = r.metrics.r_max;
    }
    ++s.gap_histogram[r.metrics.gap];
  }
  std::vector<RuleSummary> out;
  for (auto& [key, s] : by_rule) {
    s.p50_seconds = percentile(times[key], 0.5);
    s.p90_seconds = percentile(times[key], 0.9);
    s.max_seconds = percentile(times[key], 1.0);
    out.push_back(s);
  }
  return out;
}

std::string summary_csv(const std::vector<RuleSummary>& rows) {
  std::ostringstream os;
  os << "rule,records,ok,budget_exceeded,errors,violations,findings,"
        "max_r_max,max_r_max_float,gap_histogram,p50_seconds,p90_seconds,"
        "max_seconds\n";
  for (const RuleSummary& s : rows) {
    std::string hist;
    for (const auto& [gap, count] : s.gap_histogram) {
      if (!hist.empty()) hist += ";";
      hist += std::to_string(gap) + ":" + std::to_string(count);
    }
    os << s.rule << ',' << s.records << ',' << s.ok << ','
       << s.budget_exceeded << ',' << s.errors << ',' << s.violations << ','
       << s.findings << ','
       << (s.max_r_max ? s.max_r_max->to_string() : std::string()) << ','
       << std::fixed << std::setprecision(4)
       << (s.max_r_max ? s.max_r_max->to_double() : 0.0) << ',' << hist << ','
       << std::setprecision(6) << s.p50_seconds << ',' << s.p90_seconds << ','
       << s.max_seconds << '\n';
  }
  return os.str();
}

}  // namespace seqvote
