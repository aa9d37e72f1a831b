#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seqvote/acceptance.hpp"
#include "seqvote/experiments.hpp"
#include "seqvote/families.hpp"
#include "seqvote/graph_io.hpp"
#include "seqvote/spe_engine.hpp"

namespace seqvote::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Flags {
  std::string graph;
  std::string rule = "plurality";
  std::optional<int> k;
  std::string policy = "canonical";
  std::string name;
  std::uint64_t seed = 0;
  int n = 0;
  double p = 0;
  std::optional<int> cap;
  std::uint64_t max_nodes = 0;
  std::optional<double> max_seconds;
  int threads = 1;
  std::string out;
  std::string in;
  bool no_prune = false;
  bool stats = false;
  std::vector<std::string> only;
};

double env_budget() {
  const char* v = std::getenv("SEQVOTE_BUDGET_SECONDS");
  if (v == nullptr || *v == '\0') return 0;
  try {
    std::size_t used = 0;
    const double s = std::stod(v, &used);
    if (used != std::string(v).size() || s < 0) throw std::invalid_argument(v);
    return s;
  } catch (const std::exception&) {
    throw InvalidInput(std::string("bad SEQVOTE_BUDGET_SECONDS '") + v + "'");
  }
}

SolverOptions solver_options(const Flags& f) {
  SolverOptions o;
  o.prune = !f.no_prune;
  o.threads = f.threads;
  o.max_nodes = f.max_nodes;
  o.max_seconds = f.max_seconds ? *f.max_seconds : env_budget();
  return o;
}

// Writes to --out when given, else to stdout.
void emit(const Flags& f, std::ostream& out, const std::string& text) {
  if (f.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(f.out, std::ios::binary);
  if (!file) throw InvalidInput("cannot write '" + f.out + "'");
  file << text;
}

json agent_names(const ConfirmationNetwork& g,
                 const std::vector<AgentId>& agents) {
  json a = json::array();
  for (AgentId x : agents) a.push_back(g.name_of(x));
  return a;
}

json metrics_json(const ConfirmationNetwork& g, const InstanceMetrics& m) {
  json per = json::array();
  for (const WinnerMetrics& w : m.per_winner) {
    per.push_back({{"agent", g.name_of(w.agent)},
                   {"d", w.popularity},
                   {"max_in", w.max_in},
                   {"gap", w.gap},
                   {"ratio", w.ratio.to_string()}});
  }
  return {{"per_winner", per},
          {"gap", m.gap},
          {"r_min", m.r_min.to_string()},
          {"r_max", m.r_max.to_string()}};
}

json stats_json(const SolverStats& s) {
  return {{"nodes", s.nodes},
          {"cache_hits", s.cache_hits},
          {"transitions", s.transitions},
          {"pruned", s.pruned},
          {"cache_entries", s.cache_entries},
          {"seconds", s.seconds}};
}

int cmd_solve(const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.graph.empty()) throw InvalidInput("solve needs --graph");
  const ConfirmationNetwork g = load_network(f.graph);
  const Rule rule = Rule::parse(f.rule, f.k);
  const Policy policy = Policy::parse(f.policy, g);
  const SolverOptions opt = solver_options(f);

  const AchievableSet w = achievable_winners(g, rule, opt);
  const PolicyOutcome path = policy_spe(g, rule, policy, opt);
  err << "solved n=" << g.size() << " rule=" << rule.to_string()
      << " nodes=" << w.stats.nodes << " seconds=" << w.stats.seconds << "\n";

  json witnesses = json::array();
  for (const Witness& x : w.witnesses) {
    witnesses.push_back({{"winner", g.name_of(x.winner)},
                         {"ballot", agent_names(g, x.ballot.members())}});
  }
  json ballots = json::array();
  for (std::size_t j = 0; j < path.path.size(); ++j) {
    ballots.push_back({{"voter", g.name_of(g.voting_order()[j])},
                       {"ballot", agent_names(g, path.path[j].members())}});
  }
  json doc = {{"rule", rule.to_string()},
              {"winners", agent_names(g, w.agents())},
              {"witnesses", witnesses},
              {"policy", policy.to_string(g)},
              {"path", ballots},
              {"path_winner", g.name_of(path.winner)},
              {"metrics", metrics_json(g, metrics_from(g, w))}};
  if (f.stats) {
    doc["stats"] = {{"achievable", stats_json(w.stats)},
                    {"policy", stats_json(path.stats)}};
  }
  emit(f, out, doc.dump(2) + "\n");
  return kOk;
}

int cmd_family(const Flags& f, std::ostream& out, std::ostream&) {
  if (f.name.empty()) throw InvalidInput("family needs --name");
  const ConfirmationNetwork g =
      gen_paper_instance({f.name, f.k.value_or(2), {}});
  emit(f, out, network_to_json(g).dump(2) + "\n");
  return kOk;
}

int cmd_random(const Flags& f, std::ostream& out, std::ostream&) {
  RandomSpec spec;
  spec.n = f.n;
  spec.p = f.p;
  spec.max_out = f.cap;
  spec.seed = f.seed;
  emit(f, out, network_to_json(gen_random(spec)).dump(2) + "\n");
  return kOk;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(file), {}};
}

std::vector<std::string> nonblank_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      lines.push_back(line);
    }
  }
  return lines;
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(where + ": " + e.what());
  }
}

// A directory holds graph JSON files (taken in file name order); a file is
// JSONL with one instance descriptor per line.
std::vector<InstanceDescriptor> read_specs(const std::string& in) {
  std::vector<InstanceDescriptor> specs;
  if (fs::is_directory(in)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(in)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& p : files) {
      specs.push_back(InstanceDescriptor::inline_graph(load_network(p)));
    }
    return specs;
  }
  const auto lines = nonblank_lines(read_file(in));
  for (std::size_t j = 0; j < lines.size(); ++j) {
    const std::string where = in + ":" + std::to_string(j + 1);
    try {
      specs.push_back(InstanceDescriptor::from_json(parse_json(lines[j], where)));
    } catch (const InvalidInput& e) {
      throw InvalidInput(where + ": " + e.what());
    }
  }
  return specs;
}

int record_exit_code(const std::vector<RunRecord>& records) {
  bool budget = false;
  for (const RunRecord& r : records) {
    for (const auto& [name, held] : r.verdicts) {
      if (!held) return kVerificationFailed;
    }
    if (r.status == RecordStatus::kError) return kVerificationFailed;
    budget = budget || r.status == RecordStatus::kBudgetExceeded;
  }
  return budget ? kBudgetExceeded : kOk;
}

int cmd_metrics(const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.in.empty()) throw InvalidInput("metrics needs --in");
  const Rule rule = Rule::parse(f.rule, f.k);
  const auto specs = read_specs(f.in);
  BatchOptions opt;
  opt.solver = solver_options(f);
  opt.solver.threads = 1;
  opt.threads = f.threads;
  const auto records = run_batch(specs, rule, opt);
  std::string text;
  for (const RunRecord& r : records) {
    text += record_to_json(r, f.stats).dump();
    text += '\n';
  }
  emit(f, out, text);
  const int code = record_exit_code(records);
  err << records.size() << " records, exit " << code << "\n";
  return code;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream& err) {
  AcceptanceOptions opt;
  opt.only = f.only;
  opt.threads = f.threads;
  opt.log = &err;
  for (const std::string& id : f.only) {
    const auto ids = acceptance_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      throw InvalidInput("unknown criterion '" + id + "'");
    }
  }
  const auto results = run_acceptance(opt);
  std::string text = "criterion,result,title,detail\n";
  bool all = true;
  for (const CriterionResult& r : results) {
    text += r.id + "," + (r.pass ? "pass" : "fail") + "," +
            csv_field(r.title) + "," + csv_field(r.detail) + "\n";
    err << r.id << " took " << r.seconds << " s\n";
    all = all && r.pass;
  }
  emit(f, out, text);
  return all ? kOk : kVerificationFailed;
}

int cmd_report(const Flags& f, std::ostream& out, std::ostream&) {
  if (f.in.empty()) throw InvalidInput("report needs --in");
  const auto lines = nonblank_lines(read_file(f.in));
  std::vector<RunRecord> records;
  for (std::size_t j = 0; j < lines.size(); ++j) {
    const std::string where = f.in + ":" + std::to_string(j + 1);
    try {
      records.push_back(record_from_json(parse_json(lines[j], where)));
    } catch (const InvalidInput& e) {
      throw InvalidInput(where + ": " + e.what());
    }
  }
  emit(f, out, summary_csv(summarize(records)));
  return record_exit_code(records) == kVerificationFailed ? kVerificationFailed
                                                          : kOk;
}

void add_solver_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--max-nodes", f.max_nodes, "node budget (0 = none)");
  cmd->add_option("--max-seconds", f.max_seconds,
                  "time budget (default SEQVOTE_BUDGET_SECONDS)");
  cmd->add_option("--threads", f.threads, "worker count")
      ->check(CLI::Range(1, 1024));
  cmd->add_flag("--no-prune", f.no_prune, "disable pruning");
}

void add_rule_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--rule", f.rule, "plurality | approval | k-approval");
  cmd->add_option("--k", f.k, "k for k-approval");
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  Flags f;
  CLI::App app{"Sequential voting on confirmation networks"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "achievable winners and SPE path");
  solve->add_option("--graph", f.graph, "graph JSON")->required();
  add_rule_flags(solve, f);
  solve->add_option("--policy", f.policy, "canonical | bias:<agent>");
  solve->add_option("--out", f.out, "output file");
  solve->add_flag("--stats", f.stats, "include solver statistics");
  add_solver_flags(solve, f);

  auto* family = app.add_subcommand("family", "catalog instance");
  family->add_option("--name", f.name, "catalog name")->required();
  family->add_option("--k", f.k, "family parameter");
  family->add_option("--out", f.out, "output file");

  auto* random = app.add_subcommand("random", "seeded random graph");
  random->add_option("--n", f.n, "agents")->required();
  random->add_option("--p", f.p, "edge probability")->required();
  random->add_option("--cap", f.cap, "max out-degree");
  random->add_option("--seed", f.seed, "seed");
  random->add_option("--out", f.out, "output file");

  auto* metrics = app.add_subcommand("metrics", "batch metrics as JSONL");
  metrics->add_option("--in", f.in, "graph directory or descriptor JSONL")
      ->required();
  add_rule_flags(metrics, f);
  metrics->add_option("--out", f.out, "output file");
  metrics->add_flag("--stats", f.stats, "include solver statistics");
  add_solver_flags(metrics, f);

  auto* verify = app.add_subcommand("verify-paper", "acceptance suite");
  verify->add_option("--only", f.only, "criterion ids");
  verify->add_option("--threads", f.threads, "worker count")
      ->check(CLI::Range(1, 1024));
  verify->add_option("--out", f.out, "output file");

  auto* report = app.add_subcommand("report", "records JSONL to CSV summary");
  report->add_option("--in", f.in, "records JSONL")->required();
  report->add_option("--out", f.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (*solve) return cmd_solve(f, out, err);
    if (*family) return cmd_family(f, out, err);
    if (*random) return cmd_random(f, out, err);
    if (*metrics) return cmd_metrics(f, out, err);
    if (*verify) return cmd_verify(f, out, err);
    if (*report) return cmd_report(f, out, err);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace seqvote::cli
