#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "seqvote");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = seqvote::cli::dispatch(static_cast<int>(argv.size()),
                                          argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "seqvote_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("family then solve") {
  const auto dir = scratch_dir();
  const std::string g1 = (dir / "e1.json").string();
  REQUIRE(run({"family", "--name", "example1", "--out", g1}).code == 0);
  const auto p = run({"solve", "--graph", g1, "--rule", "plurality"});
  REQUIRE(p.code == 0);
  const json doc = json::parse(p.out);
  CHECK(doc["winners"] == json::array({"1"}));
  CHECK(doc["path"][0]["ballot"] == json::array());
  CHECK(doc["path_winner"] == "1");
  CHECK_FALSE(doc.contains("stats"));

  const std::string g2 = (dir / "e2.json").string();
  REQUIRE(run({"family", "--name", "example2", "--out", g2}).code == 0);
  const auto a = run({"solve", "--graph", g2, "--rule", "approval"});
  CHECK(json::parse(a.out)["winners"] == json::array({"4"}));

  // Output does not depend on the worker count.
  CHECK(run({"solve", "--graph", g2, "--rule", "approval", "--threads", "4"})
            .out == a.out);
  CHECK(json::parse(run({"solve", "--graph", g2, "--stats"}).out)
            .contains("stats"));
}

TEST_CASE("edgeless graph elects the first tie-break agent") {
  const auto dir = scratch_dir();
  const std::string g = (dir / "empty.json").string();
  std::ofstream(g) << R"({"n":3,"edges":[],"tiebreak_order":[2,0,1]})";
  for (const char* rule : {"plurality", "approval"}) {
    const auto r = run({"solve", "--graph", g, "--rule", rule});
    CHECK(json::parse(r.out)["winners"] == json::array({"2"}));
  }
  const auto k = run({"solve", "--graph", g, "--rule", "k-approval", "--k", "2"});
  CHECK(json::parse(k.out)["rule"] == "k-approval:2");
}

TEST_CASE("random is reproducible") {
  const auto a = run({"random", "--n", "6", "--p", "0.4", "--seed", "7"});
  const auto b = run({"random", "--n", "6", "--p", "0.4", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto c = run({"random", "--n", "8", "--p", "0.9", "--cap", "1",
                      "--seed", "3"});
  const json g = json::parse(c.out);
  std::map<int, int> out;
  for (const auto& e : g["edges"]) ++out[e[0].get<int>()];
  for (const auto& [agent, count] : out) CHECK(count <= 1);
}

TEST_CASE("metrics and report") {
  const auto dir = scratch_dir();
  const std::string specs = (dir / "specs.jsonl").string();
  {
    std::ofstream f(specs);
    f << R"({"kind":"catalog","name":"example1","k":2})" << "\n";
    f << R"({"kind":"random","n":4,"p":0.5,"seed":3,"max_out":null})" << "\n";
  }
  const std::string recs = (dir / "records.jsonl").string();
  const auto m = run({"metrics", "--in", specs, "--rule", "approval",
                      "--out", recs});
  CHECK(m.code == 0);
  const auto again = run({"metrics", "--in", specs, "--rule", "approval",
                          "--threads", "2"});
  std::ifstream in(recs);
  const std::string stored((std::istreambuf_iterator<char>(in)), {});
  CHECK(again.out == stored);

  const auto rep = run({"report", "--in", recs});
  CHECK(rep.code == 0);
  CHECK(rep.out.rfind("rule,records,", 0) == 0);
  CHECK(rep.out.find("\napproval,2,2,") != std::string::npos);

  // A directory of graphs is read in file name order.
  const fs::path graphs = dir / "graphs";
  fs::create_directories(graphs);
  run({"family", "--name", "example2", "--out", (graphs / "b.json").string()});
  run({"family", "--name", "example1", "--out", (graphs / "a.json").string()});
  const auto d = run({"metrics", "--in", graphs.string()});
  CHECK(d.code == 0);
  std::istringstream lines(d.out);
  std::string first;
  std::getline(lines, first);
  CHECK(json::parse(first)["instance"]["graph"]["n"] == 5);
}

TEST_CASE("exit codes") {
  const auto dir = scratch_dir();
  CHECK(run({"solve", "--graph", (dir / "missing.json").string()}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"family", "--name", "nope"}).code == 1);
  CHECK(run({"solve"}).code == 1);

  const std::string h = (dir / "h2.json").string();
  run({"family", "--name", "h_k", "--k", "2", "--out", h});
  CHECK(run({"solve", "--graph", h, "--rule", "approval", "--max-nodes", "10"})
            .code == 2);
  CHECK(run({"solve", "--graph", h, "--rule", "approval", "--policy",
             "bias:nobody"})
            .code == 1);

  const std::string bad = (dir / "bad.jsonl").string();
  std::ofstream(bad) << "{\"v\":1}\n";
  CHECK(run({"report", "--in", bad}).code == 1);
  CHECK(run({"verify-paper", "--only", "99"}).code == 1);
}

TEST_CASE("budget from the environment") {
  const auto dir = scratch_dir();
  const std::string h = (dir / "h2.json").string();
  run({"family", "--name", "h_k", "--k", "2", "--out", h});
  setenv("SEQVOTE_BUDGET_SECONDS", "0.000000001", 1);
  const auto r = run({"solve", "--graph", h, "--rule", "approval",
                      "--no-prune"});
  setenv("SEQVOTE_BUDGET_SECONDS", "bogus", 1);
  const auto bad = run({"solve", "--graph", h});
  unsetenv("SEQVOTE_BUDGET_SECONDS");
  CHECK(r.code == 2);
  CHECK(bad.code == 1);
}

TEST_CASE("verify-paper prints a table") {
  const auto r = run({"verify-paper", "--only", "7", "--only", "1a"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("criterion,result,title,detail\n1a,pass,", 0) == 0);
  CHECK(r.out.find("\n7,pass,") != std::string::npos);
}
