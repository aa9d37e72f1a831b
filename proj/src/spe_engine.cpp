#include "seqvote/spe_engine.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <mutex>

#include <absl/container/flat_hash_map.h>
#include <absl/hash/hash.h>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace seqvote {
namespace {

using Clock = std::chrono::steady_clock;

// Score entry of an agent that can no longer win from this subgame.
constexpr std::uint8_t kDead = 0xFF;

// Preference codes: level in the high bits, then (n - g), then f. Comparing
// codes as integers is comparing PrefKeys lexicographically.
constexpr int kNegInf = -1;
inline int bonus_code(int n, int f, int g) { return ((n - g) << 8) | f; }
inline int pref_code(int level, int bonus) { return (level << 16) | bonus; }
inline int code_level(int code) { return code >> 16; }
inline int code_bonus(int code) { return code & 0xFFFF; }

struct BallotInfo {
  AgentMask mask = 0;
  int size = 0;
  int bonus = 0;
  int canon = 0;  // position in canonical enumeration
};

template <class V>
class ShardedCache {
 public:
  bool find(const std::string& key, V* out) {
    Shard& sh = shard(key);
    std::lock_guard<std::mutex> lock(sh.mu);
    auto it = sh.map.find(key);
    if (it == sh.map.end()) return false;
    *out = it->second;
    return true;
  }

  // First insert wins; every writer computes the same value.
  void insert(const std::string& key, const V& value) {
    Shard& sh = shard(key);
    std::lock_guard<std::mutex> lock(sh.mu);
    sh.map.try_emplace(key, value);
  }

  std::uint64_t size() {
    std::uint64_t total = 0;
    for (Shard& sh : shards_) {
      std::lock_guard<std::mutex> lock(sh.mu);
      total += sh.map.size();
    }
    return total;
  }

 private:
  struct Shard {
    std::mutex mu;
    absl::flat_hash_map<std::string, V> map;
  };

  Shard& shard(const std::string& key) {
    return shards_[absl::Hash<std::string>{}(key) % shards_.size()];
  }

  std::array<Shard, 64> shards_;
};

struct PolicyValue {
  AgentId winner = 0;
  AgentMask ballot = 0;
};

// One solve: game tables, budgets, counters and the memo cache.
class Solver {
 public:
  Solver(const ConfirmationNetwork& g, const Rule& rule,
         const SolverOptions& options)
      : g_(g), n_(g.size()), cap_(rule.cap_for(g.size())), opt_(options) {
    if (n_ > 32) {
      throw InvalidInput("solver supports at most 32 agents, got " +
                         std::to_string(n_));
    }
    order_ = g.voting_order();
    rank_ = g.tiebreak_rank();
    voted_before_.assign(n_ + 1, 0);
    for (int i = 0; i < n_; ++i) {
      voted_before_[i + 1] = voted_before_[i] | agent_bit(order_[i]);
    }
    conf_.resize(n_);
    for (AgentId a = 0; a < n_; ++a) conf_[a] = g.out_mask(a);
    all_ = n_ == 64 ? ~AgentMask{0} : agent_bit(n_) - 1;
    ballots_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      const AgentId x = order_[i];
      const std::vector<Ballot> legal = legal_ballots(rule, x, n_);
      auto& infos = ballots_[i];
      infos.reserve(legal.size());
      for (int c = 0; c < static_cast<int>(legal.size()); ++c) {
        const AgentMask m = legal[c].approved;
        const int f = std::popcount(m & conf_[x]);
        const int gg = std::popcount(m & ~conf_[x]);
        infos.push_back({m, f + gg, bonus_code(n_, f, gg), c});
      }
      if (opt_.prune) {
        // Best bonus first so that threshold cut-offs fire early.
        std::stable_sort(infos.begin(), infos.end(),
                         [](const BallotInfo& a, const BallotInfo& b) {
                           return a.bonus > b.bonus;
                         });
      }
    }
    start_ = Clock::now();
  }

  int n() const { return n_; }

  std::string encode(int i, const std::uint8_t* s) const {
    std::string key(static_cast<std::size_t>(n_) + 1, '\0');
    key[0] = static_cast<char>(i);
    for (int a = 0; a < n_; ++a) key[a + 1] = static_cast<char>(s[a]);
    return key;
  }

  // Converts a public state into the solver's internal representation.
  std::array<std::uint8_t, 32> load(const SubgameState& st) const {
    if (st.i < 0 || st.i > n_ ||
        static_cast<int>(st.scores.size()) != n_) {
      throw InvalidInput("subgame state does not match the network");
    }
    std::array<std::uint8_t, 32> s{};
    for (int a = 0; a < n_; ++a) {
      if (st.scores[a] < 0 || st.scores[a] > st.i) {
        throw InvalidInput("subgame state has an impossible score for agent " +
                           std::to_string(a));
      }
      s[a] = static_cast<std::uint8_t>(st.scores[a]);
    }
    if (opt_.prune) normalize(st.i, s.data());
    return s;
  }

  // Marks agents that cannot reach the top any more and shifts the live
  // scores so that the smallest is zero.
  void normalize(int i, std::uint8_t* s) const {
    const int remaining = n_ - i;
    int best = -1;
    for (AgentId a = 0; a < n_; ++a) {
      if (s[a] == kDead) continue;
      if (best < 0 || s[a] > s[best] ||
          (s[a] == s[best] && rank_[a] < rank_[best])) {
        best = a;
      }
    }
    int low = 255;
    for (AgentId a = 0; a < n_; ++a) {
      if (s[a] == kDead || a == best) continue;
      const int reach =
          s[a] + remaining - ((voted_before_[i] & agent_bit(a)) ? 0 : 1);
      if (reach < s[best] || (reach == s[best] && rank_[best] < rank_[a])) {
        s[a] = kDead;
      } else {
        low = std::min<int>(low, s[a]);
      }
    }
    low = std::min<int>(low, s[best]);
    if (low > 0) {
      for (AgentId a = 0; a < n_; ++a) {
        if (s[a] != kDead) s[a] = static_cast<std::uint8_t>(s[a] - low);
      }
    }
  }

  void child(int i, const std::uint8_t* s, AgentMask ballot,
             std::uint8_t* out) const {
    std::copy(s, s + n_, out);
    for (AgentMask m = ballot; m != 0; m &= m - 1) {
      const int a = std::countr_zero(m);
      if (out[a] != kDead) ++out[a];
    }
    if (opt_.prune) normalize(i + 1, out);
  }

  AgentId terminal_winner(const std::uint8_t* s) const {
    int best = -1;
    for (AgentId a = 0; a < n_; ++a) {
      if (s[a] == kDead) continue;
      if (best < 0 || s[a] > s[best] ||
          (s[a] == s[best] && rank_[a] < rank_[best])) {
        best = a;
      }
    }
    return best;
  }

  AgentMask live_mask(const std::uint8_t* s) const {
    AgentMask m = 0;
    for (AgentId a = 0; a < n_; ++a) {
      if (s[a] != kDead) m |= agent_bit(a);
    }
    return m;
  }

  int min_level(AgentId x, AgentMask c) const {
    if (c & ~(conf_[x] | agent_bit(x))) return 0;
    if (c & conf_[x]) return 1;
    return 2;
  }

  int max_level(AgentId x, AgentMask c) const {
    if (c & agent_bit(x)) return 2;
    if (c & conf_[x]) return 1;
    return 0;
  }

  AgentMask at_least(AgentId x, int level) const {
    switch (level) {
      case 0:
        return all_;
      case 1:
        return conf_[x] | agent_bit(x);
      case 2:
        return agent_bit(x);
      default:
        return 0;
    }
  }

  void charge_node() {
    const std::uint64_t count = nodes_.fetch_add(1, std::memory_order_relaxed);
    if (opt_.max_nodes != 0 && count >= opt_.max_nodes) {
      throw BudgetExceeded("node budget of " + std::to_string(opt_.max_nodes) +
                           " subgames exceeded");
    }
    if (opt_.max_seconds > 0 && (count & 1023) == 0) {
      const double elapsed =
          std::chrono::duration<double>(Clock::now() - start_).count();
      if (elapsed > opt_.max_seconds) {
        throw BudgetExceeded("time budget of " +
                             std::to_string(opt_.max_seconds) +
                             " s exceeded");
      }
    }
  }

  // Ballots that can be dropped before solving their child: those naming an
  // unconfirmed dead agent, and those leaving out a confirmed dead agent
  // while below the cap. Both have a strictly better twin with the same
  // child subgame.
  bool dominated(const BallotInfo& b, AgentMask forbidden,
                 AgentMask wanted) const {
    if (b.mask & forbidden) return true;
    return b.size < cap_ && (wanted & ~b.mask) != 0;
  }

  struct Seen {
    int bonus;
    int canon;
    AgentMask winners;
  };

  AgentMask solve_set(int i, const std::uint8_t* s,
                      std::vector<Seen>* root_seen = nullptr) {
    if (i == n_) return agent_bit(terminal_winner(s));
    std::string key;
    if (opt_.memoize && root_seen == nullptr) {
      key = encode(i, s);
      AgentMask cached = 0;
      if (set_cache_.find(key, &cached)) {
        hits_.fetch_add(1, std::memory_order_relaxed);
        return cached;
      }
    }
    charge_node();

    const AgentId x = order_[i];
    AgentMask forbidden = 0, wanted = 0;
    if (opt_.prune) {
      const AgentMask dead = all_ & ~live_mask(s);
      forbidden = dead & ~conf_[x];
      wanted = dead & conf_[x];
    }
    std::vector<Seen> seen;
    int threshold = kNegInf;
    std::array<std::uint8_t, 32> next{};
    const auto& infos = ballots_[i];
    for (std::size_t k = 0; k < infos.size(); ++k) {
      const BallotInfo& b = infos[k];
      if (opt_.prune) {
        if (pref_code(2, b.bonus) < threshold) {
          pruned_.fetch_add(infos.size() - k, std::memory_order_relaxed);
          break;
        }
        if (dominated(b, forbidden, wanted)) {
          pruned_.fetch_add(1, std::memory_order_relaxed);
          continue;
        }
      }
      child(i, s, b.mask, next.data());
      if (opt_.prune &&
          pref_code(max_level(x, live_mask(next.data())), b.bonus) <
              threshold) {
        pruned_.fetch_add(1, std::memory_order_relaxed);
        continue;
      }
      transitions_.fetch_add(1, std::memory_order_relaxed);
      const AgentMask c = solve_set(i + 1, next.data());
      threshold = std::max(threshold, pref_code(min_level(x, c), b.bonus));
      seen.push_back({b.bonus, b.canon, c});
    }

    AgentMask result = 0;
    const int t_level = code_level(threshold);
    const int t_bonus = code_bonus(threshold);
    for (const Seen& e : seen) {
      const int need = e.bonus >= t_bonus ? t_level : t_level + 1;
      result |= e.winners & at_least(x, need);
    }
    if (root_seen != nullptr) {
      for (Seen& e : seen) {
        const int need = e.bonus >= t_bonus ? t_level : t_level + 1;
        e.winners &= at_least(x, need);
      }
      *root_seen = std::move(seen);
    }
    if (opt_.memoize && root_seen == nullptr) set_cache_.insert(key, result);
    return result;
  }

  PolicyValue solve_policy(int i, const std::uint8_t* s, const Policy& policy) {
    if (i == n_) return {terminal_winner(s), 0};
    std::string key;
    if (opt_.memoize) {
      key = encode(i, s);
      PolicyValue cached;
      if (policy_cache_.find(key, &cached)) {
        hits_.fetch_add(1, std::memory_order_relaxed);
        return cached;
      }
    }
    charge_node();

    const AgentId x = order_[i];
    AgentMask forbidden = 0, wanted = 0;
    if (opt_.prune) {
      const AgentMask dead = all_ & ~live_mask(s);
      forbidden = dead & ~conf_[x];
      wanted = dead & conf_[x];
    }
    const bool biased = policy.kind == Policy::Kind::kBiasToward;
    const AgentMask target = biased ? agent_bit(policy.target) : 0;
    int best = kNegInf;
    const BallotInfo* chosen = nullptr;
    AgentId chosen_winner = 0;
    std::array<std::uint8_t, 32> next{};
    const auto& infos = ballots_[i];
    for (std::size_t k = 0; k < infos.size(); ++k) {
      const BallotInfo& b = infos[k];
      if (opt_.prune) {
        if (pref_code(2, b.bonus) < best) {
          pruned_.fetch_add(infos.size() - k, std::memory_order_relaxed);
          break;
        }
        if (dominated(b, forbidden, wanted)) {
          pruned_.fetch_add(1, std::memory_order_relaxed);
          continue;
        }
      }
      child(i, s, b.mask, next.data());
      if (opt_.prune &&
          pref_code(max_level(x, live_mask(next.data())), b.bonus) < best) {
        pruned_.fetch_add(1, std::memory_order_relaxed);
        continue;
      }
      transitions_.fetch_add(1, std::memory_order_relaxed);
      const PolicyValue v = solve_policy(i + 1, next.data(), policy);
      const int level = v.winner == x ? 2
                        : (conf_[x] & agent_bit(v.winner)) ? 1
                                                           : 0;
      const int code = pref_code(level, b.bonus);
      bool take = code > best;
      if (code == best) {
        const bool has = (b.mask & target) != 0;
        const bool chosen_has = (chosen->mask & target) != 0;
        take = biased && has != chosen_has ? has : b.canon < chosen->canon;
      }
      if (take) {
        best = code;
        chosen = &b;
        chosen_winner = v.winner;
      }
    }
    const PolicyValue result{chosen_winner, chosen->mask};
    if (opt_.memoize) policy_cache_.insert(key, result);
    return result;
  }

  // Solves every distinct subgame a few plies below the root in parallel so
  // that the sequential pass afterwards mostly hits the cache.
  void prefetch(int i0, const std::uint8_t* root, bool policy_mode,
                const Policy& policy) {
#ifdef _OPENMP
    if (opt_.threads <= 1 || !opt_.memoize) return;
    struct Frontier {
      int i;
      std::array<std::uint8_t, 32> s;
    };
    std::vector<Frontier> level{{i0, {}}};
    std::copy(root, root + n_, level[0].s.begin());
    const std::size_t want = static_cast<std::size_t>(opt_.threads) * 16;
    while (level.size() < want && level[0].i < n_ - 1) {
      std::vector<Frontier> expanded;
      absl::flat_hash_map<std::string, bool> unique;
      for (const Frontier& f : level) {
        const AgentId x = order_[f.i];
        AgentMask forbidden = 0, wanted = 0;
        if (opt_.prune) {
          const AgentMask dead = all_ & ~live_mask(f.s.data());
          forbidden = dead & ~conf_[x];
          wanted = dead & conf_[x];
        }
        for (const BallotInfo& b : ballots_[f.i]) {
          if (opt_.prune && dominated(b, forbidden, wanted)) continue;
          Frontier next{f.i + 1, {}};
          child(f.i, f.s.data(), b.mask, next.s.data());
          if (unique.try_emplace(encode(next.i, next.s.data()), true).second) {
            expanded.push_back(next);
          }
        }
      }
      level = std::move(expanded);
    }
    std::exception_ptr failure;
    std::mutex failure_mu;
#pragma omp parallel for schedule(dynamic, 1) num_threads(opt_.threads)
    for (std::size_t k = 0; k < level.size(); ++k) {
      {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (failure) continue;
      }
      try {
        if (policy_mode) {
          solve_policy(level[k].i, level[k].s.data(), policy);
        } else {
          solve_set(level[k].i, level[k].s.data());
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
#else
    (void)i0;
    (void)root;
    (void)policy_mode;
    (void)policy;
#endif
  }

  SolverStats stats() {
    SolverStats st;
    st.nodes = nodes_.load();
    st.cache_hits = hits_.load();
    st.transitions = transitions_.load();
    st.pruned = pruned_.load();
    st.cache_entries = set_cache_.size() + policy_cache_.size();
    st.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return st;
  }

 private:
  const ConfirmationNetwork& g_;
  int n_;
  int cap_;
  SolverOptions opt_;
  std::vector<AgentId> order_;
  std::vector<int> rank_;
  std::vector<AgentMask> voted_before_;
  std::vector<AgentMask> conf_;
  AgentMask all_ = 0;
  std::vector<std::vector<BallotInfo>> ballots_;
  Clock::time_point start_;

  ShardedCache<AgentMask> set_cache_;
  ShardedCache<PolicyValue> policy_cache_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> transitions_{0};
  std::atomic<std::uint64_t> pruned_{0};
};

}  // namespace

SubgameState SubgameState::initial(const ConfirmationNetwork& g) {
  return {0, ScoreVector(g.size(), 0)};
}

SubgameState SubgameState::after(const ConfirmationNetwork& g,
                                 const std::vector<Ballot>& history) {
  if (static_cast<int>(history.size()) > g.size()) {
    throw InvalidInput("history is longer than the voting order");
  }
  SubgameState st = initial(g);
  for (const Ballot& b : history) {
    const AgentId voter = g.voting_order()[st.i];
    if (b.contains(voter) || (b.approved >> g.size()) != 0) {
      throw InvalidInput("illegal ballot in history for voter " +
                         g.name_of(voter));
    }
    st.scores = apply_ballot(std::move(st.scores), b);
    ++st.i;
  }
  return st;
}

int AchievableSet::size() const { return std::popcount(winners); }

AchievableSet achievable_winners_from(const ConfirmationNetwork& g,
                                      const Rule& rule,
                                      const SubgameState& state,
                                      const SolverOptions& options) {
  Solver solver(g, rule, options);
  auto root = solver.load(state);
  solver.prefetch(state.i, root.data(), false, Policy{});
  AchievableSet out;
  std::vector<Solver::Seen> seen;
  out.winners = solver.solve_set(state.i, root.data(), &seen);
  std::sort(seen.begin(), seen.end(),
            [](const auto& a, const auto& b) { return a.canon < b.canon; });
  const auto legal = state.i < g.size()
                         ? legal_ballots(rule, g.voting_order()[state.i],
                                         g.size())
                         : std::vector<Ballot>{};
  for (AgentId w : mask_to_agents(out.winners)) {
    for (const auto& e : seen) {
      if (e.winners & agent_bit(w)) {
        out.witnesses.push_back({w, legal[e.canon]});
        break;
      }
    }
  }
  out.stats = solver.stats();
  return out;
}

AchievableSet achievable_winners(const ConfirmationNetwork& g, const Rule& rule,
                                 const SolverOptions& options) {
  return achievable_winners_from(g, rule, SubgameState::initial(g), options);
}

Policy Policy::parse(const std::string& text, const ConfirmationNetwork& g) {
  if (text == "canonical") return canonical();
  if (text.rfind("bias:", 0) == 0) return bias_toward(g.id_of(text.substr(5)));
  throw InvalidInput("unknown policy '" + text +
                     "' (expected canonical or bias:<agent>)");
}

std::string Policy::to_string(const ConfirmationNetwork& g) const {
  return kind == Kind::kCanonical ? "canonical" : "bias:" + g.name_of(target);
}

PolicyOutcome policy_spe(const ConfirmationNetwork& g, const Rule& rule,
                         const Policy& policy, const SolverOptions& options) {
  if (policy.kind == Policy::Kind::kBiasToward) g.check_agent(policy.target);
  Solver solver(g, rule, options);
  auto s = solver.load(SubgameState::initial(g));
  solver.prefetch(0, s.data(), true, policy);
  PolicyOutcome out;
  std::array<std::uint8_t, 32> next{};
  for (int i = 0; i < g.size(); ++i) {
    const PolicyValue v = solver.solve_policy(i, s.data(), policy);
    out.path.push_back(Ballot{v.ballot});
    solver.child(i, s.data(), v.ballot, next.data());
    s = next;
  }
  out.winner = solver.terminal_winner(s.data());
  out.stats = solver.stats();
  return out;
}

int potential(const SubgameState& state, const ConfirmationNetwork& g,
              AgentId a) {
  g.check_agent(a);
  if (state.i < 0 || state.i > g.size() ||
      static_cast<int>(state.scores.size()) != g.size()) {
    throw InvalidInput("subgame state does not match the network");
  }
  int rho = state.scores[a];
  for (int pos = state.i; pos < g.size(); ++pos) {
    if (g.has_edge(g.voting_order()[pos], a)) ++rho;
  }
  return rho;
}

LowOutdegreeReport verify_low_outdegree_subgame(const SubgameState& state,
                                                const ConfirmationNetwork& g,
                                                const Rule& rule,
                                                const SolverOptions& options) {
  for (int pos = state.i; pos < g.size(); ++pos) {
    const AgentId v = g.voting_order()[pos];
    if (std::popcount(g.out_mask(v)) > 1) {
      throw InvalidInput("remaining voter " + g.name_of(v) +
                         " confirms more than one agent");
    }
  }
  const AchievableSet w = achievable_winners_from(g, rule, state, options);
  LowOutdegreeReport r;
  r.achievable = w.size();
  r.unique = r.achievable == 1;
  r.winner = mask_to_agents(w.winners).front();
  std::vector<int> rho(g.size());
  for (AgentId a = 0; a < g.size(); ++a) {
    rho[a] = potential(state, g, a);
    r.max_potential = std::max(r.max_potential, rho[a]);
  }
  for (AgentId a = 0; a < g.size(); ++a) {
    if (rho[a] == r.max_potential) r.top_agents.push_back(a);
  }
  r.winner_potential = rho[r.winner];
  // E(G') keeps only out-edges of voters still to vote.
  const AgentMask remaining = [&] {
    AgentMask m = 0;
    for (int pos = state.i; pos < g.size(); ++pos) {
      m |= agent_bit(g.voting_order()[pos]);
    }
    return m;
  }();
  const bool winner_remaining = (remaining & agent_bit(r.winner)) != 0;
  r.bound_holds = true;
  for (AgentId m : r.top_agents) {
    const int indicator =
        winner_remaining && m != r.winner && g.has_edge(r.winner, m) ? 1 : 0;
    if (r.max_potential - r.winner_potential > indicator) {
      r.bound_holds = false;
      r.detail = "P - rho(" + g.name_of(r.winner) + ") = " +
                 std::to_string(r.max_potential - r.winner_potential) +
                 " exceeds indicator for top agent " + g.name_of(m);
      break;
    }
  }
  if (!r.unique) {
    r.detail = "subgame has " + std::to_string(r.achievable) +
               " achievable winners";
  }
  r.pass = r.unique && r.bound_holds;
  return r;
}

}  // namespace seqvote
