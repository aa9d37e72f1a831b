// Reference computations written independently of the library internals.
#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "seqvote/network.hpp"
#include "seqvote/rational.hpp"

namespace oracle {

using seqvote::AgentId;
using seqvote::AgentMask;
using seqvote::ConfirmationNetwork;
using seqvote::Rational;

inline int popcount(AgentMask m) { return __builtin_popcountll(m); }

// Max scan over scores; first agent in `order` among the maxima.
inline AgentId scan_winner(const std::vector<int>& s,
                           const std::vector<AgentId>& order) {
  AgentId best = order.front();
  for (AgentId a : order) {
    if (s[a] > s[best]) best = a;
  }
  return best;
}

inline std::vector<AgentMask> ballots_for(AgentId voter, int n, int cap) {
  std::vector<AgentMask> out;
  for (AgentMask m = 0; m < (AgentMask{1} << n); ++m) {
    if (m & (AgentMask{1} << voter)) continue;
    if (popcount(m) > cap) continue;
    out.push_back(m);
  }
  return out;
}

// Utility of voter x for outcome w after casting ballot b:
// base(w) + eps^2 * confirmed - eps * unconfirmed, base in {0, 1/2, 1}.
inline Rational utility(const ConfirmationNetwork& g, AgentId x, AgentMask b,
                        AgentId w, const Rational& eps) {
  Rational base = w == x ? Rational(1) : g.has_edge(x, w) ? Rational(1, 2)
                                                           : Rational(0);
  int f = 0, u = 0;
  for (AgentId y = 0; y < g.size(); ++y) {
    if (!(b & (AgentMask{1} << y))) continue;
    if (g.has_edge(x, y)) {
      ++f;
    } else {
      ++u;
    }
  }
  return base + eps * eps * Rational(f) - eps * Rational(u);
}

// Set of SPE outcomes by recursion over complete histories. Scores are
// recounted from the history at every leaf.
class BruteForce {
 public:
  BruteForce(const ConfirmationNetwork& g, int cap)
      : g_(g), cap_(cap), eps_(1, 3 * g.size()) {}

  AgentMask solve() {
    std::vector<AgentMask> history;
    return rec(history);
  }

 private:
  AgentMask rec(std::vector<AgentMask>& history) {
    const int n = g_.size();
    if (static_cast<int>(history.size()) == n) {
      std::vector<int> s(n, 0);
      for (AgentMask b : history) {
        for (AgentId a = 0; a < n; ++a) {
          if (b & (AgentMask{1} << a)) ++s[a];
        }
      }
      return AgentMask{1} << scan_winner(s, g_.tiebreak_order());
    }
    const AgentId x = g_.voting_order()[history.size()];
    const auto ballots = ballots_for(x, n, cap_);
    std::vector<AgentMask> children;
    for (AgentMask b : ballots) {
      history.push_back(b);
      children.push_back(rec(history));
      history.pop_back();
    }
    // w via ballot b is an SPE outcome iff no deviation b' guarantees x
    // more than u(b, w) against every continuation outcome of b'.
    AgentMask out = 0;
    for (std::size_t j = 0; j < ballots.size(); ++j) {
      for (AgentId w = 0; w < n; ++w) {
        if (!(children[j] & (AgentMask{1} << w))) continue;
        const Rational u = utility(g_, x, ballots[j], w, eps_);
        bool ok = true;
        for (std::size_t d = 0; d < ballots.size() && ok; ++d) {
          bool some_low = false;
          for (AgentId v = 0; v < n; ++v) {
            if ((children[d] & (AgentMask{1} << v)) &&
                utility(g_, x, ballots[d], v, eps_) <= u) {
              some_low = true;
            }
          }
          ok = some_low;
        }
        if (ok) out |= AgentMask{1} << w;
      }
    }
    return out;
  }

  const ConfirmationNetwork& g_;
  int cap_;
  Rational eps_;
};

// A random network with random orders, drawn without the library generator.
inline ConfirmationNetwork random_network(std::mt19937_64& rng, int n,
                                          double p, int max_out = 64) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<seqvote::Edge> edges;
  for (AgentId a = 0; a < n; ++a) {
    int out = 0;
    for (AgentId b = 0; b < n; ++b) {
      if (a != b && out < max_out && u(rng) < p) {
        edges.push_back({a, b});
        ++out;
      }
    }
  }
  std::vector<AgentId> vo(n), tb(n);
  for (int j = 0; j < n; ++j) vo[j] = tb[j] = j;
  std::shuffle(vo.begin(), vo.end(), rng);
  std::shuffle(tb.begin(), tb.end(), rng);
  return ConfirmationNetwork(n, edges, vo, tb);
}

}  // namespace oracle
