#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqvote/rational.hpp"

namespace seqvote {

using AgentId = int;

// Bit set of agents. Networks handled by the solver have at most 64 agents.
using AgentMask = std::uint64_t;
inline constexpr int kMaxAgents = 64;

inline constexpr AgentMask agent_bit(AgentId a) { return AgentMask{1} << a; }

std::vector<AgentId> mask_to_agents(AgentMask mask);
AgentMask agents_to_mask(const std::vector<AgentId>& agents);

class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  AgentId src = 0;
  AgentId dst = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct DegreeProfile {
  std::vector<int> in_degree;
  std::vector<int> out_degree;
  int max_in = 0;
  int max_out = 0;
};

// A directed confirmation network over agents 0..n-1 together with the
// voting order and the tie-breaking order. Immutable once constructed.
class ConfirmationNetwork {
 public:
  // Throws InvalidInput on self-loops, duplicate edges, out-of-range ids or
  // orders that are not permutations. Empty orders mean identity.
  ConfirmationNetwork(int n, std::vector<Edge> edges,
                      std::vector<AgentId> voting_order = {},
                      std::vector<AgentId> tiebreak_order = {},
                      std::vector<std::string> names = {});

  int size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<AgentId>& voting_order() const { return voting_order_; }
  const std::vector<AgentId>& tiebreak_order() const { return tiebreak_order_; }
  // Position of each agent in the tie-breaking order (0 = highest priority).
  const std::vector<int>& tiebreak_rank() const { return tiebreak_rank_; }
  const std::vector<std::string>& names() const { return names_; }

  bool has_edge(AgentId src, AgentId dst) const;
  // Agents confirmed by `a`, and agents confirming `a`.
  AgentMask out_mask(AgentId a) const;
  AgentMask in_mask(AgentId a) const;

  // Display name, or the decimal index when the network carries no names.
  std::string name_of(AgentId a) const;
  // Lookup by display name (falls back to decimal index). Throws InvalidInput.
  AgentId id_of(const std::string& name) const;

  void check_agent(AgentId a) const;

  friend bool operator==(const ConfirmationNetwork& a,
                         const ConfirmationNetwork& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ &&
           a.voting_order_ == b.voting_order_ &&
           a.tiebreak_order_ == b.tiebreak_order_ && a.names_ == b.names_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;  // sorted
  std::vector<AgentId> voting_order_;
  std::vector<AgentId> tiebreak_order_;
  std::vector<int> tiebreak_rank_;
  std::vector<std::string> names_;
  std::vector<AgentMask> out_;
  std::vector<AgentMask> in_;
};

int popularity(const ConfirmationNetwork& g, AgentId a);
std::vector<AgentId> confirmers(const ConfirmationNetwork& g, AgentId a);
DegreeProfile degree_profile(const ConfirmationNetwork& g);

// The network without the out-edges of `w`; orders and names unchanged.
ConfirmationNetwork remove_out_edges(const ConfirmationNetwork& g, AgentId w);

// Maximum in-degree of the network with `w`'s out-edges removed.
int max_in_without(const ConfirmationNetwork& g, AgentId w);

// Popularity shortfall of `w` against the most popular agent, ignoring w's
// own confirmations. Never negative.
int additive_gap(const ConfirmationNetwork& g, AgentId w);

// max_in_without(g, w) / popularity(g, w). 0/0 is 1; x/0 with x > 0 is +inf.
ExtRational ratio(const ConfirmationNetwork& g, AgentId w);

}  // namespace seqvote
