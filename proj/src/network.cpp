#include "seqvote/network.hpp"

#include <algorithm>
#include <bit>

namespace seqvote {
namespace {

std::vector<AgentId> checked_order(int n, std::vector<AgentId> order,
                                   const char* what) {
  if (order.empty()) {
    order.resize(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    return order;
  }
  if (static_cast<int>(order.size()) != n) {
    throw InvalidInput(std::string(what) + " has " +
                       std::to_string(order.size()) + " entries, expected " +
                       std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (AgentId a : order) {
    if (a < 0 || a >= n) {
      throw InvalidInput(std::string(what) + " contains invalid agent " +
                         std::to_string(a));
    }
    if (seen[a]) {
      throw InvalidInput(std::string(what) + " repeats agent " +
                         std::to_string(a));
    }
    seen[a] = true;
  }
  return order;
}

}  // namespace

std::vector<AgentId> mask_to_agents(AgentMask mask) {
  std::vector<AgentId> out;
  while (mask != 0) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

AgentMask agents_to_mask(const std::vector<AgentId>& agents) {
  AgentMask m = 0;
  for (AgentId a : agents) m |= agent_bit(a);
  return m;
}

ConfirmationNetwork::ConfirmationNetwork(int n, std::vector<Edge> edges,
                                         std::vector<AgentId> voting_order,
                                         std::vector<AgentId> tiebreak_order,
                                         std::vector<std::string> names)
    : n_(n), edges_(std::move(edges)), names_(std::move(names)) {
  if (n < 1) throw InvalidInput("network must have at least one agent");
  if (n > kMaxAgents) {
    throw InvalidInput("network has " + std::to_string(n) +
                       " agents; at most " + std::to_string(kMaxAgents) +
                       " are supported");
  }
  if (!names_.empty() && static_cast<int>(names_.size()) != n) {
    throw InvalidInput("names has " + std::to_string(names_.size()) +
                       " entries, expected " + std::to_string(n));
  }
  out_.assign(n, 0);
  in_.assign(n, 0);
  for (const Edge& e : edges_) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw InvalidInput("edge [" + std::to_string(e.src) + "," +
                         std::to_string(e.dst) + "] references an invalid agent");
    }
    if (e.src == e.dst) {
      throw InvalidInput("self-loop on agent " + std::to_string(e.src));
    }
    if (out_[e.src] & agent_bit(e.dst)) {
      throw InvalidInput("duplicate edge [" + std::to_string(e.src) + "," +
                         std::to_string(e.dst) + "]");
    }
    out_[e.src] |= agent_bit(e.dst);
    in_[e.dst] |= agent_bit(e.src);
  }
  std::sort(edges_.begin(), edges_.end());
  voting_order_ = checked_order(n, std::move(voting_order), "voting_order");
  tiebreak_order_ =
      checked_order(n, std::move(tiebreak_order), "tiebreak_order");
  tiebreak_rank_.assign(n, 0);
  for (int pos = 0; pos < n; ++pos) tiebreak_rank_[tiebreak_order_[pos]] = pos;
}

void ConfirmationNetwork::check_agent(AgentId a) const {
  if (a < 0 || a >= n_) {
    throw InvalidInput("invalid agent id " + std::to_string(a) +
                       " for network of size " + std::to_string(n_));
  }
}

bool ConfirmationNetwork::has_edge(AgentId src, AgentId dst) const {
  check_agent(src);
  check_agent(dst);
  return (out_[src] & agent_bit(dst)) != 0;
}

AgentMask ConfirmationNetwork::out_mask(AgentId a) const {
  check_agent(a);
  return out_[a];
}

AgentMask ConfirmationNetwork::in_mask(AgentId a) const {
  check_agent(a);
  return in_[a];
}

std::string ConfirmationNetwork::name_of(AgentId a) const {
  check_agent(a);
  return names_.empty() ? std::to_string(a) : names_[a];
}

AgentId ConfirmationNetwork::id_of(const std::string& name) const {
  for (int a = 0; a < static_cast<int>(names_.size()); ++a) {
    if (names_[a] == name) return a;
  }
  try {
    std::size_t used = 0;
    int a = std::stoi(name, &used);
    if (used == name.size() && a >= 0 && a < n_) return a;
  } catch (const std::logic_error&) {
  }
  throw InvalidInput("unknown agent '" + name + "'");
}

int popularity(const ConfirmationNetwork& g, AgentId a) {
  return std::popcount(g.in_mask(a));
}

std::vector<AgentId> confirmers(const ConfirmationNetwork& g, AgentId a) {
  return mask_to_agents(g.in_mask(a));
}

DegreeProfile degree_profile(const ConfirmationNetwork& g) {
  DegreeProfile p;
  p.in_degree.resize(g.size());
  p.out_degree.resize(g.size());
  for (AgentId a = 0; a < g.size(); ++a) {
    p.in_degree[a] = std::popcount(g.in_mask(a));
    p.out_degree[a] = std::popcount(g.out_mask(a));
    p.max_in = std::max(p.max_in, p.in_degree[a]);
    p.max_out = std::max(p.max_out, p.out_degree[a]);
  }
  return p;
}

ConfirmationNetwork remove_out_edges(const ConfirmationNetwork& g, AgentId w) {
  g.check_agent(w);
  std::vector<Edge> kept;
  kept.reserve(g.edges().size());
  for (const Edge& e : g.edges()) {
    if (e.src != w) kept.push_back(e);
  }
  return ConfirmationNetwork(g.size(), std::move(kept), g.voting_order(),
                             g.tiebreak_order(), g.names());
}

int max_in_without(const ConfirmationNetwork& g, AgentId w) {
  g.check_agent(w);
  const AgentMask drop = ~agent_bit(w);
  int best = 0;
  for (AgentId a = 0; a < g.size(); ++a) {
    best = std::max(best, std::popcount(g.in_mask(a) & drop));
  }
  return best;
}

int additive_gap(const ConfirmationNetwork& g, AgentId w) {
  return max_in_without(g, w) - popularity(g, w);
}

ExtRational ratio(const ConfirmationNetwork& g, AgentId w) {
  const int top = max_in_without(g, w);
  const int own = popularity(g, w);
  if (own == 0) {
    return top == 0 ? ExtRational(Rational(1)) : ExtRational::infinity();
  }
  return ExtRational(Rational(top, own));
}

}  // namespace seqvote
