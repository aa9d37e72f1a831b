#include "seqvote/graph_io.hpp"

#include <fstream>
#include <sstream>

namespace seqvote {
namespace {

using nlohmann::json;

std::vector<AgentId> int_list(const json& doc, const char* key) {
  std::vector<AgentId> out;
  if (!doc.contains(key)) return out;
  const json& arr = doc.at(key);
  if (!arr.is_array()) {
    throw InvalidInput(std::string("'") + key + "' must be an array");
  }
  for (const json& v : arr) {
    if (!v.is_number_integer()) {
      throw InvalidInput(std::string("'") + key + "' must contain integers");
    }
    out.push_back(v.get<AgentId>());
  }
  return out;
}

}  // namespace

ConfirmationNetwork network_from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidInput("graph document must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "n" && key != "edges" && key != "voting_order" &&
        key != "tiebreak_order" && key != "names") {
      throw InvalidInput("unknown graph field '" + key + "'");
    }
  }
  if (!doc.contains("n") || !doc.at("n").is_number_integer()) {
    throw InvalidInput("graph requires integer field 'n'");
  }
  if (!doc.contains("edges") || !doc.at("edges").is_array()) {
    throw InvalidInput("graph requires array field 'edges'");
  }
  const int n = doc.at("n").get<int>();
  std::vector<Edge> edges;
  for (const json& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      throw InvalidInput("each edge must be a pair [src, dst] of integers");
    }
    edges.push_back({e[0].get<AgentId>(), e[1].get<AgentId>()});
  }
  std::vector<std::string> names;
  if (doc.contains("names")) {
    if (!doc.at("names").is_array()) {
      throw InvalidInput("'names' must be an array");
    }
    for (const json& v : doc.at("names")) {
      if (!v.is_string()) throw InvalidInput("'names' must contain strings");
      names.push_back(v.get<std::string>());
    }
  }
  return ConfirmationNetwork(n, std::move(edges), int_list(doc, "voting_order"),
                             int_list(doc, "tiebreak_order"), std::move(names));
}

json network_to_json(const ConfirmationNetwork& g) {
  json doc = json::object();
  doc["n"] = g.size();
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.src, e.dst});
  doc["edges"] = std::move(edges);
  doc["voting_order"] = g.voting_order();
  doc["tiebreak_order"] = g.tiebreak_order();
  if (!g.names().empty()) doc["names"] = g.names();
  return doc;
}

ConfirmationNetwork parse_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("graph JSON parse error: ") + e.what());
  }
  return network_from_json(doc);
}

std::string serialize_network(const ConfirmationNetwork& g) {
  return network_to_json(g).dump();
}

ConfirmationNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

void save_network(const ConfirmationNetwork& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write graph file '" + path + "'");
  out << serialize_network(g) << "\n";
}

}  // namespace seqvote
