#pragma once

#include <string>

#include "json.hpp"

#include "seqvote/network.hpp"

namespace seqvote {

// Graph JSON: {"n", "edges": [[src,dst],...], "voting_order"?,
// "tiebreak_order"?, "names"?}. Indices are 0-based.
ConfirmationNetwork network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const ConfirmationNetwork& g);

ConfirmationNetwork parse_network(const std::string& text);
std::string serialize_network(const ConfirmationNetwork& g);

ConfirmationNetwork load_network(const std::string& path);
void save_network(const ConfirmationNetwork& g, const std::string& path);

}  // namespace seqvote
