#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "cliquechain/maxent.hpp"

namespace cliquechain {

// Model snapshot document:
//   { "format": "cliquechain-model", "format_version": 1, "n", "directed",
//     "epsilon", "epoch", "constraints": [...], "probabilities": [...] }
// Probabilities are listed in canonical pair order and are written in their
// shortest round-trip decimal form (at most 17 significant digits), so a
// write/read cycle restores every double bit-exactly.
nlohmann::json constraint_to_json(const Constraint& c);
Constraint constraint_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const EdgeProbabilityModel& m);
EdgeProbabilityModel model_from_json(const nlohmann::json& j);

void write_model_snapshot(std::ostream& out, const EdgeProbabilityModel& m);
EdgeProbabilityModel read_model_snapshot(std::istream& in);

void save_model_snapshot(const std::string& path, const EdgeProbabilityModel& m);
EdgeProbabilityModel load_model_snapshot(const std::string& path);

// Shared helper: parse a JSON document, mapping syntax errors to kParse.
nlohmann::json parse_json(std::istream& in, const std::string& what);
nlohmann::json parse_json(const std::string& text, const std::string& what);

}  // namespace cliquechain
