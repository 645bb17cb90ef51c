#pragma once

#include <json.hpp>

#include "qai/logic.hpp"

namespace qai {

/*
 * JSON encodings used by the CLI. Doubles are serialized with 17
 * significant digits so every value round-trips exactly; use dump_json
 * rather than nlohmann's dump for all emitted documents.
 */

using Json = nlohmann::json;

Json to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j);

Json to_json(const State& s);
State state_from_json(const Json& j);

Json to_json(const AbstractElement& e);
AbstractElement element_from_json(const Json& j);

Json to_json(const Derivation& d);
Derivation derivation_from_json(const Json& j);

// indent < 0 emits compact JSON; otherwise pretty-printed
std::string dump_json(const Json& j, int indent = -1);

}  // namespace qai
