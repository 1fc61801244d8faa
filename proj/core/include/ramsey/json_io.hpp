#pragma once

#include <string>

#include <json.hpp>

#include "ramsey/structure.hpp"

namespace ramsey {

using Json = nlohmann::json;

// {"signature":[{"name":...,"arity":...},...],"size":n,"relations":{name:[[...],...]}}
// Relation keys appear sorted (JSON object order), tuple lists sorted
// lexicographically; serializing the parse of a canonical document
// reproduces it byte for byte.
Json structure_to_json(const FiniteStructure& s);
FiniteStructure structure_from_json(const Json& j);

std::string canonical_json_string(const FiniteStructure& s);

// FNV-1a over the canonical serialization; used in run records.
std::string content_hash(const std::string& bytes);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

} // namespace ramsey
