#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ramsey/structure.hpp"

namespace ramsey {

// A map A -> B given as map[a] = b. Embeddings are injective and preserve
// every relation in both directions (the image is an induced copy).
using Map = std::vector<int>;

bool is_embedding(const FiniteStructure& a, const FiniteStructure& b, const Map& map);
bool is_homomorphism(const FiniteStructure& a, const FiniteStructure& b, const Map& map);

// map_bc(map_ab(x)); sizes must chain.
Map compose(const Map& map_bc, const Map& map_ab);

// All embeddings of A into B in lexicographic order of the map vector.
// Enumeration assigns elements 0,1,2,... of A in order, trying images in
// ascending order; this order is part of the library contract (certificate
// indices depend on it).
std::vector<Map> enumerate_embeddings(const FiniteStructure& a, const FiniteStructure& b);

// Same, but element x of A may only map into candidates[x] (each ascending).
std::vector<Map> enumerate_embeddings_restricted(const FiniteStructure& a,
                                                 const FiniteStructure& b,
                                                 const std::vector<std::vector<int>>& candidates);

// Visit embeddings in the same order; stop when the visitor returns false.
void visit_embeddings(const FiniteStructure& a, const FiniteStructure& b,
                      const std::vector<std::vector<int>>* candidates,
                      const std::function<bool(const Map&)>& visit);

bool exists_embedding(const FiniteStructure& a, const FiniteStructure& b);
std::optional<Map> first_embedding(const FiniteStructure& a, const FiniteStructure& b);

// Homomorphisms: arbitrary (possibly non-injective) maps preserving each
// relation forward. Enumerated in lexicographic map order.
std::vector<Map> enumerate_homomorphisms(const FiniteStructure& a, const FiniteStructure& b);
bool maps_homomorphically(const FiniteStructure& a, const FiniteStructure& b);

std::vector<Map> automorphisms(const FiniteStructure& s);
bool is_rigid(const FiniteStructure& s);

// No member of `family` maps homomorphically into s.
bool in_forb(const std::vector<FiniteStructure>& family, const FiniteStructure& s);

// Same size and some embedding (which is then onto).
bool is_isomorphic(const FiniteStructure& a, const FiniteStructure& b);

} // namespace ramsey
