#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramsey/classes.hpp"
#include "ramsey/structure.hpp"

namespace ramsey {

// A class of order expansions: the expanded class ranges over tau plus the
// named order symbol; the base class consists of its tau-reducts.
struct OrderExpansionFamily {
    ClassGenerator expanded;
    std::string order_symbol = "ord";

    // Signature of the reducts (the expanded signature minus the order).
    Signature base_signature() const;
    FiniteStructure reduct_of(const FiniteStructure& member) const;
    // All expansions of a reduct-signature structure that lie in the class,
    // ordered by the permutation that lists the added order ascending.
    std::vector<FiniteStructure> expansions_of(const FiniteStructure& s) const;
};

// Searches base-class members y with |x| <= |y| <= max_size such that every
// expansion of x embeds into every expansion of y; returns the first hit.
// When none exists within the bound, blocking_x and blocking_y hold the first
// expansion pair witnessing the failure of the first candidate.
struct OrderingReport {
    std::optional<FiniteStructure> y;
    std::optional<FiniteStructure> blocking_x;
    std::optional<FiniteStructure> blocking_y;
};
OrderingReport check_ordering_property(const OrderExpansionFamily& f, const FiniteStructure& x,
                                       int max_size);

// A refuting 2-coloring built from a convex order: classes (or subtrees) are
// kept contiguous, and a copy of the two-element pattern is colored by
// whether the structure order agrees with the convex order on its image.
// Every embedding of the four-element target then sees both colors, so
// check_arrow(c, target, pattern, 2) fails with this coloring.
struct DefeatColoring {
    FiniteStructure pattern{Signature(std::vector<RelationSymbol>{}), 0};
    FiniteStructure target{Signature(std::vector<RelationSymbol>{}), 0};
    std::vector<int> coloring;     // over Emb(pattern, c) in enumeration order
    std::vector<int> convex_order; // elements of c, ascending in the convex order
};

// c must carry an equivalence relation "eq" and a linear order "ord". The
// pattern is an inequivalent ordered pair; the target is the four-element
// member with blocks {0,1}, {2,3} ordered 1 < 2 < 0 < 3.
DefeatColoring convex_defeat_equivalence(const FiniteStructure& c);

// c must carry a binary branching relation "C" and a linear order "ord". The
// pattern is an ordered leaf pair; the target is the four-element member with
// cones {0,1}, {2,3} ordered 0 < 2 < 1 < 3.
DefeatColoring convex_defeat_ctree(const FiniteStructure& c);

} // namespace ramsey
