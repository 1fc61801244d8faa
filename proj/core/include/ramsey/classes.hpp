#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ramsey/arrow.hpp"
#include "ramsey/embedding.hpp"
#include "ramsey/structure.hpp"

namespace ramsey {

// Disjoint union with a fresh unary symbol marking the left summand. The
// symbol must not already occur in either signature.
FiniteStructure disjoint_union_p(const FiniteStructure& a1, const FiniteStructure& a2,
                                 const std::string& p_symbol = "P");

// Full product. The domain is the cartesian product of the factor domains
// (first factor most significant); for every factor-i symbol R, a tuple of
// product points lies in R iff its i-th coordinates form a tuple of R in that
// factor, and the fresh binary symbol __eq_<i+1> relates points with equal
// i-th coordinate. Factor signatures must be pairwise disjoint.
struct ProductStructure {
    FiniteStructure product{Signature(std::vector<RelationSymbol>{}), 0};
    std::vector<std::vector<int>> coords; // coords[x][i]
    std::vector<Signature> factor_sigs;
};
ProductStructure full_product(const std::vector<FiniteStructure>& factors);

// Induced substructure on the given points, keeping coordinate bookkeeping.
ProductStructure product_substructure(const ProductStructure& p, std::vector<int> points);

// The structure induced in factor i by the i-th coordinates that occur,
// relabelled ascending onto 0..k-1; the __eq symbols are dropped.
FiniteStructure factor_projection(const ProductStructure& p, int factor);

// Provides a structure c with c -> (b)^a_r for a factor.
using ArrowWitnessOracle =
    std::function<FiniteStructure(const FiniteStructure& b, const FiniteStructure& a, int r)>;

// Product partition witness for two factors: with a_i, b_i the factor
// projections of a and b, takes c_2 = witness2(b_2, a_2, r), sets
// s = |Emb(a_2, c_2)|, takes c_1 = witness1(b_1, a_1, r^s) and returns the
// full product of c_1 and c_2. Both oracle outputs are re-verified with
// check_arrow; a failed verification raises InvariantError.
ProductStructure product_witness(const ProductStructure& a, const ProductStructure& b,
                                 const ArrowWitnessOracle& witness1,
                                 const ArrowWitnessOracle& witness2, int r,
                                 const ArrowOptions& opts = {});

// One structure over the union signature whose tau_1-reduct is a1 and whose
// tau_2-reduct is a2 transported through the alignment: element x of the
// result (= of a1) satisfies the tau_2 relations that alignment[x] satisfies
// in a2. Signatures must be disjoint and the alignment a bijection.
FiniteStructure superpose(const FiniteStructure& a1, const FiniteStructure& a2,
                          const std::vector<int>& alignment);

// Expansion by all slice relations at the listed points: for every symbol R
// of arity k >= 2 and the implicit equality symbol, every argument position
// and every listed point d, the (k-1)-ary relation obtained by pinning that
// position to d. Slices are named <R>@<position>#<point-index> (1-based);
// equality slices use the base name __eq.
FiniteStructure expand_with_constants(const FiniteStructure& s, const std::vector<int>& points);

// Free amalgam of b1 and b2 over a: e2(x) is identified with e1(x) for every
// x of a, everything else stays distinct, and no tuples are added beyond the
// images of b1's and b2's. f1 and f2 are the resulting embeddings with
// f1 . e1 == f2 . e2. The strong flag is accepted for symmetry; the free
// amalgam is already strong.
struct Amalgam {
    FiniteStructure result{Signature(std::vector<RelationSymbol>{}), 0};
    Map f1, f2;
};
Amalgam amalgam(const FiniteStructure& a, const FiniteStructure& b1, const FiniteStructure& b2,
                const Map& e1, const Map& e2, bool strong = false);

// A class of finite structures closed under induced substructures and
// isomorphism: a membership test plus a deterministic enumeration of the
// members of each exact size, one per isomorphism type.
struct ClassGenerator {
    std::string name;
    Signature signature;
    std::function<bool(const FiniteStructure&)> contains;
    std::function<std::vector<FiniteStructure>(int)> members_of_size;
};

ClassGenerator lo_class(const std::string& order_symbol = "ord");
ClassGenerator ordered_graphs_class();
// Ordered graphs with no clique on n vertices.
ClassGenerator ordered_clique_free_class(int n);
// All structures over tau expanded by a linear order; enumeration is only
// practical for small sizes and low arities.
ClassGenerator ordered_structures_class(const Signature& tau,
                                        const std::string& order_symbol = "ord");
// An equivalence relation "eq" together with a linear order "ord".
ClassGenerator equivalence_order_class();
// Two linear orders "lt1", "lt2" on the same points.
ClassGenerator two_orders_class();
// Undirected acyclic graphs over "edge".
ClassGenerator forests_class();
// Binary branching relation "C" with an arbitrary linear order "ord".
ClassGenerator branching_order_class();
// As above but the order must be convex for the branching.
ClassGenerator convex_branching_class();
// Structures over the family's signature embedding no family member
// homomorphically; with require_order set, the named symbol must also be a
// linear order (and enumeration fixes it to the natural order).
ClassGenerator forb_class(std::string name, std::vector<FiniteStructure> family,
                          bool require_order = false, const std::string& order_symbol = "ord");
// Built-in registry: lo, ordered-graphs, ordered-k<n>-free, equivalence-order,
// two-orders, forests, branching-order, convex-branching.
std::optional<ClassGenerator> class_by_name(const std::string& name);

// All superpositions of a size-n member of c1 with a size-n member of c2,
// over every alignment, one per isomorphism type, in first-found order.
std::vector<FiniteStructure> superposition_members(const ClassGenerator& c1,
                                                   const ClassGenerator& c2, int n);

// True when some member of c of size up to |b1| + |b2| - |a| completes the
// triple: it embeds b1 and b2 compatibly over a (f1 . e1 == f2 . e2) and is
// covered by the two images. Any amalgam in a substructure-closed class
// induces one of that shape, so searching those sizes is exhaustive.
bool class_has_amalgam(const ClassGenerator& c, const FiniteStructure& a,
                       const FiniteStructure& b1, const FiniteStructure& b2, const Map& e1,
                       const Map& e2);

struct AmalgamationReport {
    bool holds = true;
    // First failing triple in enumeration order, present when holds is false.
    std::optional<FiniteStructure> a, b1, b2;
    Map e1, e2;
};
// Checks every triple with 1 <= |a| and |b1|, |b2| <= n.
AmalgamationReport check_amalgamation_property(const ClassGenerator& c, int n);

struct JepReport {
    bool holds = true;
    std::optional<FiniteStructure> b1, b2;
};
// Joint embedding for all pairs of members of size up to n.
JepReport check_jep(const ClassGenerator& c, int n);

} // namespace ramsey
