#pragma once

#include <string>
#include <vector>

#include "ramsey/errors.hpp"

namespace ramsey {

using Tuple = std::vector<int>;

struct RelationSymbol {
    std::string name;
    int arity = 0;

    bool operator==(const RelationSymbol&) const = default;
};

// Ordered list of relation symbols. The order is part of the identity: two
// signatures with the same symbols in different order are distinct.
class Signature {
  public:
    Signature() = default;
    explicit Signature(std::vector<RelationSymbol> symbols);

    const std::vector<RelationSymbol>& symbols() const { return symbols_; }
    int size() const { return static_cast<int>(symbols_.size()); }
    const RelationSymbol& at(int i) const { return symbols_.at(i); }

    // -1 if absent.
    int index_of(const std::string& name) const;
    bool contains(const std::string& name) const { return index_of(name) >= 0; }

    bool operator==(const Signature&) const = default;

  private:
    std::vector<RelationSymbol> symbols_;
};

// Finite relational structure over domain {0, ..., size-1}. Relation tuples
// are kept sorted lexicographically and deduplicated, so equal structures
// compare equal memberwise.
class FiniteStructure {
  public:
    FiniteStructure() = default;
    FiniteStructure(Signature sig, int size);
    FiniteStructure(Signature sig, int size,
                    std::vector<std::vector<Tuple>> relations);

    const Signature& signature() const { return sig_; }
    int size() const { return size_; }

    const std::vector<Tuple>& relation(int sym_index) const;
    const std::vector<Tuple>& relation(const std::string& name) const;
    // All relations, indexed like the signature.
    const std::vector<std::vector<Tuple>>& relations() const { return rels_; }

    void add_tuple(int sym_index, const Tuple& t);
    void add_tuple(const std::string& name, const Tuple& t);
    bool has_tuple(int sym_index, const Tuple& t) const;
    bool has_tuple(const std::string& name, const Tuple& t) const;

    std::size_t tuple_count() const;
    std::size_t tuple_count(const std::string& name) const { return relation(name).size(); }

    bool operator==(const FiniteStructure&) const = default;

  private:
    void check_tuple(int sym_index, const Tuple& t) const;

    Signature sig_;
    int size_ = 0;
    std::vector<std::vector<Tuple>> rels_;
};

// Induced substructure on the given domain subset. Elements are relabeled
// order-preservingly onto {0, ..., |subset|-1}. Duplicates in `subset` are an
// error; order of `subset` is ignored (it is sorted first).
FiniteStructure substructure(const FiniteStructure& s, std::vector<int> subset);

// Relabel through `map` (a bijection on the domain given as old -> new).
FiniteStructure relabel(const FiniteStructure& s, const std::vector<int>& map);

// Disjoint union; B's elements are shifted by A's size. Signatures must match.
FiniteStructure disjoint_union(const FiniteStructure& a, const FiniteStructure& b);

// Same domain, signature restricted to the named symbols (in the listed
// order). Unknown names are an error.
FiniteStructure reduct(const FiniteStructure& s, const std::vector<std::string>& keep);

// True when `sym` is a strict linear order on the whole domain: irreflexive,
// antisymmetric, transitive, total on distinct pairs.
bool is_linear_order(const FiniteStructure& s, const std::string& sym);

// The strict linear order ({0<1<...<n-1}) with order symbol `sym`.
FiniteStructure linear_order(int n, const std::string& sym = "ord");

// Elements of the domain sorted by the strict linear order `sym`.
// InputError if `sym` is not a linear order on s.
std::vector<int> order_of(const FiniteStructure& s, const std::string& sym);

// Every two distinct elements appear together in some tuple.
bool is_irreducible(const FiniteStructure& s);

// Lexicographically minimal relabeling of `s` (minimizing the concatenated
// sorted tuple lists, relation by relation). Brute force over permutations
// with prefix pruning; intended for dedup at size <= 8.
FiniteStructure canonical_form(const FiniteStructure& s);

} // namespace ramsey
