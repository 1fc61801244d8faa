#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ramsey/arrow.hpp"
#include "ramsey/json_io.hpp"
#include "ramsey/structure.hpp"

namespace ramsey {

// Rooted tree whose internal nodes all have exactly two children and whose
// leaves carry integer elements. Planar order matters: the in-order walk of
// the leaves is the convex order of the represented structure.
class LeafTree {
  public:
    static LeafTree leaf(int element);
    static LeafTree node(LeafTree left, LeafTree right);

    bool is_leaf() const { return children_.empty(); }
    int element() const;             // leaves only
    const LeafTree& left() const;    // internal nodes only
    const LeafTree& right() const;

    int leaf_count() const;
    int height() const;              // a leaf has height 0
    std::vector<int> leaves() const; // leaf elements in planar order

    bool operator==(const LeafTree& other) const;

  private:
    std::vector<LeafTree> children_;
    int element_ = -1;
};

// Nested-array encoding: a leaf is its integer, a node is [left, right].
Json tree_to_json(const LeafTree& t);
LeafTree tree_from_json(const Json& j);

// All tree shapes with k leaves carrying 0..k-1 in planar order, ordered by
// the size of the left subtree and then recursively. Catalan(k-1) many.
std::vector<LeafTree> all_tree_shapes(int k);

// Calls visit on each shape in the all_tree_shapes order; stops early when
// visit returns false. Avoids materialising large shape lists.
void visit_tree_shapes(int k, const std::function<bool(const LeafTree&)>& visit);

// All trees with leaf set {0..k-1} up to planar flips: at every node the left
// subtree holds the smallest element below that node. (2k-3)!! many; these
// realise every binary branching relation on k labelled points exactly once.
std::vector<LeafTree> all_labeled_trees(int k);

struct TreeCheckReport {
    bool valid = true;
    std::string note; // names the first violated requirement with a witness
};

// Validates the branching axioms of the ternary symbol (symmetry in the last
// two arguments, exclusivity, the splitting axiom, pair tuples, binary
// branching), that the order symbol is a linear order and, when
// require_convex is set, that every cone is an interval of that order.
TreeCheckReport check_c_axioms(const FiniteStructure& s, const std::string& c_symbol = "C",
                               const std::string& order_symbol = "ord",
                               bool require_convex = true);

// Structure of a tree: domain = leaf elements, which must be exactly
// {0..k-1}. C(a;b,c) holds iff a lies outside the smallest subtree containing
// b and c (also when b = c); ord is the planar leaf order.
FiniteStructure tree_to_structure(const LeafTree& t, const std::string& c_symbol = "C",
                                  const std::string& order_symbol = "ord");

// Inverse of tree_to_structure; the order must be convex for the branching.
// Raises InputError when s is not the structure of any tree.
LeafTree structure_to_tree(const FiniteStructure& s, const std::string& c_symbol = "C",
                           const std::string& order_symbol = "ord");

// Tree recovery when the order is an arbitrary linear order: sibling subtrees
// are arranged by their order-minimal leaf instead of recorded planar
// position, so the returned tree's in-order walk is a convex order.
LeafTree tree_from_branching(const FiniteStructure& s, const std::string& c_symbol = "C",
                             const std::string& order_symbol = "ord");

// Embeddings of structure(a) into structure(t) that map a's root subtrees
// into t's respective root subtrees. left[i] and right[j] use t's element
// labels; assembled[i * right.size() + j] is the combined map over
// structure(a)'s domain. Both trees must be internal nodes.
struct SplitEmbeddings {
    std::vector<Map> left;
    std::vector<Map> right;
    std::vector<Map> assembled;
};
SplitEmbeddings split_embeddings(const LeafTree& a, const LeafTree& t);

struct TreeOptions {
    ArrowOptions arrow;        // budget floor raised below; sweeps prune well
    bool verify_claim = true;  // re-check every split witness by direct sweep
    int max_base_leaves = 12;  // shape-search cap when the pattern is a leaf
    int max_chain = 0;         // 0 = (height(B)+1)^r stages, capped at 64

    TreeOptions() { arrow.budget = std::max<std::uint64_t>(arrow.budget, std::uint64_t{1} << 28); }
};

// One inductive step: F = node(F1, F2) where F2 arrows (d)^{a.right()}_r and
// F1 arrows (d)^{a.left()}_s with s = r^|Emb(a.right(), F2)|. Every
// r-coloring of the root-split copies of a in F then has embeddings
// f1: d -> F1, f2: d -> F2 whose combined copies of a are monochromatic;
// with verify_claim the step re-checks that by sweeping all colorings.
LeafTree construct_split_witness(const LeafTree& a, const LeafTree& d, int r,
                                 const TreeOptions& opts = {});

// Inductive witness chain: C_1 is a single leaf and C_{i+1} =
// construct_split_witness(a, C_i, r); stops at the first stage that passes
// check_arrow(C_i, b, a, r). A leaf pattern is instead served by the shape
// search. witness == chain.back().
struct TreeConstruction {
    LeafTree witness;
    std::vector<LeafTree> chain;
};
TreeConstruction construct_ramsey_tree_chain(const LeafTree& a, const LeafTree& b, int r,
                                             const TreeOptions& opts = {});
LeafTree construct_ramsey_tree(const LeafTree& a, const LeafTree& b, int r,
                               const TreeOptions& opts = {});

// Extracts a monochromatic copy of b from a coloring of Emb(a, witness)
// without re-searching all embeddings of b: words over {1,2} address nested
// split-witness images g_w, each internal node of b is placed at a word whose
// claim color matches, and the leaf words determine the copy. Falls back to a
// direct scan (via_words = false) if the word descent does not apply. The
// returned copy is re-verified: it is an embedding and all its a-copies have
// the returned color.
struct TreeReplayResult {
    Map copy;
    int color = 0;
    bool via_words = false;
};
TreeReplayResult tree_replay(const TreeConstruction& tc, const LeafTree& a, const LeafTree& b,
                             int r, const std::vector<int>& coloring,
                             const TreeOptions& opts = {});

} // namespace ramsey
