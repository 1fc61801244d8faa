#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "ramsey/arrow.hpp"
#include "ramsey/embedding.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/json_io.hpp"
#include "ramsey/tree.hpp"

using namespace ramsey;

namespace {

LeafTree lf(int e) { return LeafTree::leaf(e); }

LeafTree nd(LeafTree l, LeafTree r) { return LeafTree::node(std::move(l), std::move(r)); }

LeafTree cherry() { return nd(lf(0), lf(1)); }

// node(0, node(1, 2)): the first element branches off above the other two.
LeafTree comb3() { return nd(lf(0), nd(lf(1), lf(2))); }

LeafTree balanced4() { return nd(nd(lf(0), lf(1)), nd(lf(2), lf(3))); }

// Copy of a structure with one C tuple removed.
FiniteStructure drop_c_tuple(const FiniteStructure& s, const Tuple& gone) {
    FiniteStructure out(s.signature(), s.size());
    for (const auto& t : s.relation("C"))
        if (!(t == gone)) out.add_tuple("C", t);
    for (const auto& t : s.relation("ord")) out.add_tuple("ord", t);
    return out;
}

} // namespace

TEST_CASE("leaf tree basics") {
    auto t = balanced4();
    CHECK(t.leaf_count() == 4);
    CHECK(t.height() == 2);
    CHECK(t.leaves() == std::vector<int>{0, 1, 2, 3});
    CHECK(t.left().leaves() == std::vector<int>{0, 1});
    CHECK(t.right().right().element() == 3);
    CHECK(t == balanced4());
    CHECK_FALSE(t == comb3());
    CHECK_FALSE(nd(lf(0), lf(1)) == nd(lf(1), lf(0))); // planar order matters

    CHECK_THROWS_AS(t.element(), InputError);
    CHECK_THROWS_AS(lf(0).left(), InputError);
    CHECK_THROWS_AS(LeafTree::leaf(-1), InputError);
}

TEST_CASE("tree json round trip") {
    auto t = balanced4();
    Json j = tree_to_json(t);
    CHECK(j.dump() == "[[0,1],[2,3]]");
    CHECK(tree_from_json(j) == t);
    CHECK(tree_from_json(Json::parse("5")) == lf(5));

    CHECK_THROWS_AS(tree_from_json(Json::parse("[0,1,2]")), InputError);
    CHECK_THROWS_AS(tree_from_json(Json::parse("[0,-1]")), InputError);
    CHECK_THROWS_AS(tree_from_json(Json::parse("\"x\"")), InputError);
}

TEST_CASE("shape enumeration counts are the catalan numbers") {
    const std::vector<std::size_t> catalan{1, 1, 2, 5, 14, 42};
    for (int k = 1; k <= 6; ++k) {
        auto shapes = all_tree_shapes(k);
        CHECK(shapes.size() == catalan[static_cast<std::size_t>(k - 1)]);
        std::vector<int> natural(static_cast<std::size_t>(k));
        std::iota(natural.begin(), natural.end(), 0);
        for (const auto& s : shapes) CHECK(s.leaves() == natural);
    }
    // Early stop is honored.
    int seen = 0;
    visit_tree_shapes(5, [&](const LeafTree&) { return ++seen < 3; });
    CHECK(seen == 3);
    CHECK_THROWS_AS(all_tree_shapes(0), InputError);
}

TEST_CASE("labeled tree enumeration realises every branching once") {
    const std::vector<std::size_t> double_factorial{1, 1, 3, 15, 105, 945};
    for (int k = 1; k <= 6; ++k)
        CHECK(all_labeled_trees(k).size() == double_factorial[static_cast<std::size_t>(k - 1)]);

    // Distinct branching relations at k = 4.
    std::set<std::string> rels;
    for (const auto& t : all_labeled_trees(4)) {
        auto s = tree_to_structure(t);
        rels.insert(canonical_json_string(reduct(s, {"C"})));
    }
    CHECK(rels.size() == 15);
}

TEST_CASE("structures of trees satisfy the branching axioms") {
    for (int k = 1; k <= 6; ++k)
        for (const auto& t : all_tree_shapes(k)) {
            auto rep = check_c_axioms(tree_to_structure(t));
            CHECK(rep.valid);
        }
    for (const auto& t : all_labeled_trees(5)) CHECK(check_c_axioms(tree_to_structure(t)).valid);
}

TEST_CASE("axiom violations come with a witness note") {
    auto good = tree_to_structure(balanced4());

    auto no_swap = check_c_axioms(drop_c_tuple(good, {2, 1, 0}));
    CHECK_FALSE(no_swap.valid);
    CHECK(no_swap.note.find("swap") != std::string::npos);

    auto no_pair = drop_c_tuple(tree_to_structure(cherry()), {1, 0, 0});
    auto pair_rep = check_c_axioms(no_pair);
    CHECK_FALSE(pair_rep.valid);
    CHECK(pair_rep.note.find("pair") != std::string::npos);

    FiniteStructure both = good;
    both.add_tuple("C", {2, 0, 3});
    both.add_tuple("C", {2, 3, 0});
    auto excl = check_c_axioms(both);
    CHECK_FALSE(excl.valid);
    CHECK(excl.note.find("exclusivity") != std::string::npos);

    // Only the forced pair tuples: no triple is resolved.
    FiniteStructure flat(Signature({{"C", 3}, {"ord", 2}}), 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            if (a != b) flat.add_tuple("C", {a, b, b});
            if (a < b) flat.add_tuple("ord", {a, b});
        }
    auto branch = check_c_axioms(flat);
    CHECK_FALSE(branch.valid);
    CHECK(branch.note.find("binary") != std::string::npos);

    FiniteStructure repeated = good;
    repeated.add_tuple("C", {0, 0, 1});
    CHECK_FALSE(check_c_axioms(repeated).valid);

    CHECK_FALSE(check_c_axioms(reduct(good, {"ord"}), "C").valid); // symbol missing
}

TEST_CASE("convexity is checked against the order") {
    // Cones {0,1} and {2,3} but order 0 < 2 < 1 < 3.
    auto cones = tree_to_structure(balanced4());
    FiniteStructure s(Signature({{"C", 3}, {"ord", 2}}), 4);
    for (const auto& t : cones.relation("C")) s.add_tuple("C", t);
    for (auto [u, v] : {std::pair<int, int>{0, 2}, {0, 1}, {0, 3}, {2, 1}, {2, 3}, {1, 3}})
        s.add_tuple("ord", {u, v});

    CHECK_FALSE(check_c_axioms(s, "C", "ord", true).valid);
    CHECK(check_c_axioms(s, "C", "ord", false).valid);
    CHECK_THROWS_AS(structure_to_tree(s), InputError);

    // The branching is still recoverable under a convex rearrangement.
    auto t = tree_from_branching(s);
    CHECK(t == balanced4());
}

TEST_CASE("balanced four leaf structure matches the path semantics") {
    auto s = tree_to_structure(balanced4());
    for (int a : {2, 3}) {
        CHECK(s.has_tuple("C", {a, 0, 1}));
        CHECK(s.has_tuple("C", {a, 1, 0}));
    }
    for (int a : {0, 1}) {
        CHECK(s.has_tuple("C", {a, 2, 3}));
        CHECK(s.has_tuple("C", {a, 3, 2}));
    }
    // Cross pairs meet at the root, so nothing lies outside them.
    CHECK_FALSE(s.has_tuple("C", {1, 0, 2}));
    CHECK_FALSE(s.has_tuple("C", {3, 0, 2}));
    // 12 forced pair tuples plus the 8 cone tuples above.
    CHECK(s.tuple_count("C") == 20);
}

TEST_CASE("tree structure round trips") {
    for (int k = 1; k <= 5; ++k)
        for (const auto& t : all_labeled_trees(k)) {
            auto s = tree_to_structure(t);
            CHECK(structure_to_tree(s) == t);
            // Same branching under the natural order instead of the planar one.
            FiniteStructure nat(s.signature(), s.size());
            for (const auto& tup : s.relation("C")) nat.add_tuple("C", tup);
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) nat.add_tuple("ord", {i, j});
            auto back = tree_from_branching(nat);
            CHECK(tree_to_structure(back).relation("C") == s.relation("C"));
        }
    CHECK_THROWS_AS(structure_to_tree(tree_to_structure(lf(0)), "C", "missing"), InputError);
}

TEST_CASE("every leaf pair induces a cherry") {
    auto cherry_s = tree_to_structure(cherry());
    for (int k : {4, 5})
        for (const auto& t : all_tree_shapes(k)) {
            auto s = tree_to_structure(t);
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    CHECK(is_isomorphic(substructure(s, {i, j}), cherry_s));
        }
}

TEST_CASE("split embeddings factor through the root") {
    auto one = split_embeddings(cherry(), cherry());
    CHECK(one.left.size() == 1);
    CHECK(one.right.size() == 1);
    CHECK(one.assembled.size() == 1);
    CHECK(one.assembled[0] == Map{0, 1});

    auto four = split_embeddings(cherry(), balanced4());
    CHECK(four.left.size() == 2);
    CHECK(four.right.size() == 2);
    CHECK(four.assembled.size() == 4);
    auto s_a = tree_to_structure(cherry());
    auto s_t = tree_to_structure(balanced4());
    for (const auto& m : four.assembled) {
        CHECK(is_embedding(s_a, s_t, m));
        CHECK(m[0] < 2); // left part
        CHECK(m[1] >= 2);
    }
    // All embeddings, not only the root-split ones.
    CHECK(enumerate_embeddings(s_a, s_t).size() == 6);

    auto three = split_embeddings(comb3(), nd(comb3(), nd(lf(3), lf(4))));
    CHECK(three.left.size() == 3);
    CHECK(three.right.size() == 1);
    CHECK(three.assembled.size() == 3);

    CHECK_THROWS_AS(split_embeddings(lf(0), balanced4()), InputError);
    CHECK_THROWS_AS(split_embeddings(cherry(), lf(0)), InputError);
}

TEST_CASE("split witness for the cherry over the cherry") {
    // Right side needs 3 leaves (pigeonhole at 2 colors), the left side then
    // needs 9 (pigeonhole at 2^3 colors); the claim sweep re-checks the stage.
    auto f = construct_split_witness(cherry(), cherry(), 2);
    CHECK(f.left().leaf_count() == 9);
    CHECK(f.right().leaf_count() == 3);
    CHECK(f.leaves().size() == 12);

    // One color: both sides can stay the previous stage itself.
    auto trivial = construct_split_witness(cherry(), cherry(), 1);
    CHECK(trivial.left().leaf_count() == 2);
    CHECK(trivial.right().leaf_count() == 2);

    CHECK_THROWS_AS(construct_split_witness(lf(0), cherry(), 2), InputError);
    CHECK_THROWS_AS(construct_split_witness(cherry(), cherry(), 0), InputError);
}

TEST_CASE("point pattern witness is minimal at three leaves") {
    auto tc = construct_ramsey_tree_chain(lf(0), cherry(), 2);
    CHECK(tc.witness.leaf_count() == 3);
    CHECK(tc.chain.size() == 1);

    auto s_a = tree_to_structure(lf(0));
    auto s_b = tree_to_structure(cherry());
    CHECK(check_arrow(tree_to_structure(tc.witness), s_b, s_a, 2).verdict == Verdict::holds);
    for (int k = 1; k <= 2; ++k)
        for (const auto& shape : all_tree_shapes(k))
            CHECK(check_arrow(tree_to_structure(shape), s_b, s_a, 2).verdict == Verdict::fails);
}

TEST_CASE("pattern equal to host stops at the host") {
    auto tc = construct_ramsey_tree_chain(cherry(), cherry(), 2);
    CHECK(tc.witness == cherry());
    auto s = tree_to_structure(cherry());
    CHECK(check_arrow(tree_to_structure(tc.witness), s, s, 2).verdict == Verdict::holds);
}

TEST_CASE("construction caps are honored") {
    TreeOptions tight;
    tight.max_base_leaves = 2;
    CHECK_THROWS_AS(construct_ramsey_tree(lf(0), cherry(), 2, tight), BudgetError);

    TreeOptions short_chain;
    short_chain.max_chain = 1;
    CHECK_THROWS_AS(construct_ramsey_tree(cherry(), comb3(), 2, short_chain), BudgetError);
}

TEST_CASE("comb chain replays every coloring through the words") {
    auto a = comb3();
    auto tc = construct_ramsey_tree_chain(a, a, 2);
    REQUIRE(tc.chain.size() == 3);
    CHECK(tc.witness.leaf_count() == 5);

    auto s_a = tree_to_structure(a);
    auto s_c = tree_to_structure(tc.witness);
    auto embs = enumerate_embeddings(s_a, s_c);
    REQUIRE(embs.size() == 4);

    auto inner = enumerate_embeddings(s_a, s_a);
    REQUIRE(inner.size() == 1); // the pattern is rigid

    for (int mask = 0; mask < 16; ++mask) {
        std::vector<int> coloring(4);
        for (int i = 0; i < 4; ++i) coloring[static_cast<std::size_t>(i)] = 1 + ((mask >> i) & 1);
        auto res = tree_replay(tc, a, a, 2, coloring);
        CHECK(res.via_words);
        CHECK(is_embedding(s_a, s_c, res.copy));
        // The copy's own color is the reported one.
        auto it = std::find(embs.begin(), embs.end(), res.copy);
        REQUIRE(it != embs.end());
        CHECK(coloring[static_cast<std::size_t>(it - embs.begin())] == res.color);
    }

    CHECK_THROWS_AS(tree_replay(tc, a, a, 2, {1, 2}), InputError);
    CHECK_THROWS_AS(tree_replay(tc, a, a, 2, {0, 1, 1, 1}), InputError);
    CHECK_THROWS_AS(tree_replay(TreeConstruction{tc.witness, {}}, a, a, 2,
                                std::vector<int>(4, 1)),
                    InputError);
}

TEST_CASE("leaf pattern replay scans directly") {
    auto tc = construct_ramsey_tree_chain(lf(0), cherry(), 2);
    auto res = tree_replay(tc, lf(0), cherry(), 2, {1, 2, 1});
    CHECK_FALSE(res.via_words);
    CHECK(res.copy == Map{0, 2});
    CHECK(res.color == 1);

    // No monochromatic copy can be manufactured from a refuting coloring.
    CHECK_THROWS_AS(tree_replay(TreeConstruction{cherry(), {cherry()}}, lf(0), cherry(), 2,
                                {1, 2}),
                    InvariantError);
}
