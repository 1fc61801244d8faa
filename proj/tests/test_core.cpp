#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ramsey/arrow.hpp"
#include "ramsey/embedding.hpp"
#include "ramsey/hales_jewett.hpp"
#include "ramsey/json_io.hpp"
#include "ramsey/structure.hpp"

using namespace ramsey;

namespace {

Signature graph_sig() { return Signature({{"edge", 2}}); }

Signature ordered_graph_sig() { return Signature({{"edge", 2}, {"ord", 2}}); }

// Complete graph with the natural linear order; rigid, so embeddings and
// unordered copies coincide.
FiniteStructure ordered_complete(int n) {
    FiniteStructure s(ordered_graph_sig(), n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            s.add_tuple("edge", {i, j});
            if (i < j) s.add_tuple("ord", {i, j});
        }
    return s;
}

FiniteStructure complete_graph(int n) {
    FiniteStructure s(graph_sig(), n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s.add_tuple("edge", {i, j});
    return s;
}

} // namespace

TEST_CASE("linear order helpers") {
    auto lo = linear_order(4);
    CHECK(lo.size() == 4);
    CHECK(is_linear_order(lo, "ord"));
    CHECK(lo.tuple_count("ord") == 6);
    CHECK(order_of(lo, "ord") == std::vector<int>{0, 1, 2, 3});

    FiniteStructure bad(Signature({{"ord", 2}}), 3);
    bad.add_tuple("ord", {0, 1});
    bad.add_tuple("ord", {1, 2});
    CHECK_FALSE(is_linear_order(bad, "ord")); // not transitive-complete
}

TEST_CASE("substructure and relabel") {
    auto k4 = ordered_complete(4);
    auto sub = substructure(k4, {1, 3});
    CHECK(sub.size() == 2);
    CHECK(sub.has_tuple("edge", {0, 1}));
    CHECK(sub.has_tuple("ord", {0, 1}));
    CHECK_FALSE(sub.has_tuple("ord", {1, 0}));

    auto swapped = relabel(sub, {1, 0});
    CHECK(swapped.has_tuple("ord", {1, 0}));
    CHECK_FALSE(swapped.has_tuple("ord", {0, 1}));
}

TEST_CASE("embedding enumeration order and counts") {
    auto k2 = ordered_complete(2);
    auto k4 = ordered_complete(4);
    auto embs = enumerate_embeddings(k2, k4);
    CHECK(embs.size() == 6); // one per ordered pair i<j
    CHECK(embs.front() == Map{0, 1});
    CHECK(embs.back() == Map{2, 3});
    // Lexicographic by image of 0, then image of 1.
    for (std::size_t i = 1; i < embs.size(); ++i) CHECK(embs[i - 1] < embs[i]);

    CHECK(automorphisms(ordered_complete(3)).size() == 1);
    CHECK(is_rigid(ordered_complete(3)));
    CHECK(automorphisms(complete_graph(3)).size() == 6);
}

TEST_CASE("homomorphisms fold, embeddings do not") {
    auto p2 = complete_graph(2);
    FiniteStructure loopless(graph_sig(), 1);
    CHECK(enumerate_homomorphisms(p2, loopless).empty());
    auto k3 = complete_graph(3);
    CHECK(enumerate_homomorphisms(p2, k3).size() == 6);
    CHECK(maps_homomorphically(p2, k3));

    // A non-edge must pull back: K2 embeds in K3, the 2-path does not map
    // onto a triangle by an embedding with an edge missing.
    FiniteStructure path(graph_sig(), 3);
    path.add_tuple("edge", {0, 1});
    path.add_tuple("edge", {1, 0});
    path.add_tuple("edge", {1, 2});
    path.add_tuple("edge", {2, 1});
    CHECK(enumerate_embeddings(path, k3).empty());
    CHECK(maps_homomorphically(path, k3));
}

TEST_CASE("ramsey number 3 via arrow") {
    auto a = ordered_complete(2);
    auto b = ordered_complete(3);

    auto bad = check_arrow(ordered_complete(5), b, a, 2);
    CHECK(bad.verdict == Verdict::fails);
    REQUIRE(bad.coloring.has_value());
    CHECK(bad.coloring->size() == 10);
    CHECK(bad.coloring->front() == 1); // lex-first certificate starts with color 1
    CHECK(bad.checked >= 1);
    CHECK(bad.checked <= (1u << 10));

    auto inst = build_arrow_instance(ordered_complete(5), b, a);
    CHECK_FALSE(find_satisfying_family(inst, *bad.coloring, 1).has_value());

    auto good = check_arrow(ordered_complete(6), b, a, 2, {.budget = std::uint64_t(1) << 40});
    CHECK(good.verdict == Verdict::holds);
    CHECK(good.checked == std::uint64_t(1) << 15);
}

TEST_CASE("defect variant") {
    auto a = ordered_complete(2);
    auto b = ordered_complete(3);
    // With defect 2 and 2 colors every triangle trivially qualifies.
    auto r2 = check_arrow_defect(ordered_complete(3), b, a, 2, 2);
    CHECK(r2.verdict == Verdict::holds);
    // Three colors on K3 itself: color each edge differently.
    auto r3 = check_arrow_defect(ordered_complete(3), b, a, 3, 2);
    CHECK(r3.verdict == Verdict::fails);
    REQUIRE(r3.coloring.has_value());
}

TEST_CASE("vacuous and degenerate arrows") {
    auto a = ordered_complete(2);
    auto b = ordered_complete(3);
    // Host does not embed: fails with the all-ones coloring.
    auto no_host = check_arrow(ordered_complete(2), b, a, 2);
    CHECK(no_host.verdict == Verdict::fails);
    CHECK(no_host.coloring == std::vector<int>{1});
    CHECK(no_host.checked == 1);

    // Pattern does not embed into host but host embeds: holds vacuously.
    auto vac = check_arrow(ordered_complete(4), a, ordered_complete(3), 2);
    CHECK(vac.verdict == Verdict::holds);
}

TEST_CASE("budget refusal is upfront") {
    auto a = ordered_complete(2);
    auto b = ordered_complete(3);
    CHECK_THROWS_AS(check_arrow(ordered_complete(6), b, a, 2, {.budget = 1024}),
                    BudgetError);
}

TEST_CASE("parallel sweep is deterministic") {
    auto a = ordered_complete(2);
    auto b = ordered_complete(3);
    auto c = ordered_complete(5);
    auto lone = check_arrow(c, b, a, 2, {.jobs = 1});
    for (int jobs : {2, 4, 8}) {
        auto multi = check_arrow(c, b, a, 2, {.jobs = jobs});
        CHECK(multi.verdict == lone.verdict);
        CHECK(multi.coloring == lone.coloring);
        CHECK(multi.checked == lone.checked);
    }
}

TEST_CASE("hypergraph backend agrees") {
    auto a = ordered_complete(2);
    auto b = ordered_complete(3);
    auto bad = check_arrow_hypergraph(ordered_complete(5), b, a, 2);
    CHECK(bad.verdict == Verdict::fails);
    REQUIRE(bad.coloring.has_value());
    auto inst = build_arrow_instance(ordered_complete(5), b, a);
    CHECK_FALSE(find_satisfying_family(inst, *bad.coloring, 1).has_value());

    auto good = check_arrow_hypergraph(ordered_complete(6), b, a, 2,
                                       {.budget = std::uint64_t(1) << 40});
    CHECK(good.verdict == Verdict::holds);
}

TEST_CASE("simultaneous patterns reduce to plain arrow for one pattern") {
    auto a = ordered_complete(2);
    auto b = ordered_complete(3);
    auto c = ordered_complete(5);
    auto plain = check_arrow(c, b, a, 2);
    auto sim = check_simultaneous(c, b, {a}, 2);
    CHECK(sim.verdict == plain.verdict);
    REQUIRE(sim.colorings.has_value());
    CHECK(sim.colorings->size() == 1);
    CHECK(sim.colorings->front() == *plain.coloring);
}

TEST_CASE("simultaneous with point and edge patterns") {
    auto pt = [] {
        FiniteStructure s(ordered_graph_sig(), 1);
        return s;
    }();
    auto a = ordered_complete(2);
    auto b = ordered_complete(3);
    // On K3 itself the only host copy is the identity; coloring vertices and
    // edges independently must make one of the two patterns bichromatic.
    auto res = check_simultaneous(ordered_complete(3), b, {pt, a}, 2);
    CHECK(res.verdict == Verdict::fails);
    REQUIRE(res.colorings.has_value());
    CHECK(res.colorings->size() == 2);
    CHECK(res.colorings->at(0).size() == 3);
    CHECK(res.colorings->at(1).size() == 3);
}

TEST_CASE("hales-jewett lines") {
    CHECK(hj_line_count(2, 2) == 5);
    auto lines = hj_lines(2, 2);
    REQUIRE(lines.size() == 5);
    CHECK(lines.front() == Word{0, 0});
    CHECK(lines.back() == Word{2, 0});
    auto pts = line_points(Word{0, 1}, 2);
    CHECK(pts == std::vector<Word>{{1, 1}, {2, 1}});

    CHECK(word_index(Word{1, 1}, 2) == 0);
    CHECK(word_index(Word{2, 2}, 2) == 3);
    CHECK(index_word(2, 2, 2) == Word{2, 1});
}

TEST_CASE("hales-jewett numbers") {
    CHECK(hj_number(1, 5, 3) == 1);
    CHECK(hj_number(2, 2, 4) == 2);

    auto fail1 = hj_check(2, 2, 1);
    CHECK(fail1.verdict == Verdict::fails);
    REQUIRE(fail1.coloring.has_value());
    CHECK_FALSE(find_mono_line(2, 1, *fail1.coloring).has_value());

    auto hold2 = hj_check(2, 2, 2);
    CHECK(hold2.verdict == Verdict::holds);
}

TEST_CASE("json round trip") {
    auto k3 = ordered_complete(3);
    auto j = structure_to_json(k3);
    auto back = structure_from_json(j);
    CHECK(back == k3);
    CHECK(canonical_json_string(k3) == canonical_json_string(back));
    CHECK(structure_to_json(k3).dump() == structure_to_json(k3).dump());
}

TEST_CASE("canonical form identifies isomorphs") {
    FiniteStructure p1(graph_sig(), 3);
    p1.add_tuple("edge", {0, 1});
    p1.add_tuple("edge", {1, 0});
    p1.add_tuple("edge", {1, 2});
    p1.add_tuple("edge", {2, 1});
    FiniteStructure p2(graph_sig(), 3);
    p2.add_tuple("edge", {0, 2});
    p2.add_tuple("edge", {2, 0});
    p2.add_tuple("edge", {2, 1});
    p2.add_tuple("edge", {1, 2});
    CHECK(canonical_form(p1) == canonical_form(p2));
    CHECK(is_isomorphic(p1, p2));
    CHECK_FALSE(is_isomorphic(p1, complete_graph(3)));
}

TEST_CASE("irreducibility") {
    CHECK(is_irreducible(complete_graph(3)));
    FiniteStructure path(graph_sig(), 3);
    path.add_tuple("edge", {0, 1});
    path.add_tuple("edge", {1, 0});
    path.add_tuple("edge", {1, 2});
    path.add_tuple("edge", {2, 1});
    CHECK_FALSE(is_irreducible(path)); // 0 and 2 never co-occur
}

TEST_CASE("forbidden families") {
    auto k3 = complete_graph(3);
    CHECK_FALSE(in_forb({k3}, complete_graph(4)));
    FiniteStructure path(graph_sig(), 3);
    path.add_tuple("edge", {0, 1});
    path.add_tuple("edge", {1, 0});
    path.add_tuple("edge", {1, 2});
    path.add_tuple("edge", {2, 1});
    CHECK(in_forb({k3}, path));
}
