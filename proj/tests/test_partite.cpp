#include <doctest.h>

#include <algorithm>
#include <set>

#include "ramsey/embedding.hpp"
#include "ramsey/json_io.hpp"
#include "ramsey/partite.hpp"
#include "ramsey/structure.hpp"

using namespace ramsey;

namespace {

Signature graph_sig() { return Signature({{"edge", 2}}); }

Signature ordered_graph_sig() { return Signature({{"edge", 2}, {"ord", 2}}); }

FiniteStructure graph(int n, const std::vector<std::pair<int, int>>& edges) {
    FiniteStructure s(graph_sig(), n);
    for (auto [x, y] : edges) {
        s.add_tuple("edge", {x, y});
        s.add_tuple("edge", {y, x});
    }
    return s;
}

// Graph with the natural linear order on top.
FiniteStructure ordered_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    FiniteStructure s(ordered_graph_sig(), n);
    for (auto [x, y] : edges) {
        s.add_tuple("edge", {x, y});
        s.add_tuple("edge", {y, x});
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s.add_tuple("ord", {i, j});
    return s;
}

PartiteStructure pgraph(const std::vector<int>& levels,
                        const std::vector<std::pair<int, int>>& edges) {
    return PartiteStructure(graph(static_cast<int>(levels.size()), edges), levels);
}

// Single edge with one element per level.
Transversal edge_transversal() { return Transversal(pgraph({0, 1}, {{0, 1}})); }

FiniteStructure triangle() { return graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

} // namespace

TEST_CASE("partite structure validation") {
    CHECK_THROWS_AS(PartiteStructure(graph(2, {}), {0}), InputError);     // level count
    CHECK_THROWS_AS(PartiteStructure(graph(2, {}), {0, 2}), InputError);  // level 1 empty
    CHECK_THROWS_AS(PartiteStructure(graph(1, {}), {-1}), InputError);

    auto ps = pgraph({0, 1, 0, 1}, {{0, 1}, {2, 3}});
    CHECK(ps.level_count() == 2);
    CHECK(ps.level_members(0) == std::vector<int>{0, 2});
    CHECK(ps.level_members(1) == std::vector<int>{1, 3});
    CHECK(ps.level_of(3) == 1);

    CHECK_THROWS_AS(Transversal{ps}, InputError);
    CHECK_FALSE(is_transversal(ps));
    auto t = edge_transversal();
    CHECK(is_transversal(t.partite()));
    CHECK(t.element_at(1) == 1);
    CHECK(t.pi(ps, 2) == 0);
}

TEST_CASE("partite embeddings are the level preserving embeddings") {
    auto a = edge_transversal();
    auto b = pgraph({0, 0, 1, 1}, {{0, 2}, {0, 3}, {1, 3}});

    auto got = partite_embeddings(a.partite(), b);
    std::vector<Map> expect;
    for (const auto& m : enumerate_embeddings(a.base(), b.base())) {
        bool ok = true;
        for (int x = 0; x < 2; ++x)
            if (b.level_of(m[x]) != a.partite().level_of(x)) ok = false;
        if (ok) expect.push_back(m);
    }
    CHECK(got == expect);
    CHECK(got.size() == 3);
    for (const auto& m : got) CHECK(is_partite_embedding(a.partite(), b, m));
    CHECK_FALSE(is_partite_embedding(a.partite(), b, {2, 0})); // wrong levels

    // Mismatched level counts are refused rather than silently empty.
    CHECK_THROWS_AS(partite_embeddings(a.partite(), pgraph({0}, {})), InputError);
}

TEST_CASE("partite structure encodings round trip") {
    auto ps = pgraph({0, 1, 1, 2}, {{0, 1}, {1, 3}});

    auto enc = partite_to_structure(ps);
    CHECK(enc.signature().index_of("prec") >= 0);
    CHECK(enc.has_tuple("prec", {0, 0}));
    CHECK(enc.has_tuple("prec", {0, 3}));
    CHECK(enc.has_tuple("prec", {1, 2})); // same level, both directions
    CHECK(enc.has_tuple("prec", {2, 1}));
    CHECK_FALSE(enc.has_tuple("prec", {3, 0}));
    CHECK(structure_to_partite(enc) == ps);

    CHECK_THROWS_AS(partite_to_structure(ps, "edge"), InputError);
    CHECK_THROWS_AS(structure_to_partite(graph(2, {}), "prec"), InputError);

    // A binary relation that is not a weak linear order is rejected.
    FiniteStructure bad(Signature({{"prec", 2}}), 2);
    bad.add_tuple("prec", {0, 0});
    bad.add_tuple("prec", {1, 1});
    CHECK_THROWS_AS(structure_to_partite(bad, "prec"), InputError);

    CHECK(partite_from_json(partite_to_json(ps)) == ps);
    Json j = structure_to_json(ps.base());
    CHECK_THROWS_AS(partite_from_json(j), InputError); // levels missing
}

TEST_CASE("power at dimension one is isomorphic to the base") {
    auto point = Transversal(pgraph({0}, {}));
    std::vector<std::pair<Transversal, PartiteStructure>> cases = {
        {point, pgraph({0, 0, 0}, {})},
        {edge_transversal(), pgraph({0, 0, 1, 1}, {{0, 2}, {0, 3}, {1, 3}})},
        {edge_transversal(), pgraph({0, 1, 1}, {{0, 1}})}, // an uncovered point
        {Transversal(pgraph({0, 1, 2}, {{0, 1}, {1, 2}})),
         pgraph({0, 1, 1, 2, 2}, {{0, 1}, {1, 3}, {0, 2}, {2, 4}, {1, 4}})},
    };
    for (const auto& [a, b] : cases) {
        auto pw = nr_power(b, a, 1);
        REQUIRE(pw.size() == b.size());
        Map iso(b.size());
        for (int x = 0; x < b.size(); ++x)
            iso[x] = power_element(b, 1, b.level_of(x), {x});
        CHECK(is_partite_embedding(b, pw, iso));
        CHECK(pw.base().tuple_count() == b.base().tuple_count());
    }
}

TEST_CASE("power of a star matches the hand computation") {
    // One hub below two leaves; both leaves lie in a copy of the edge, so the
    // squared power connects the hub diagonal to all four leaf pairs.
    auto a = edge_transversal();
    auto b = pgraph({0, 1, 1}, {{0, 1}, {0, 2}});
    auto pw = nr_power(b, a, 2);
    REQUIRE(pw.size() == 1 + 4);
    CHECK(pw.level_members(0).size() == 1);
    CHECK(pw.level_members(1).size() == 4);

    const int hub = power_element(b, 2, 0, {0, 0});
    for (int u : {1, 2})
        for (int v : {1, 2}) {
            const int leaf = power_element(b, 2, 1, {u, v});
            CHECK(pw.base().has_tuple("edge", {hub, leaf}));
            CHECK(pw.base().has_tuple("edge", {leaf, hub}));
        }
    CHECK(pw.base().tuple_count() == 8);

    CHECK_THROWS_AS(power_element(b, 2, 0, {0}), InputError);
    CHECK_THROWS_AS(power_element(b, 2, 0, {1, 1}), InputError); // off level
}

TEST_CASE("copy diagonal embeddings cover the grid") {
    // Two points on one level against the single point pattern: the copies
    // are the points themselves and alpha ranges over the 2x2 grid.
    auto a = Transversal(pgraph({0}, {}));
    auto b = pgraph({0, 0}, {});
    const int m = 2, d = 2;

    auto alphas = power_alpha_embeddings(a, b, d);
    REQUIRE(alphas.size() == 4);
    std::set<Map> distinct(alphas.begin(), alphas.end());
    CHECK(distinct.size() == 4);

    auto pw = nr_power(b, a, d);
    for (const auto& g : alphas) CHECK(is_partite_embedding(a.partite(), pw, g));

    // Order matches the Hales-Jewett point indexing.
    CHECK(alphas[word_index({1, 1}, m)][0] == power_element(b, d, 0, {0, 0}));
    CHECK(alphas[word_index({1, 2}, m)][0] == power_element(b, d, 0, {0, 1}));
    CHECK(alphas[word_index({2, 1}, m)][0] == power_element(b, d, 0, {1, 0}));
    CHECK(alphas[word_index({2, 2}, m)][0] == power_element(b, d, 0, {1, 1}));
}

TEST_CASE("line witnesses embed and satisfy the central identity") {
    struct Case {
        Transversal a;
        PartiteStructure b;
    };
    std::vector<Case> cases = {
        {Transversal(pgraph({0}, {})), pgraph({0, 0}, {})},
        {edge_transversal(), pgraph({0, 1, 1}, {{0, 1}, {0, 2}})},
    };
    for (const auto& [a, b] : cases) {
        auto copies = partite_embeddings(a.partite(), b);
        const int m = static_cast<int>(copies.size());
        REQUIRE(m == 2);
        const int d = 2;
        auto pw = nr_power(b, a, d);
        auto alphas = power_alpha_embeddings(a, b, d);

        for (const auto& line : hj_lines(m, d)) {
            Map gl = power_line_embedding(a, b, d, line);
            CHECK(is_partite_embedding(b, pw, gl));
            // Composing with copy k lands on the diagonal embedding of the
            // word that fills the wildcard with k.
            for (int k = 1; k <= m; ++k) {
                Word filled = line;
                for (int& c : filled)
                    if (c == 0) c = k;
                CHECK(compose(gl, copies[k - 1]) == alphas[word_index(filled, m)]);
            }
        }
    }

    // A structure with an element in no copy of the pattern has no line witness.
    auto a = edge_transversal();
    auto b = pgraph({0, 1, 1}, {{0, 1}});
    CHECK_THROWS_AS(power_line_embedding(a, b, 2, {0, 1}), InputError);
}

TEST_CASE("templates project tuples onto the pattern") {
    auto a = edge_transversal();
    CHECK(is_template(a, pgraph({0, 0, 1}, {{0, 2}, {1, 2}})));
    CHECK(is_template(a, pgraph({0, 1}, {})));           // no tuples at all
    CHECK_FALSE(is_template(a, pgraph({0, 0, 1}, {{0, 1}}))); // same-level edge
    CHECK_FALSE(is_template(a, pgraph({0}, {})));        // level counts differ
}

TEST_CASE("powers can create triangles from triangle-free inputs") {
    // A is the empty transversal on five levels; B adds one more point on
    // level 0 joined to its level-mate. Both are triangle-free, but B has no
    // template over A, and the degree-2 power mixes the two copies of A into
    // a 4-cycle with a diagonal on level 0.
    auto a = Transversal(pgraph({0, 1, 2, 3, 4}, {}));
    auto b = pgraph({0, 1, 2, 3, 4, 0}, {{0, 5}});
    std::vector<FiniteStructure> k3{triangle()};

    CHECK(in_forb(k3, b.base()));
    CHECK_FALSE(is_template(a, b));
    CHECK(partite_embeddings(a.partite(), b).size() == 2);

    auto c = nr_power(b, a, 2);
    CHECK(c.size() == 8);
    CHECK_FALSE(in_forb(k3, c.base()));

    // One dimension cannot mix copies, so the triangle needs d >= 2.
    CHECK(in_forb(k3, nr_power(b, a, 1).base()));
}

TEST_CASE("partite lemma on the two point fiber") {
    auto a = Transversal(pgraph({0}, {}));
    auto b = pgraph({0, 0}, {});

    auto res = partite_lemma_witness(a, b, 2);
    CHECK(res.status == ConstructionStatus::complete);
    CHECK(res.m == 2);
    CHECK(res.d == 2);
    CHECK(res.d_exact);
    CHECK(res.witness.size() == 4);
    CHECK(check_partite_arrow(res.witness, b, a.partite(), 2).verdict == Verdict::holds);

    // One color and no copies are immediate.
    CHECK(partite_lemma_witness(a, b, 1).witness == b);
    auto vac = partite_lemma_witness(edge_transversal(), pgraph({0, 1}, {}), 2);
    CHECK(vac.status == ConstructionStatus::complete);
    CHECK(vac.m == 0);
    CHECK(vac.witness == pgraph({0, 1}, {}));
}

TEST_CASE("partite lemma extends uncovered points") {
    // Only one leaf lies in a copy; the other must be re-attached to every
    // occurrence of the covered part inside the power.
    auto a = edge_transversal();
    auto b = pgraph({0, 1, 1}, {{0, 1}});
    auto res = partite_lemma_witness(a, b, 2);
    CHECK(res.status == ConstructionStatus::complete);
    CHECK(res.m == 1);
    CHECK(res.d == 1);
    CHECK(res.witness.size() == 3);
    CHECK(check_partite_arrow(res.witness, b, a.partite(), 2).verdict == Verdict::holds);
}

TEST_CASE("construction for points in an ordered edge") {
    auto a = ordered_graph(1, {});
    auto b = ordered_graph(2, {{0, 1}});

    auto res = partite_construction(a, b, 2);
    REQUIRE(res.status == ConstructionStatus::complete);
    CHECK(res.p == 3);
    CHECK(res.q == 3);
    CHECK(res.stage_log.size() == 4);
    CHECK(res.stage_log[0].note == "compact base: one point per level");
    CHECK(res.output.size() == 3);
    CHECK(is_linear_order(res.output, "ord"));
    CHECK(check_arrow(res.output, b, a, 2).verdict == Verdict::holds);

    // Deterministic output, independent of sweep parallelism.
    PartiteOptions par;
    par.arrow.jobs = 4;
    auto res2 = partite_construction(a, b, 2, par);
    CHECK(canonical_json_string(res2.output) == canonical_json_string(res.output));
}

TEST_CASE("construction shortcuts") {
    auto a = ordered_graph(2, {{0, 1}});
    auto b = ordered_graph(3, {{0, 1}, {1, 2}});

    auto one = partite_construction(a, b, 1);
    CHECK(one.status == ConstructionStatus::complete);
    CHECK(one.output == b);

    auto vac = partite_construction(a, ordered_graph(2, {}), 2);
    CHECK(vac.status == ConstructionStatus::complete);
    CHECK(vac.output == ordered_graph(2, {}));

    CHECK_THROWS_AS(partite_construction(a, b, 0), InputError);
    CHECK_THROWS_AS(partite_construction(graph(2, {{0, 1}}), graph(3, {}), 2), InputError);
}

TEST_CASE("construction stops honestly on the ordered path") {
    // The compact base has conflicting demands here, so the stacked base is
    // used and the first stage blows past the occurrence budget.
    auto a = ordered_graph(2, {{0, 1}});
    auto b = ordered_graph(3, {{0, 1}, {1, 2}});

    auto res = partite_construction(a, b, 2);
    CHECK(res.status == ConstructionStatus::budget_partial);
    CHECK(res.p == 6);
    CHECK(res.failed_stage == 1);
    CHECK(res.stage_log[0].note == "stacked base: one host copy per level subset");
    CHECK(res.output.size() == 60);
    CHECK(is_linear_order(res.output, "ord"));
    CHECK_FALSE(res.note.empty());
}

TEST_CASE("forbidden construction validates its inputs") {
    auto a = ordered_graph(2, {{0, 1}});
    auto b = ordered_graph(3, {{0, 1}, {1, 2}});

    // Reducible family member: two disjoint edges.
    auto disconnected = graph(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(partite_construction_forb(a, b, 2, {disconnected}), InputError);

    // Host contains the forbidden triangle.
    auto bt = ordered_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK_THROWS_AS(partite_construction_forb(a, bt, 2, {triangle()}), InputError);

    // Family signature must match the unordered part.
    FiniteStructure wrong(Signature({{"arc", 2}}), 2);
    CHECK_THROWS_AS(partite_construction_forb(a, b, 2, {wrong}), InputError);

    // Empty family reduces to the unrestricted construction.
    auto res = partite_construction_forb(ordered_graph(1, {}), a, 2, {});
    CHECK(res.status == ConstructionStatus::complete);
    CHECK(check_arrow(res.output, a, ordered_graph(1, {}), 2).verdict == Verdict::holds);
}

TEST_CASE("forbidden construction with a supplied ambient") {
    auto a = ordered_graph(2, {{0, 1}});
    auto b = ordered_graph(3, {{0, 1}, {1, 2}});
    auto ambient =
        ordered_graph(7, {{0, 1}, {1, 3}, {1, 4}, {2, 3}, {3, 4}, {3, 6}, {4, 5}});

    PartiteOptions opts;
    opts.ambient = ambient;
    auto res = partite_construction_forb(a, b, 2, {triangle()}, opts);

    // The first stage completes per theory (two copies, squared power) but
    // its glued result is too large to emit, so the base is returned.
    CHECK(res.status == ConstructionStatus::budget_partial);
    CHECK(res.p == 7);
    CHECK(res.q == 7);
    REQUIRE(res.stage_log.size() >= 2);
    CHECK(res.stage_log[0].result_points == 21);
    CHECK(res.stage_log[1].m == 2);
    CHECK(res.stage_log[1].d == 2);
    CHECK(res.output.size() == 21);
    CHECK(is_linear_order(res.output, "ord"));
    CHECK(in_forb({triangle()}, reduct(res.output, {"edge"})));

    // Arrow verification on the partial output runs within budget and,
    // as expected for a partial, refutes.
    auto chk = check_arrow(res.output, b, a, 2);
    CHECK(chk.verdict == Verdict::fails);
}

TEST_CASE("ambient search finds the complete graph for points") {
    auto a = ordered_graph(1, {});
    auto b = ordered_graph(2, {{0, 1}});
    auto found = find_arrow_ambient(a, b, 2, 4);
    REQUIRE(found.has_value());
    CHECK(found->size() == 3);
    CHECK(found->tuple_count("edge") == 6);
    CHECK(check_arrow(*found, b, a, 2).verdict == Verdict::holds);
}

TEST_CASE("ambient search is exhaustive below the threshold") {
    // No linearly ordered graph on up to six vertices arrows the ordered
    // path with two colors; the first witness appears at seven vertices.
    auto a = ordered_graph(2, {{0, 1}});
    auto b = ordered_graph(3, {{0, 1}, {1, 2}});
    CHECK_FALSE(find_arrow_ambient(a, b, 2, 6).has_value());
}
