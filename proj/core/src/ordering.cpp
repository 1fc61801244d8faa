#include "ramsey/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "ramsey/embedding.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/json_io.hpp"
#include "ramsey/tree.hpp"

namespace ramsey {

Signature OrderExpansionFamily::base_signature() const {
    std::vector<RelationSymbol> syms;
    for (const auto& rs : expanded.signature.symbols())
        if (rs.name != order_symbol) syms.push_back(rs);
    return Signature(syms);
}

FiniteStructure OrderExpansionFamily::reduct_of(const FiniteStructure& member) const {
    Signature base = base_signature();
    std::vector<std::string> keep;
    for (const auto& rs : base.symbols()) keep.push_back(rs.name);
    return reduct(member, keep);
}

std::vector<FiniteStructure> OrderExpansionFamily::expansions_of(const FiniteStructure& s) const {
    if (!(s.signature() == base_signature()))
        throw InputError("ordering: structure is not over the reduct signature");
    std::vector<FiniteStructure> out;
    int n = s.size();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        FiniteStructure cand(expanded.signature, n);
        for (int r = 0; r < s.signature().size(); ++r) {
            const auto& name = s.signature().at(r).name;
            for (const auto& t : s.relation(r)) cand.add_tuple(name, t);
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                cand.add_tuple(order_symbol,
                               {perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]});
        if (expanded.contains(cand)) out.push_back(std::move(cand));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

OrderingReport check_ordering_property(const OrderExpansionFamily& f, const FiniteStructure& x,
                                       int max_size) {
    OrderingReport rep;
    auto x_expansions = f.expansions_of(x);
    if (x_expansions.empty()) throw InputError("ordering: x has no expansion in the class");
    for (int k = x.size(); k <= max_size; ++k) {
        // Candidate reducts of size k, one per isomorphism type.
        std::vector<FiniteStructure> candidates;
        std::set<std::string> seen;
        for (const auto& member : f.expanded.members_of_size(k)) {
            FiniteStructure red = f.reduct_of(member);
            if (seen.insert(canonical_json_string(canonical_form(red))).second)
                candidates.push_back(std::move(red));
        }
        for (const auto& y : candidates) {
            bool works = true;
            for (const auto& ye : f.expansions_of(y)) {
                for (const auto& xe : x_expansions) {
                    if (!exists_embedding(xe, ye)) {
                        if (!rep.blocking_x) {
                            rep.blocking_x = xe;
                            rep.blocking_y = ye;
                        }
                        works = false;
                        break;
                    }
                }
                if (!works) break;
            }
            if (works) {
                rep.y = y;
                rep.blocking_x.reset();
                rep.blocking_y.reset();
                return rep;
            }
        }
    }
    return rep;
}

namespace {

// Positions of each element in the structure order.
std::vector<int> order_positions(const FiniteStructure& c, const std::string& sym) {
    auto order = order_of(c, sym);
    std::vector<int> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    return pos;
}

DefeatColoring finish_defeat(const FiniteStructure& c, FiniteStructure pattern,
                             FiniteStructure target, std::vector<int> convex_order) {
    DefeatColoring out;
    out.pattern = std::move(pattern);
    out.target = std::move(target);
    out.convex_order = std::move(convex_order);
    std::vector<int> cpos(out.convex_order.size());
    for (std::size_t i = 0; i < out.convex_order.size(); ++i)
        cpos[static_cast<std::size_t>(out.convex_order[i])] = static_cast<int>(i);
    for (const auto& e : enumerate_embeddings(out.pattern, c))
        out.coloring.push_back(
            cpos[static_cast<std::size_t>(e[0])] < cpos[static_cast<std::size_t>(e[1])] ? 1 : 2);
    return out;
}

} // namespace

DefeatColoring convex_defeat_equivalence(const FiniteStructure& c) {
    auto cls = equivalence_order_class();
    if (!cls.contains(c))
        throw InputError("ordering: structure is not in the equivalence and order class");
    int n = c.size();
    auto pos = order_positions(c, "ord");
    // Convex order: blocks by their order-minimal element, the order inside.
    std::vector<int> block_min(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        int best = pos[static_cast<std::size_t>(x)];
        for (int y = 0; y < n; ++y)
            if (c.has_tuple("eq", {x, y}))
                best = std::min(best, pos[static_cast<std::size_t>(y)]);
        block_min[static_cast<std::size_t>(x)] = best;
    }
    std::vector<int> conv(static_cast<std::size_t>(n));
    std::iota(conv.begin(), conv.end(), 0);
    std::sort(conv.begin(), conv.end(), [&](int a, int b) {
        auto ka = std::make_pair(block_min[static_cast<std::size_t>(a)],
                                 pos[static_cast<std::size_t>(a)]);
        auto kb = std::make_pair(block_min[static_cast<std::size_t>(b)],
                                 pos[static_cast<std::size_t>(b)]);
        return ka < kb;
    });

    FiniteStructure pattern(cls.signature, 2);
    pattern.add_tuple("eq", {0, 0});
    pattern.add_tuple("eq", {1, 1});
    pattern.add_tuple("ord", {0, 1});

    // Blocks {0,1} and {2,3}, ordered 1 < 2 < 0 < 3.
    FiniteStructure target(cls.signature, 4);
    for (int i = 0; i < 4; ++i) target.add_tuple("eq", {i, i});
    target.add_tuple("eq", {0, 1});
    target.add_tuple("eq", {1, 0});
    target.add_tuple("eq", {2, 3});
    target.add_tuple("eq", {3, 2});
    for (auto [u, v] : {std::pair<int, int>{1, 2}, {1, 0}, {1, 3}, {2, 0}, {2, 3}, {0, 3}})
        target.add_tuple("ord", {u, v});
    if (!cls.contains(target)) throw InvariantError("ordering: defeat target left the class");
    return finish_defeat(c, std::move(pattern), std::move(target), std::move(conv));
}

DefeatColoring convex_defeat_ctree(const FiniteStructure& c) {
    auto cls = branching_order_class();
    if (!cls.contains(c))
        throw InputError("ordering: structure is not in the ordered branching class");
    LeafTree t = tree_from_branching(c, "C", "ord");
    std::vector<int> conv = t.leaves();

    FiniteStructure pattern(cls.signature, 2);
    pattern.add_tuple("C", {0, 1, 1});
    pattern.add_tuple("C", {1, 0, 0});
    pattern.add_tuple("ord", {0, 1});

    // Cones {0,1} and {2,3}, ordered 0 < 2 < 1 < 3.
    FiniteStructure base = tree_to_structure(
        LeafTree::node(LeafTree::node(LeafTree::leaf(0), LeafTree::leaf(1)),
                       LeafTree::node(LeafTree::leaf(2), LeafTree::leaf(3))));
    FiniteStructure target(cls.signature, 4);
    for (const auto& tup : base.relation("C")) target.add_tuple("C", tup);
    for (auto [u, v] : {std::pair<int, int>{0, 2}, {0, 1}, {0, 3}, {2, 1}, {2, 3}, {1, 3}})
        target.add_tuple("ord", {u, v});
    if (!cls.contains(target)) throw InvariantError("ordering: defeat target left the class");
    return finish_defeat(c, std::move(pattern), std::move(target), std::move(conv));
}

} // namespace ramsey
