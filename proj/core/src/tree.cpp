#include "ramsey/tree.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "ramsey/embedding.hpp"
#include "ramsey/errors.hpp"

namespace ramsey {

LeafTree LeafTree::leaf(int element) {
    if (element < 0) throw InputError("tree: leaf elements must be non-negative");
    LeafTree t;
    t.element_ = element;
    return t;
}

LeafTree LeafTree::node(LeafTree left, LeafTree right) {
    LeafTree t;
    t.children_.reserve(2);
    t.children_.push_back(std::move(left));
    t.children_.push_back(std::move(right));
    return t;
}

int LeafTree::element() const {
    if (!is_leaf()) throw InputError("tree: element() called on an internal node");
    return element_;
}

const LeafTree& LeafTree::left() const {
    if (is_leaf()) throw InputError("tree: left() called on a leaf");
    return children_[0];
}

const LeafTree& LeafTree::right() const {
    if (is_leaf()) throw InputError("tree: right() called on a leaf");
    return children_[1];
}

int LeafTree::leaf_count() const {
    if (is_leaf()) return 1;
    return children_[0].leaf_count() + children_[1].leaf_count();
}

int LeafTree::height() const {
    if (is_leaf()) return 0;
    return 1 + std::max(children_[0].height(), children_[1].height());
}

static void collect_leaves(const LeafTree& t, std::vector<int>& out) {
    if (t.is_leaf()) {
        out.push_back(t.element());
        return;
    }
    collect_leaves(t.left(), out);
    collect_leaves(t.right(), out);
}

std::vector<int> LeafTree::leaves() const {
    std::vector<int> out;
    collect_leaves(*this, out);
    return out;
}

bool LeafTree::operator==(const LeafTree& other) const {
    if (is_leaf() != other.is_leaf()) return false;
    if (is_leaf()) return element_ == other.element_;
    return children_[0] == other.children_[0] && children_[1] == other.children_[1];
}

Json tree_to_json(const LeafTree& t) {
    if (t.is_leaf()) return Json(t.element());
    return Json::array({tree_to_json(t.left()), tree_to_json(t.right())});
}

LeafTree tree_from_json(const Json& j) {
    if (j.is_number_integer()) {
        long long v = j.get<long long>();
        if (v < 0) throw InputError("tree: leaf elements must be non-negative");
        return LeafTree::leaf(static_cast<int>(v));
    }
    if (j.is_array() && j.size() == 2)
        return LeafTree::node(tree_from_json(j[0]), tree_from_json(j[1]));
    throw InputError("tree: expected an integer leaf or a two-element array node");
}

// Shapes over the element range [lo, lo+k), materialised per subrange.
static std::vector<LeafTree> shapes_on_range(int lo, int k) {
    std::vector<LeafTree> out;
    if (k == 1) {
        out.push_back(LeafTree::leaf(lo));
        return out;
    }
    for (int ls = 1; ls < k; ++ls) {
        auto lefts = shapes_on_range(lo, ls);
        auto rights = shapes_on_range(lo + ls, k - ls);
        for (const auto& l : lefts)
            for (const auto& r : rights) out.push_back(LeafTree::node(l, r));
    }
    return out;
}

void visit_tree_shapes(int k, const std::function<bool(const LeafTree&)>& visit) {
    if (k < 1) throw InputError("tree: shape enumeration needs at least one leaf");
    if (k == 1) {
        visit(LeafTree::leaf(0));
        return;
    }
    // Stream over root splits; full materialisation only below the root.
    for (int ls = 1; ls < k; ++ls) {
        auto lefts = shapes_on_range(0, ls);
        auto rights = shapes_on_range(ls, k - ls);
        for (const auto& l : lefts)
            for (const auto& r : rights)
                if (!visit(LeafTree::node(l, r))) return;
    }
}

std::vector<LeafTree> all_tree_shapes(int k) {
    std::vector<LeafTree> out;
    visit_tree_shapes(k, [&](const LeafTree& t) {
        out.push_back(t);
        return true;
    });
    return out;
}

// Trees over an explicit leaf set; keeping the minimum in the left block
// picks one planar representative per branching relation.
static std::vector<LeafTree> labeled_trees_on(const std::vector<int>& elems) {
    std::vector<LeafTree> out;
    if (elems.size() == 1) {
        out.push_back(LeafTree::leaf(elems[0]));
        return out;
    }
    int rest = static_cast<int>(elems.size()) - 1;
    for (int mask = 1; mask < (1 << rest); ++mask) {
        std::vector<int> ls{elems[0]}, rs;
        for (int i = 0; i < rest; ++i) {
            if (mask & (1 << i))
                rs.push_back(elems[static_cast<std::size_t>(i) + 1]);
            else
                ls.push_back(elems[static_cast<std::size_t>(i) + 1]);
        }
        for (const auto& lt : labeled_trees_on(ls))
            for (const auto& rt : labeled_trees_on(rs)) out.push_back(LeafTree::node(lt, rt));
    }
    return out;
}

std::vector<LeafTree> all_labeled_trees(int k) {
    if (k < 1) throw InputError("tree: labeled enumeration needs at least one leaf");
    std::vector<int> elems(static_cast<std::size_t>(k));
    std::iota(elems.begin(), elems.end(), 0);
    return labeled_trees_on(elems);
}

static std::string tuple_note(const char* what, const Tuple& t) {
    std::ostringstream os;
    os << what << " (";
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ")";
    return os.str();
}

TreeCheckReport check_c_axioms(const FiniteStructure& s, const std::string& c_symbol,
                               const std::string& order_symbol, bool require_convex) {
    TreeCheckReport rep;
    auto fail = [&](std::string note) {
        rep.valid = false;
        rep.note = std::move(note);
        return rep;
    };
    if (!s.signature().contains(c_symbol)) return fail("missing symbol " + c_symbol);
    if (!s.signature().contains(order_symbol)) return fail("missing symbol " + order_symbol);
    if (s.signature().at(s.signature().index_of(c_symbol)).arity != 3)
        return fail(c_symbol + " must be ternary");
    if (!is_linear_order(s, order_symbol)) return fail(order_symbol + " is not a linear order");
    int n = s.size();
    auto has = [&](int a, int b, int d) { return s.has_tuple(c_symbol, {a, b, d}); };
    for (const auto& t : s.relation(c_symbol)) {
        int a = t[0], b = t[1], d = t[2];
        if (a == b || a == d) return fail(tuple_note("first argument repeated in", t));
        if (!has(a, d, b)) return fail(tuple_note("missing swap of", t));
        if (b != d && has(b, a, d)) return fail(tuple_note("exclusivity fails at", t));
        for (int e = 0; e < n; ++e) {
            if (e == a || e == b || e == d) continue;
            if (!has(a, e, d) && !has(e, b, d))
                return fail(tuple_note("splitting axiom fails for", {a, b, d, e}));
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && !has(a, b, b)) return fail(tuple_note("pair tuple missing", {a, b, b}));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int d = b + 1; d < n; ++d)
                if (!has(a, b, d) && !has(b, a, d) && !has(d, a, b))
                    return fail(tuple_note("branching is not binary at", {a, b, d}));
    if (require_convex) {
        auto order = order_of(s, order_symbol);
        std::vector<int> pos(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
        for (const auto& t : s.relation(c_symbol)) {
            if (t[1] == t[2]) continue;
            int pa = pos[static_cast<std::size_t>(t[0])];
            int lo = std::min(pos[static_cast<std::size_t>(t[1])], pos[static_cast<std::size_t>(t[2])]);
            int hi = std::max(pos[static_cast<std::size_t>(t[1])], pos[static_cast<std::size_t>(t[2])]);
            if (lo < pa && pa < hi) return fail(tuple_note("order is not convex at", t));
        }
    }
    return rep;
}

// Leaf values relabelled to their rank in sorted order; shape preserved.
static LeafTree relabel_tree(const LeafTree& t, const std::vector<int>& rank_of) {
    if (t.is_leaf()) return LeafTree::leaf(rank_of[static_cast<std::size_t>(t.element())]);
    return LeafTree::node(relabel_tree(t.left(), rank_of), relabel_tree(t.right(), rank_of));
}

static LeafTree normalize_leaves(const LeafTree& t) {
    auto sorted = t.leaves();
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> rank_of(static_cast<std::size_t>(sorted.back()) + 1, -1);
    for (std::size_t i = 0; i < sorted.size(); ++i)
        rank_of[static_cast<std::size_t>(sorted[i])] = static_cast<int>(i);
    return relabel_tree(t, rank_of);
}

FiniteStructure tree_to_structure(const LeafTree& t, const std::string& c_symbol,
                                  const std::string& order_symbol) {
    auto ls = t.leaves();
    int n = static_cast<int>(ls.size());
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : ls) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw InputError("tree: leaf elements must be exactly 0..k-1 without repeats");
        seen[static_cast<std::size_t>(v)] = true;
    }
    FiniteStructure s(Signature({{c_symbol, 3}, {order_symbol, 2}}), n);
    for (std::size_t i = 0; i < ls.size(); ++i)
        for (std::size_t j = i + 1; j < ls.size(); ++j) s.add_tuple(order_symbol, {ls[i], ls[j]});
    // C(a;b,c) iff a is outside the smallest subtree containing b and c: walk
    // every subtree and emit its leaf set as the cone of each pair meeting there.
    std::function<std::vector<int>(const LeafTree&)> walk = [&](const LeafTree& sub) {
        if (sub.is_leaf()) return std::vector<int>{sub.element()};
        auto l = walk(sub.left());
        auto r = walk(sub.right());
        std::vector<bool> inside(static_cast<std::size_t>(n), false);
        for (int v : l) inside[static_cast<std::size_t>(v)] = true;
        for (int v : r) inside[static_cast<std::size_t>(v)] = true;
        for (int b : l)
            for (int c : r)
                for (int a = 0; a < n; ++a)
                    if (!inside[static_cast<std::size_t>(a)]) {
                        s.add_tuple(c_symbol, {a, b, c});
                        s.add_tuple(c_symbol, {a, c, b});
                    }
        l.insert(l.end(), r.begin(), r.end());
        return l;
    };
    walk(t);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) s.add_tuple(c_symbol, {a, b, b});
    return s;
}

// Splits elems into the two maximal proper cones: x and y share a cone iff
// some z in elems lies outside their meet.
static std::vector<std::vector<int>> root_blocks(const FiniteStructure& s,
                                                 const std::string& c_symbol,
                                                 const std::vector<int>& elems) {
    std::vector<std::vector<int>> blocks;
    for (int x : elems) {
        bool placed = false;
        for (auto& block : blocks) {
            int y = block[0];
            for (int z : elems) {
                if (z == x || z == y) continue;
                if (s.has_tuple(c_symbol, {z, x, y})) {
                    block.push_back(x);
                    placed = true;
                    break;
                }
            }
            if (placed) break;
        }
        if (!placed) blocks.push_back({x});
    }
    return blocks;
}

static LeafTree branching_tree_rec(const FiniteStructure& s, const std::string& c_symbol,
                                   const std::vector<int>& pos, const std::vector<int>& elems) {
    if (elems.size() == 1) return LeafTree::leaf(elems[0]);
    auto blocks = root_blocks(s, c_symbol, elems);
    if (blocks.size() != 2) throw InputError("tree: branching does not split into two cones");
    auto order_min = [&](const std::vector<int>& b) {
        int best = pos[static_cast<std::size_t>(b[0])];
        for (int v : b) best = std::min(best, pos[static_cast<std::size_t>(v)]);
        return best;
    };
    if (order_min(blocks[0]) > order_min(blocks[1])) std::swap(blocks[0], blocks[1]);
    return LeafTree::node(branching_tree_rec(s, c_symbol, pos, blocks[0]),
                          branching_tree_rec(s, c_symbol, pos, blocks[1]));
}

LeafTree tree_from_branching(const FiniteStructure& s, const std::string& c_symbol,
                             const std::string& order_symbol) {
    auto rep = check_c_axioms(s, c_symbol, order_symbol, /*require_convex=*/false);
    if (!rep.valid) throw InputError("tree: " + rep.note);
    if (s.size() == 0) throw InputError("tree: empty structure");
    std::vector<int> elems(static_cast<std::size_t>(s.size()));
    std::iota(elems.begin(), elems.end(), 0);
    auto order = order_of(s, order_symbol);
    std::vector<int> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    LeafTree t = branching_tree_rec(s, c_symbol, pos, elems);
    if (!(tree_to_structure(t, c_symbol, order_symbol).relation(c_symbol) ==
          s.relation(c_symbol)))
        throw InputError("tree: branching relation is not tree-representable");
    return t;
}

LeafTree structure_to_tree(const FiniteStructure& s, const std::string& c_symbol,
                           const std::string& order_symbol) {
    auto rep = check_c_axioms(s, c_symbol, order_symbol, /*require_convex=*/true);
    if (!rep.valid) throw InputError("tree: " + rep.note);
    LeafTree t = tree_from_branching(s, c_symbol, order_symbol);
    if (!(tree_to_structure(t, c_symbol, order_symbol) == s))
        throw InputError("tree: order is not the planar order of any representing tree");
    return t;
}

// Embeddings of sub's structure into part's structure, written in the host
// tree's element labels (part is one root subtree of the host).
static std::vector<Map> part_embeddings(const LeafTree& sub, const LeafTree& part) {
    auto s_sub = tree_to_structure(normalize_leaves(sub));
    auto s_part = tree_to_structure(normalize_leaves(part));
    auto labels = part.leaves();
    std::sort(labels.begin(), labels.end());
    std::vector<Map> out;
    for (const auto& e : enumerate_embeddings(s_sub, s_part)) {
        Map m(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) m[i] = labels[static_cast<std::size_t>(e[i])];
        out.push_back(std::move(m));
    }
    return out;
}

SplitEmbeddings split_embeddings(const LeafTree& a, const LeafTree& t) {
    if (a.is_leaf() || t.is_leaf())
        throw InputError("tree: split embeddings need internal roots on both sides");
    auto s_a = tree_to_structure(a);
    auto s_t = tree_to_structure(t);
    SplitEmbeddings out;
    out.left = part_embeddings(a.left(), t.left());
    out.right = part_embeddings(a.right(), t.right());
    auto la = a.left().leaves();
    auto ra = a.right().leaves();
    std::sort(la.begin(), la.end());
    std::sort(ra.begin(), ra.end());
    out.assembled.reserve(out.left.size() * out.right.size());
    for (const auto& el : out.left)
        for (const auto& er : out.right) {
            Map m(static_cast<std::size_t>(a.leaf_count()));
            for (std::size_t i = 0; i < la.size(); ++i) m[static_cast<std::size_t>(la[i])] = el[i];
            for (std::size_t i = 0; i < ra.size(); ++i) m[static_cast<std::size_t>(ra[i])] = er[i];
            if (!is_embedding(s_a, s_t, m))
                throw InvariantError("tree: assembled split map is not an embedding");
            out.assembled.push_back(std::move(m));
        }
    return out;
}

static LeafTree shift_leaves(const LeafTree& t, int delta) {
    if (t.is_leaf()) return LeafTree::leaf(t.element() + delta);
    return LeafTree::node(shift_leaves(t.left(), delta), shift_leaves(t.right(), delta));
}

static std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

static int find_embedding_index(const std::vector<Map>& sorted_embs, const Map& m) {
    auto it = std::lower_bound(sorted_embs.begin(), sorted_embs.end(), m);
    if (it == sorted_embs.end() || !(*it == m))
        throw InvariantError("tree: composed map missing from the embedding list");
    return static_cast<int>(it - sorted_embs.begin());
}

// Claim data of one split stage: the root-split copies of a in t and, for
// every pair of d-copies (f1 into t's left part, f2 into its right part), the
// assembled copy indices realised through d.
struct StageClaim {
    SplitEmbeddings split;
    std::vector<Map> f1s, f2s;              // d-copies, in t element labels
    std::vector<std::vector<int>> families; // families[i * f2s.size() + j]
};

static StageClaim build_stage_claim(const LeafTree& a, const LeafTree& d, const LeafTree& t) {
    StageClaim sc;
    sc.split = split_embeddings(a, t);
    sc.f1s = part_embeddings(d, t.left());
    sc.f2s = part_embeddings(d, t.right());
    auto s_d = tree_to_structure(normalize_leaves(d));
    auto e1s = enumerate_embeddings(tree_to_structure(normalize_leaves(a.left())), s_d);
    auto e2s = enumerate_embeddings(tree_to_structure(normalize_leaves(a.right())), s_d);
    std::size_t r_count = sc.split.right.size();
    for (const auto& f1 : sc.f1s)
        for (const auto& f2 : sc.f2s) {
            std::vector<int> fam;
            for (const auto& e1 : e1s)
                for (const auto& e2 : e2s) {
                    int li = find_embedding_index(sc.split.left, compose(f1, e1));
                    int ri = find_embedding_index(sc.split.right, compose(f2, e2));
                    fam.push_back(li * static_cast<int>(r_count) + ri);
                }
            std::sort(fam.begin(), fam.end());
            fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
            sc.families.push_back(std::move(fam));
        }
    return sc;
}

LeafTree construct_split_witness(const LeafTree& a, const LeafTree& d, int r,
                                 const TreeOptions& opts) {
    if (a.is_leaf()) throw InputError("tree: split witness needs a pattern with a root split");
    if (r < 1) throw InputError("tree: need at least one color");
    auto a_n = normalize_leaves(a);
    auto d_n = normalize_leaves(d);
    auto a_l = normalize_leaves(a_n.left());
    auto a_r = normalize_leaves(a_n.right());
    LeafTree f2 = construct_ramsey_tree(a_r, d_n, r, opts);
    auto m2 = enumerate_embeddings(tree_to_structure(a_r), tree_to_structure(f2)).size();
    std::uint64_t s =
        checked_pow(static_cast<std::uint64_t>(r), m2, std::uint64_t{1} << 30);
    if (s > (std::uint64_t{1} << 30))
        throw BudgetError("tree: exponentiated color count exceeds 2^30");
    LeafTree f1 = construct_ramsey_tree(a_l, d_n, static_cast<int>(s), opts);
    LeafTree f = LeafTree::node(f1, shift_leaves(f2, f1.leaf_count()));
    if (opts.verify_claim) {
        auto sc = build_stage_claim(a_n, d_n, f);
        auto res = sweep_families(static_cast<int>(sc.split.assembled.size()), sc.families, r,
                                  1, opts.arrow);
        if (res.verdict != Verdict::holds)
            throw InvariantError("tree: split witness failed its claim sweep");
    }
    return f;
}

LeafTree construct_ramsey_tree(const LeafTree& a, const LeafTree& b, int r,
                               const TreeOptions& opts) {
    return construct_ramsey_tree_chain(a, b, r, opts).witness;
}

TreeConstruction construct_ramsey_tree_chain(const LeafTree& a, const LeafTree& b, int r,
                                             const TreeOptions& opts) {
    if (r < 1) throw InputError("tree: need at least one color");
    auto a_n = normalize_leaves(a);
    auto b_n = normalize_leaves(b);
    auto s_a = tree_to_structure(a_n);
    auto s_b = tree_to_structure(b_n);
    auto arrows = [&](const LeafTree& c) {
        return check_arrow(tree_to_structure(c), s_b, s_a, r, opts.arrow).verdict ==
               Verdict::holds;
    };
    if (a_n.is_leaf()) {
        for (int k = 1; k <= opts.max_base_leaves; ++k) {
            TreeConstruction found;
            bool done = false;
            visit_tree_shapes(k, [&](const LeafTree& shape) {
                if (arrows(shape)) {
                    found = TreeConstruction{shape, {shape}};
                    done = true;
                }
                return !done;
            });
            if (done) return found;
        }
        throw BudgetError("tree: no witness within the leaf-count cap");
    }
    int cap = opts.max_chain;
    if (cap == 0) {
        std::uint64_t stages = checked_pow(static_cast<std::uint64_t>(b_n.height()) + 1,
                                           static_cast<std::uint64_t>(r), 64);
        cap = static_cast<int>(std::min<std::uint64_t>(stages, 64));
    }
    TreeConstruction tc;
    tc.chain.push_back(LeafTree::leaf(0));
    while (true) {
        if (arrows(tc.chain.back())) {
            tc.witness = tc.chain.back();
            return tc;
        }
        if (static_cast<int>(tc.chain.size()) >= cap)
            throw BudgetError("tree: witness chain exceeded its stage cap");
        tc.chain.push_back(construct_split_witness(a_n, tc.chain.back(), r, opts));
    }
}

namespace {

// Word-indexed replay state. Words are over {1, 2}; the entry of w carries
// g_w, an embedding of the structure of chain[n-1-|w|] into the witness
// structure, plus the first monochromatic d-copy pair of the claim at w.
struct ReplayContext {
    const std::vector<LeafTree>* chain = nullptr;
    const std::vector<int>* coloring = nullptr;
    std::vector<Map> embs_c; // Emb(a, witness), lex sorted
    std::vector<StageClaim> stages; // stages[j-1] splits chain[j] over chain[j-1]

    struct Entry {
        Map g;
        int color = 0; // claim color; -1 when the claim is vacuous at this word
        bool solved = false;
        Map f1, f2;
    };
    std::map<std::vector<int>, Entry> words;

    int chain_len() const { return static_cast<int>(chain->size()); }

    Entry& entry(const std::vector<int>& w) {
        auto it = words.find(w);
        if (it != words.end()) return it->second;
        std::vector<int> parent(w.begin(), w.end() - 1);
        Entry& pe = claim(parent);
        Entry e;
        e.g = compose(pe.g, w.back() == 1 ? pe.f1 : pe.f2);
        return words.emplace(w, std::move(e)).first->second;
    }

    // Solves the claim at w: the first (f1, f2) whose assembled copies of a
    // through d all share a color under the pulled-back coloring.
    Entry& claim(const std::vector<int>& w) {
        Entry& e = entry(w);
        if (e.solved) return e;
        int stage = chain_len() - 1 - static_cast<int>(w.size());
        if (stage < 1) throw InvariantError("tree: claim requested below the chain");
        const StageClaim& sc = stages[static_cast<std::size_t>(stage - 1)];
        if (sc.f1s.empty() || sc.f2s.empty())
            throw InvariantError("tree: stage has no d-copy pair");
        std::vector<int> psi(sc.split.assembled.size());
        for (std::size_t p = 0; p < psi.size(); ++p) {
            Map m = compose(e.g, sc.split.assembled[p]);
            psi[static_cast<std::size_t>(p)] =
                (*coloring)[static_cast<std::size_t>(find_embedding_index(embs_c, m))];
        }
        bool all_empty = true;
        std::size_t f2n = sc.f2s.size();
        for (std::size_t i = 0; i < sc.f1s.size() && !e.solved; ++i)
            for (std::size_t j = 0; j < f2n && !e.solved; ++j) {
                const auto& fam = sc.families[i * f2n + j];
                if (fam.empty()) continue;
                all_empty = false;
                int c = psi[static_cast<std::size_t>(fam[0])];
                bool mono = true;
                for (int p : fam)
                    if (psi[static_cast<std::size_t>(p)] != c) {
                        mono = false;
                        break;
                    }
                if (mono) {
                    e.color = c;
                    e.f1 = sc.f1s[i];
                    e.f2 = sc.f2s[j];
                    e.solved = true;
                }
            }
        if (!e.solved) {
            if (!all_empty)
                throw InvariantError("tree: claim search found no monochromatic pair");
            // No copy of a can straddle this word; any d-copy pair serves.
            e.color = -1;
            e.f1 = sc.f1s[0];
            e.f2 = sc.f2s[0];
            e.solved = true;
        }
        return e;
    }
};

} // namespace

TreeReplayResult tree_replay(const TreeConstruction& tc, const LeafTree& a, const LeafTree& b,
                             int r, const std::vector<int>& coloring, const TreeOptions& opts) {
    (void)opts;
    if (tc.chain.empty() || !(tc.chain.back() == tc.witness))
        throw InputError("tree: replay needs the construction chain of its witness");
    auto a_n = normalize_leaves(a);
    auto b_n = normalize_leaves(b);
    auto s_a = tree_to_structure(a_n);
    auto s_b = tree_to_structure(b_n);
    auto s_c = tree_to_structure(tc.witness);
    auto embs_c = enumerate_embeddings(s_a, s_c);
    if (coloring.size() != embs_c.size())
        throw InputError("tree: coloring size must match the copy count of the pattern");
    for (int v : coloring)
        if (v < 1 || v > r) throw InputError("tree: colors must lie in 1..r");

    auto inner = enumerate_embeddings(s_a, s_b);
    auto verified = [&](const Map& m, int c) {
        if (!is_embedding(s_b, s_c, m)) return false;
        for (const auto& e : inner)
            if (coloring[static_cast<std::size_t>(find_embedding_index(embs_c, compose(m, e)))] !=
                c)
                return false;
        return true;
    };
    auto direct_scan = [&]() -> TreeReplayResult {
        for (const auto& f : enumerate_embeddings(s_b, s_c)) {
            if (inner.empty()) return TreeReplayResult{f, 1, false};
            int c = coloring[static_cast<std::size_t>(
                find_embedding_index(embs_c, compose(f, inner[0])))];
            if (verified(f, c)) return TreeReplayResult{f, c, false};
        }
        throw InvariantError("tree: no monochromatic copy exists for this coloring");
    };

    int n = static_cast<int>(tc.chain.size());
    if (a_n.is_leaf() || n < 2) return direct_scan();

    try {
        ReplayContext ctx;
        ctx.chain = &tc.chain;
        ctx.coloring = &coloring;
        ctx.embs_c = embs_c;
        for (int j = 1; j < n; ++j)
            ctx.stages.push_back(build_stage_claim(a_n, tc.chain[static_cast<std::size_t>(j - 1)],
                                                   tc.chain[static_cast<std::size_t>(j)]));
        ReplayContext::Entry root;
        root.g.resize(static_cast<std::size_t>(s_c.size()));
        std::iota(root.g.begin(), root.g.end(), 0);
        ctx.words.emplace(std::vector<int>{}, std::move(root));

        Map m(static_cast<std::size_t>(s_b.size()), -1);
        // Places bsub at a word extending w whose claim color is c; leaves pad
        // their word with 1s down to the single-leaf stage.
        std::function<bool(const LeafTree&, const std::vector<int>&, int)> place =
            [&](const LeafTree& bsub, const std::vector<int>& w, int c) -> bool {
            if (bsub.is_leaf()) {
                std::vector<int> full = w;
                while (static_cast<int>(full.size()) < n - 1) full.push_back(1);
                m[static_cast<std::size_t>(bsub.element())] = ctx.entry(full).g[0];
                return true;
            }
            int max_len = (n - 1) - bsub.height();
            std::vector<std::vector<int>> frontier{w};
            while (!frontier.empty()) {
                std::vector<std::vector<int>> next;
                for (const auto& v : frontier) {
                    if (static_cast<int>(v.size()) > max_len) continue;
                    auto& e = ctx.claim(v);
                    if (e.color == c || e.color == -1) {
                        auto v1 = v, v2 = v;
                        v1.push_back(1);
                        v2.push_back(2);
                        if (place(bsub.left(), v1, c) && place(bsub.right(), v2, c)) return true;
                    }
                    if (static_cast<int>(v.size()) < max_len) {
                        auto v1 = v, v2 = v;
                        v1.push_back(1);
                        v2.push_back(2);
                        next.push_back(std::move(v1));
                        next.push_back(std::move(v2));
                    }
                }
                frontier = std::move(next);
            }
            return false;
        };
        for (int c = 1; c <= r; ++c) {
            std::fill(m.begin(), m.end(), -1);
            if (place(b_n, {}, c) && verified(m, c)) return TreeReplayResult{m, c, true};
        }
    } catch (const InvariantError&) {
        // chain not replayable word-wise; fall back below
    } catch (const InputError&) {
    }
    return direct_scan();
}

} // namespace ramsey
