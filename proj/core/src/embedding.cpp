#include "ramsey/embedding.hpp"

#include <algorithm>

namespace ramsey {

namespace {

// Per-element index: for element x, the tuples (by symbol) containing x.
struct TupleIndex {
    // entries[x] -> list of (symbol index, tuple pointer)
    std::vector<std::vector<std::pair<int, const Tuple*>>> entries;

    explicit TupleIndex(const FiniteStructure& s) : entries(s.size()) {
        for (int si = 0; si < s.signature().size(); ++si) {
            for (const auto& t : s.relation(si)) {
                for (int x : t) {
                    auto& e = entries[x];
                    // a tuple may repeat an element; index it once per element
                    if (!e.empty() && e.back().first == si && e.back().second == &t) continue;
                    e.emplace_back(si, &t);
                }
            }
        }
    }
};

struct EmbeddingSearch {
    const FiniteStructure& a;
    const FiniteStructure& b;
    const std::vector<std::vector<int>>* candidates;
    const std::function<bool(const Map&)>& visit;
    bool induced;  // true: embeddings, false: homomorphisms
    bool injective;

    TupleIndex a_index;
    TupleIndex b_index;
    Map map;
    std::vector<int> preimage;       // b element -> a element or -1
    std::vector<bool> used;
    bool stopped = false;

    EmbeddingSearch(const FiniteStructure& a_, const FiniteStructure& b_,
                    const std::vector<std::vector<int>>* cand,
                    const std::function<bool(const Map&)>& visit_, bool induced_,
                    bool injective_)
        : a(a_), b(b_), candidates(cand), visit(visit_), induced(induced_),
          injective(injective_), a_index(a_), b_index(b_),
          map(a_.size(), -1), preimage(b_.size(), -1), used(b_.size(), false) {}

    // Forward condition for the newly assigned x: every A-tuple containing x
    // whose support is fully assigned must land in B's relation.
    bool forward_ok(int x) const {
        for (const auto& [si, t] : a_index.entries[x]) {
            Tuple image(t->size());
            bool complete = true;
            for (std::size_t k = 0; k < t->size(); ++k) {
                int v = map[(*t)[k]];
                if (v < 0) { complete = false; break; }
                image[k] = v;
            }
            if (complete && !b.has_tuple(si, image)) return false;
        }
        return true;
    }

    // Induced condition for the newly used w: every B-tuple containing w whose
    // support lies in the current image must pull back to an A-tuple.
    bool backward_ok(int w) const {
        for (const auto& [si, t] : b_index.entries[w]) {
            Tuple pre(t->size());
            bool inside = true;
            for (std::size_t k = 0; k < t->size(); ++k) {
                int v = preimage[(*t)[k]];
                if (v < 0) { inside = false; break; }
                pre[k] = v;
            }
            if (inside && !a.has_tuple(si, pre)) return false;
        }
        return true;
    }

    void run(int x) {
        if (stopped) return;
        if (x == a.size()) {
            if (!visit(map)) stopped = true;
            return;
        }
        if (candidates) {
            for (int w : (*candidates)[x]) {
                if (w < 0 || w >= b.size()) throw InputError("embedding candidates out of range");
                try_assign(x, w);
                if (stopped) return;
            }
        } else {
            for (int w = 0; w < b.size(); ++w) {
                try_assign(x, w);
                if (stopped) return;
            }
        }
    }

    void try_assign(int x, int w) {
        if (injective && used[w]) return;
        map[x] = w;
        if (injective) { used[w] = true; preimage[w] = x; }
        if (forward_ok(x) && (!induced || backward_ok(w))) run(x + 1);
        map[x] = -1;
        if (injective) { used[w] = false; preimage[w] = -1; }
    }
};

} // namespace

void visit_embeddings(const FiniteStructure& a, const FiniteStructure& b,
                      const std::vector<std::vector<int>>* candidates,
                      const std::function<bool(const Map&)>& visit) {
    if (!(a.signature() == b.signature()))
        throw InputError("embedding: signature mismatch");
    if (candidates && candidates->size() != static_cast<std::size_t>(a.size()))
        throw InputError("embedding: candidate list size mismatch");
    EmbeddingSearch search(a, b, candidates, visit, /*induced=*/true, /*injective=*/true);
    search.run(0);
}

std::vector<Map> enumerate_embeddings(const FiniteStructure& a, const FiniteStructure& b) {
    std::vector<Map> out;
    visit_embeddings(a, b, nullptr, [&](const Map& m) { out.push_back(m); return true; });
    return out;
}

std::vector<Map> enumerate_embeddings_restricted(const FiniteStructure& a,
                                                 const FiniteStructure& b,
                                                 const std::vector<std::vector<int>>& candidates) {
    std::vector<Map> out;
    visit_embeddings(a, b, &candidates, [&](const Map& m) { out.push_back(m); return true; });
    return out;
}

bool exists_embedding(const FiniteStructure& a, const FiniteStructure& b) {
    bool found = false;
    visit_embeddings(a, b, nullptr, [&](const Map&) { found = true; return false; });
    return found;
}

std::optional<Map> first_embedding(const FiniteStructure& a, const FiniteStructure& b) {
    std::optional<Map> out;
    visit_embeddings(a, b, nullptr, [&](const Map& m) { out = m; return false; });
    return out;
}

std::vector<Map> enumerate_homomorphisms(const FiniteStructure& a, const FiniteStructure& b) {
    if (!(a.signature() == b.signature()))
        throw InputError("homomorphism: signature mismatch");
    std::vector<Map> out;
    std::function<bool(const Map&)> collect = [&](const Map& m) { out.push_back(m); return true; };
    EmbeddingSearch search(a, b, nullptr, collect, /*induced=*/false, /*injective=*/false);
    search.run(0);
    return out;
}

bool maps_homomorphically(const FiniteStructure& a, const FiniteStructure& b) {
    if (!(a.signature() == b.signature()))
        throw InputError("homomorphism: signature mismatch");
    bool found = false;
    std::function<bool(const Map&)> stop = [&](const Map&) { found = true; return false; };
    EmbeddingSearch search(a, b, nullptr, stop, /*induced=*/false, /*injective=*/false);
    search.run(0);
    return found;
}

std::vector<Map> automorphisms(const FiniteStructure& s) {
    return enumerate_embeddings(s, s);
}

bool is_rigid(const FiniteStructure& s) {
    return automorphisms(s).size() == 1;
}

bool in_forb(const std::vector<FiniteStructure>& family, const FiniteStructure& s) {
    for (const auto& f : family)
        if (maps_homomorphically(f, s)) return false;
    return true;
}

bool is_isomorphic(const FiniteStructure& a, const FiniteStructure& b) {
    return a.size() == b.size() && a.signature() == b.signature() && exists_embedding(a, b);
}

bool is_embedding(const FiniteStructure& a, const FiniteStructure& b, const Map& map) {
    if (!(a.signature() == b.signature())) return false;
    if (map.size() != static_cast<std::size_t>(a.size())) return false;
    std::vector<int> preimage(b.size(), -1);
    for (int x = 0; x < a.size(); ++x) {
        int w = map[x];
        if (w < 0 || w >= b.size() || preimage[w] >= 0) return false;
        preimage[w] = x;
    }
    for (int si = 0; si < a.signature().size(); ++si) {
        for (const auto& t : a.relation(si)) {
            Tuple image(t.size());
            for (std::size_t k = 0; k < t.size(); ++k) image[k] = map[t[k]];
            if (!b.has_tuple(si, image)) return false;
        }
        for (const auto& t : b.relation(si)) {
            Tuple pre(t.size());
            bool inside = true;
            for (std::size_t k = 0; k < t.size(); ++k) {
                if (preimage[t[k]] < 0) { inside = false; break; }
                pre[k] = preimage[t[k]];
            }
            if (inside && !a.has_tuple(si, pre)) return false;
        }
    }
    return true;
}

bool is_homomorphism(const FiniteStructure& a, const FiniteStructure& b, const Map& map) {
    if (!(a.signature() == b.signature())) return false;
    if (map.size() != static_cast<std::size_t>(a.size())) return false;
    for (int w : map)
        if (w < 0 || w >= b.size()) return false;
    for (int si = 0; si < a.signature().size(); ++si)
        for (const auto& t : a.relation(si)) {
            Tuple image(t.size());
            for (std::size_t k = 0; k < t.size(); ++k) image[k] = map[t[k]];
            if (!b.has_tuple(si, image)) return false;
        }
    return true;
}

Map compose(const Map& map_bc, const Map& map_ab) {
    Map out(map_ab.size());
    for (std::size_t i = 0; i < map_ab.size(); ++i) {
        int mid = map_ab[i];
        if (mid < 0 || mid >= static_cast<int>(map_bc.size()))
            throw InputError("compose: maps do not chain");
        out[i] = map_bc[mid];
    }
    return out;
}

} // namespace ramsey
