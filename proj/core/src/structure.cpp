#include "ramsey/structure.hpp"

#include <algorithm>
#include <set>

namespace ramsey {

Signature::Signature(std::vector<RelationSymbol> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        const auto& sym = symbols_[i];
        if (sym.name.empty())
            throw InputError("signature: empty relation name");
        if (sym.arity < 1)
            throw InputError("signature: relation '" + sym.name + "' has arity < 1");
        for (std::size_t j = 0; j < i; ++j)
            if (symbols_[j].name == sym.name)
                throw InputError("signature: duplicate relation name '" + sym.name + "'");
    }
}

int Signature::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return static_cast<int>(i);
    return -1;
}

FiniteStructure::FiniteStructure(Signature sig, int size)
    : sig_(std::move(sig)), size_(size), rels_(sig_.size()) {
    if (size < 0) throw InputError("structure: negative size");
}

FiniteStructure::FiniteStructure(Signature sig, int size,
                                 std::vector<std::vector<Tuple>> relations)
    : FiniteStructure(std::move(sig), size) {
    if (relations.size() != static_cast<std::size_t>(sig_.size()))
        throw InputError("structure: relation list does not match signature");
    for (std::size_t i = 0; i < relations.size(); ++i)
        for (const auto& t : relations[i])
            add_tuple(static_cast<int>(i), t);
}

void FiniteStructure::check_tuple(int sym_index, const Tuple& t) const {
    if (sym_index < 0 || sym_index >= sig_.size())
        throw InputError("structure: relation index out of range");
    const auto& sym = sig_.at(sym_index);
    if (static_cast<int>(t.size()) != sym.arity)
        throw InputError("structure: tuple arity mismatch for '" + sym.name + "'");
    for (int v : t)
        if (v < 0 || v >= size_)
            throw InputError("structure: tuple entry out of range for '" + sym.name + "'");
}

void FiniteStructure::add_tuple(int sym_index, const Tuple& t) {
    check_tuple(sym_index, t);
    auto& ts = rels_[sym_index];
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.end() || *it != t) ts.insert(it, t);
}

void FiniteStructure::add_tuple(const std::string& name, const Tuple& t) {
    int i = sig_.index_of(name);
    if (i < 0) throw InputError("structure: unknown relation '" + name + "'");
    add_tuple(i, t);
}

bool FiniteStructure::has_tuple(int sym_index, const Tuple& t) const {
    if (sym_index < 0 || sym_index >= sig_.size())
        throw InputError("structure: relation index out of range");
    const auto& ts = rels_[sym_index];
    return std::binary_search(ts.begin(), ts.end(), t);
}

bool FiniteStructure::has_tuple(const std::string& name, const Tuple& t) const {
    int i = sig_.index_of(name);
    if (i < 0) throw InputError("structure: unknown relation '" + name + "'");
    return has_tuple(i, t);
}

const std::vector<Tuple>& FiniteStructure::relation(int sym_index) const {
    if (sym_index < 0 || sym_index >= sig_.size())
        throw InputError("structure: relation index out of range");
    return rels_[sym_index];
}

const std::vector<Tuple>& FiniteStructure::relation(const std::string& name) const {
    int i = sig_.index_of(name);
    if (i < 0) throw InputError("structure: unknown relation '" + name + "'");
    return rels_[i];
}

std::size_t FiniteStructure::tuple_count() const {
    std::size_t n = 0;
    for (const auto& ts : rels_) n += ts.size();
    return n;
}

FiniteStructure substructure(const FiniteStructure& s, std::vector<int> subset) {
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
        throw InputError("substructure: duplicate elements in subset");
    for (int v : subset)
        if (v < 0 || v >= s.size())
            throw InputError("substructure: element out of range");

    std::vector<int> new_index(s.size(), -1);
    for (std::size_t i = 0; i < subset.size(); ++i)
        new_index[subset[i]] = static_cast<int>(i);

    FiniteStructure out(s.signature(), static_cast<int>(subset.size()));
    for (int si = 0; si < s.signature().size(); ++si) {
        for (const auto& t : s.relation(si)) {
            Tuple mapped(t.size());
            bool inside = true;
            for (std::size_t k = 0; k < t.size(); ++k) {
                if (new_index[t[k]] < 0) { inside = false; break; }
                mapped[k] = new_index[t[k]];
            }
            if (inside) out.add_tuple(si, mapped);
        }
    }
    return out;
}

FiniteStructure relabel(const FiniteStructure& s, const std::vector<int>& map) {
    if (static_cast<int>(map.size()) != s.size())
        throw InputError("relabel: map size mismatch");
    std::vector<bool> seen(s.size(), false);
    for (int v : map) {
        if (v < 0 || v >= s.size() || seen[v])
            throw InputError("relabel: map is not a bijection");
        seen[v] = true;
    }
    FiniteStructure out(s.signature(), s.size());
    for (int si = 0; si < s.signature().size(); ++si) {
        for (const auto& t : s.relation(si)) {
            Tuple mapped(t.size());
            for (std::size_t k = 0; k < t.size(); ++k) mapped[k] = map[t[k]];
            out.add_tuple(si, mapped);
        }
    }
    return out;
}

FiniteStructure disjoint_union(const FiniteStructure& a, const FiniteStructure& b) {
    if (!(a.signature() == b.signature()))
        throw InputError("disjoint_union: signature mismatch");
    FiniteStructure out(a.signature(), a.size() + b.size());
    for (int si = 0; si < a.signature().size(); ++si) {
        for (const auto& t : a.relation(si)) out.add_tuple(si, t);
        for (const auto& t : b.relation(si)) {
            Tuple shifted(t.size());
            for (std::size_t k = 0; k < t.size(); ++k) shifted[k] = t[k] + a.size();
            out.add_tuple(si, shifted);
        }
    }
    return out;
}

FiniteStructure reduct(const FiniteStructure& s, const std::vector<std::string>& keep) {
    std::vector<RelationSymbol> syms;
    for (const auto& name : keep) {
        int i = s.signature().index_of(name);
        if (i < 0) throw InputError("reduct: unknown relation '" + name + "'");
        syms.push_back(s.signature().at(i));
    }
    FiniteStructure out(Signature(std::move(syms)), s.size());
    for (const auto& name : keep)
        for (const auto& t : s.relation(name)) out.add_tuple(name, t);
    return out;
}

bool is_linear_order(const FiniteStructure& s, const std::string& sym) {
    int si = s.signature().index_of(sym);
    if (si < 0 || s.signature().at(si).arity != 2) return false;
    int n = s.size();
    std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
    for (const auto& t : s.relation(si)) lt[t[0]][t[1]] = true;
    for (int x = 0; x < n; ++x) {
        if (lt[x][x]) return false;
        for (int y = 0; y < n; ++y) {
            if (x != y && lt[x][y] == lt[y][x]) return false; // antisymmetric + total
            for (int z = 0; z < n; ++z)
                if (lt[x][y] && lt[y][z] && !lt[x][z]) return false;
        }
    }
    return true;
}

FiniteStructure linear_order(int n, const std::string& sym) {
    FiniteStructure out(Signature({{sym, 2}}), n);
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) out.add_tuple(0, {x, y});
    return out;
}

std::vector<int> order_of(const FiniteStructure& s, const std::string& sym) {
    if (!is_linear_order(s, sym))
        throw InputError("order_of: '" + sym + "' is not a linear order");
    int si = s.signature().index_of(sym);
    std::vector<int> below(s.size(), 0);
    for (const auto& t : s.relation(si)) ++below[t[1]];
    std::vector<int> out(s.size());
    for (int x = 0; x < s.size(); ++x) out[below[x]] = x;
    return out;
}

bool is_irreducible(const FiniteStructure& s) {
    int n = s.size();
    std::vector<std::vector<bool>> together(n, std::vector<bool>(n, false));
    for (const auto& ts : s.relations())
        for (const auto& t : ts)
            for (int a : t)
                for (int b : t) together[a][b] = true;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!together[a][b]) return false;
    return true;
}

namespace {

// Compare the relabelings of s under two permutations without materializing
// both structures: build each relabeled tuple list lazily per relation.
std::vector<std::vector<Tuple>> relabeled_tuples(const FiniteStructure& s,
                                                 const std::vector<int>& perm) {
    std::vector<std::vector<Tuple>> out(s.signature().size());
    for (int si = 0; si < s.signature().size(); ++si) {
        auto& ts = out[si];
        ts.reserve(s.relation(si).size());
        for (const auto& t : s.relation(si)) {
            Tuple mapped(t.size());
            for (std::size_t k = 0; k < t.size(); ++k) mapped[k] = perm[t[k]];
            ts.push_back(std::move(mapped));
        }
        std::sort(ts.begin(), ts.end());
    }
    return out;
}

} // namespace

FiniteStructure canonical_form(const FiniteStructure& s) {
    int n = s.size();
    std::vector<int> perm(n), best(n);
    for (int i = 0; i < n; ++i) perm[i] = best[i] = i;
    auto best_tuples = relabeled_tuples(s, best);
    do {
        auto cand = relabeled_tuples(s, perm);
        if (cand < best_tuples) {
            best_tuples = std::move(cand);
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return relabel(s, best);
}

} // namespace ramsey
