#include "ramsey/partite.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>

namespace ramsey {

namespace {

constexpr std::uint64_t kMaxPowerPoints = 1u << 20;
constexpr std::uint64_t kMaxGenerated = 1u << 26;
constexpr std::uint64_t kMaxGluePoints = 1u << 22;
constexpr std::size_t kMaxOccurrences = 1u << 16;
constexpr std::size_t kMaxAmbientBits = 24;
constexpr int kMaxLevelSearch = 64;
// A construction result is emitted with an explicit linear order, n*(n-1)/2
// tuples; past this many tuples the stage result is kept out of the output.
constexpr std::uint64_t kMaxEmitTuples = 1u << 22;

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// perm[x] = rank of x, where order[j] is the element of rank j.
std::vector<int> rank_perm(const std::vector<int>& order) {
    std::vector<int> perm(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) perm[order[j]] = static_cast<int>(j);
    return perm;
}

// All k-subsets of {0..n-1}, each ascending, in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
        out.push_back(comb);
        int i = k - 1;
        while (i >= 0 && comb[i] == n - k + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    return out;
}

// Mixed-radix index of a power element: per-level offsets plus the positions
// of the coordinate entries within their level, first coordinate most
// significant. Shared by nr_power and the embedding builders.
struct PowerIndex {
    PowerIndex(const PartiteStructure& b, int d) : b_(&b), d_(d) {
        const int L = b.level_count();
        pos_.resize(b.size());
        offset_.assign(L + 1, 0);
        std::uint64_t total = 0;
        for (int i = 0; i < L; ++i) {
            const auto& mem = b.level_members(i);
            for (std::size_t j = 0; j < mem.size(); ++j) pos_[mem[j]] = static_cast<int>(j);
            std::uint64_t s = 1;
            for (int q = 0; q < d; ++q) {
                s *= mem.size();
                if (s > kMaxPowerPoints)
                    throw BudgetError("power: level " + std::to_string(i) + " would exceed " +
                                      std::to_string(kMaxPowerPoints) + " points");
            }
            total += s;
            if (total > kMaxPowerPoints)
                throw BudgetError("power: total size would exceed " +
                                  std::to_string(kMaxPowerPoints) + " points");
            offset_[i + 1] = static_cast<int>(total);
        }
    }

    int total() const { return offset_.back(); }

    int elem(int level, const int* coords) const {
        const std::uint64_t base = b_->level_members(level).size();
        std::uint64_t ix = 0;
        for (int q = 0; q < d_; ++q) ix = ix * base + static_cast<std::uint64_t>(pos_[coords[q]]);
        return offset_[level] + static_cast<int>(ix);
    }

    std::vector<int> levels() const {
        std::vector<int> lv(total());
        for (int i = 0; i < b_->level_count(); ++i)
            std::fill(lv.begin() + offset_[i], lv.begin() + offset_[i + 1], i);
        return lv;
    }

  private:
    const PartiteStructure* b_;
    int d_;
    std::vector<int> pos_;
    std::vector<int> offset_;
};

void require_compatible(const PartiteStructure& a, const PartiteStructure& b, const char* what) {
    if (!(a.base().signature() == b.base().signature()))
        throw InputError(std::string(what) + ": signatures differ");
    if (a.level_count() != b.level_count())
        throw InputError(std::string(what) + ": level counts differ");
}

std::vector<std::vector<int>> level_candidates(const PartiteStructure& a,
                                               const PartiteStructure& b) {
    std::vector<std::vector<int>> cand(a.size());
    for (int x = 0; x < a.size(); ++x) cand[x] = b.level_members(a.level_of(x));
    return cand;
}

std::vector<Map> bounded_partite_embeddings(const PartiteStructure& a, const PartiteStructure& b,
                                            std::size_t cap, const char* what) {
    require_compatible(a, b, what);
    auto cand = level_candidates(a, b);
    std::vector<Map> out;
    visit_embeddings(a.base(), b.base(), &cand, [&](const Map& m) {
        out.push_back(m);
        return out.size() <= cap;
    });
    if (out.size() > cap)
        throw BudgetError(std::string(what) + ": more than " + std::to_string(cap) +
                          " occurrences");
    return out;
}

// Free amalgam: one copy of `ext` glued onto `host` along each occurrence of
// the shared part (ext restricted to `shared`, which is sorted ascending);
// occurrences map shared positions to host elements. Host levels are reported
// through host_levels (host level -> output level); ext levels pass through.
PartiteStructure glue_at_occurrences(const PartiteStructure& host,
                                     const std::vector<int>& host_levels,
                                     const PartiteStructure& ext, const std::vector<int>& shared,
                                     const std::vector<Map>& occurrences) {
    const int hn = host.size();
    const int en = ext.size();
    const int fresh_per = en - static_cast<int>(shared.size());
    const std::uint64_t total =
        static_cast<std::uint64_t>(hn) +
        static_cast<std::uint64_t>(occurrences.size()) * static_cast<std::uint64_t>(fresh_per);
    if (total > kMaxGluePoints)
        throw BudgetError("amalgam: result would have " + std::to_string(total) + " points");

    std::vector<int> shared_pos(en, -1), fresh_rank(en, -1);
    {
        int fr = 0;
        std::size_t si = 0;
        for (int x = 0; x < en; ++x) {
            if (si < shared.size() && shared[si] == x)
                shared_pos[x] = static_cast<int>(si++);
            else
                fresh_rank[x] = fr++;
        }
    }

    const Signature& sig = host.base().signature();
    std::vector<int> lv(total);
    for (int x = 0; x < hn; ++x) lv[x] = host_levels[host.level_of(x)];

    std::vector<std::vector<Tuple>> rels(sig.size());
    for (int si = 0; si < sig.size(); ++si) rels[si] = host.base().relation(si);
    for (std::size_t o = 0; o < occurrences.size(); ++o) {
        const Map& f = occurrences[o];
        const int base_id = hn + static_cast<int>(o) * fresh_per;
        for (int x = 0; x < en; ++x)
            if (fresh_rank[x] >= 0) lv[base_id + fresh_rank[x]] = ext.level_of(x);
        for (int si = 0; si < sig.size(); ++si)
            for (const auto& t : ext.base().relation(si)) {
                Tuple tt(t.size());
                for (std::size_t c = 0; c < t.size(); ++c) {
                    int x = t[c];
                    tt[c] = shared_pos[x] >= 0 ? f[shared_pos[x]] : base_id + fresh_rank[x];
                }
                rels[si].push_back(tt);
            }
    }
    for (auto& ts : rels) {
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    }
    return PartiteStructure(FiniteStructure(sig, static_cast<int>(total), std::move(rels)),
                            std::move(lv));
}

bool emittable(const PartiteStructure& ps) {
    const std::uint64_t n = ps.size();
    return n * (n - 1) / 2 + ps.base().tuple_count() <= kMaxEmitTuples;
}

// Relabel so the level order becomes the natural element order (stable within
// a level) and append the matching strict linear order relation.
FiniteStructure linear_extension(const PartiteStructure& ps, const std::string& order_sym) {
    const int n = ps.size();
    std::vector<int> by_level = iota_vec(n);
    std::stable_sort(by_level.begin(), by_level.end(),
                     [&](int x, int y) { return ps.level_of(x) < ps.level_of(y); });
    FiniteStructure rl = relabel(ps.base(), rank_perm(by_level));

    const Signature& old_sig = rl.signature();
    if (old_sig.index_of(order_sym) >= 0)
        throw InputError("construction: order symbol '" + order_sym +
                         "' collides with a relation of the unordered part");
    std::vector<RelationSymbol> syms;
    std::vector<std::vector<Tuple>> rels;
    for (int si = 0; si < old_sig.size(); ++si) {
        syms.push_back(old_sig.at(si));
        rels.push_back(rl.relation(si));
    }
    syms.push_back({order_sym, 2});
    rels.emplace_back();
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) rels.back().push_back({x, y});
    return FiniteStructure(Signature(std::move(syms)), n, std::move(rels));
}

// The pipeline works over the order-free reduct and re-appends the order
// symbol last, so the reassembled output may list symbols in a different
// order than the inputs. Re-emit the relations in the callers' order.
FiniteStructure match_signature(const FiniteStructure& s, const Signature& sig) {
    std::vector<std::vector<Tuple>> rels;
    for (int si = 0; si < sig.size(); ++si) {
        const int oi = s.signature().index_of(sig.at(si).name);
        if (oi < 0 || s.signature().at(oi).arity != sig.at(si).arity)
            throw InvariantError("construction: output signature mismatch");
        rels.push_back(s.relation(oi));
    }
    return FiniteStructure(sig, s.size(), std::move(rels));
}

// A base on one point per level such that every |b|-subset of the levels
// induces b through the order-monotone bijection. Exists only when all
// placement demands agree; the disjoint-union base is the fallback.
// b_tau must already carry the natural order (element j has rank j).
std::optional<PartiteStructure> singleton_base(const FiniteStructure& b_tau, int p) {
    const int bn = b_tau.size();
    if (bn > p) return std::nullopt;
    const Signature& sig = b_tau.signature();
    auto subsets = combinations(p, bn);

    FiniteStructure u(sig, p);
    for (int si = 0; si < sig.size(); ++si) {
        const int h = sig.at(si).arity;
        Tuple t(h, 0);
        while (true) {
            std::vector<int> supp(t.begin(), t.end());
            std::sort(supp.begin(), supp.end());
            supp.erase(std::unique(supp.begin(), supp.end()), supp.end());
            if (static_cast<int>(supp.size()) <= bn) {
                std::optional<bool> want;
                for (const auto& S : subsets) {
                    if (!std::includes(S.begin(), S.end(), supp.begin(), supp.end())) continue;
                    Tuple bt(h);
                    for (int c = 0; c < h; ++c)
                        bt[c] = static_cast<int>(
                            std::lower_bound(S.begin(), S.end(), t[c]) - S.begin());
                    bool in = b_tau.has_tuple(si, bt);
                    if (want && *want != in) return std::nullopt;
                    want = in;
                }
                if (want && *want) u.add_tuple(si, t);
            }
            int c = h - 1;
            while (c >= 0 && t[c] == p - 1) t[c--] = 0;
            if (c < 0) break;
            ++t[c];
        }
    }
    for (const auto& S : subsets)
        if (!(substructure(u, S) == b_tau))
            throw InvariantError("construction: compact base failed its self check");
    return PartiteStructure(std::move(u), iota_vec(p));
}

struct OrderedInputs {
    std::vector<std::string> tau;  // signature names without the order symbol
    FiniteStructure a_tau, b_tau;  // order-relabeled reducts (element j has rank j)
    Transversal a_t;
};

OrderedInputs split_ordered(const FiniteStructure& a, const FiniteStructure& b,
                            const std::string& ord) {
    if (!(a.signature() == b.signature()))
        throw InputError("construction: signatures differ");
    if (a.size() < 1 || b.size() < 1)
        throw InputError("construction: structures must be nonempty");
    if (!is_linear_order(a, ord) || !is_linear_order(b, ord))
        throw InputError("construction: '" + ord + "' must be a linear order on both inputs");
    OrderedInputs in;
    for (int si = 0; si < a.signature().size(); ++si)
        if (a.signature().at(si).name != ord) in.tau.push_back(a.signature().at(si).name);
    in.a_tau = relabel(reduct(a, in.tau), rank_perm(order_of(a, ord)));
    in.b_tau = relabel(reduct(b, in.tau), rank_perm(order_of(b, ord)));
    in.a_t = Transversal(PartiteStructure(in.a_tau, iota_vec(in.a_tau.size())));
    return in;
}

}  // namespace

// ---------------------------------------------------------------------------
// PartiteStructure and Transversal

PartiteStructure::PartiteStructure(FiniteStructure base, std::vector<int> levels)
    : base_(std::move(base)), levels_(std::move(levels)) {
    if (static_cast<int>(levels_.size()) != base_.size())
        throw InputError("partite: one level per element required");
    for (int l : levels_)
        if (l < 0) throw InputError("partite: negative level");
    n_levels_ = levels_.empty() ? 0 : *std::max_element(levels_.begin(), levels_.end()) + 1;
    members_.assign(n_levels_, {});
    for (int x = 0; x < base_.size(); ++x) members_[levels_[x]].push_back(x);
    for (int i = 0; i < n_levels_; ++i)
        if (members_[i].empty())
            throw InputError("partite: level " + std::to_string(i) + " is empty");
}

const std::vector<int>& PartiteStructure::level_members(int level) const {
    if (level < 0 || level >= n_levels_) throw InputError("partite: level out of range");
    return members_[level];
}

Transversal::Transversal(PartiteStructure ps) : ps_(std::move(ps)) {
    for (int i = 0; i < ps_.level_count(); ++i)
        if (ps_.level_members(i).size() != 1)
            throw InputError("transversal: level " + std::to_string(i) +
                             " must have exactly one element");
}

bool is_transversal(const PartiteStructure& ps) {
    for (int i = 0; i < ps.level_count(); ++i)
        if (ps.level_members(i).size() != 1) return false;
    return true;
}

std::vector<Map> partite_embeddings(const PartiteStructure& a, const PartiteStructure& b) {
    require_compatible(a, b, "partite embeddings");
    auto cand = level_candidates(a, b);
    return enumerate_embeddings_restricted(a.base(), b.base(), cand);
}

bool is_partite_embedding(const PartiteStructure& a, const PartiteStructure& b, const Map& m) {
    if (a.level_count() != b.level_count()) return false;
    if (static_cast<int>(m.size()) != a.size()) return false;
    for (int x = 0; x < a.size(); ++x) {
        if (m[x] < 0 || m[x] >= b.size()) return false;
        if (b.level_of(m[x]) != a.level_of(x)) return false;
    }
    return is_embedding(a.base(), b.base(), m);
}

// ---------------------------------------------------------------------------
// Encoding and serialization

FiniteStructure partite_to_structure(const PartiteStructure& ps, const std::string& prec_symbol) {
    const Signature& old_sig = ps.base().signature();
    if (old_sig.index_of(prec_symbol) >= 0)
        throw InputError("partite: symbol '" + prec_symbol + "' already present");
    std::vector<RelationSymbol> syms;
    std::vector<std::vector<Tuple>> rels;
    for (int si = 0; si < old_sig.size(); ++si) {
        syms.push_back(old_sig.at(si));
        rels.push_back(ps.base().relation(si));
    }
    syms.push_back({prec_symbol, 2});
    rels.emplace_back();
    for (int x = 0; x < ps.size(); ++x)
        for (int y = 0; y < ps.size(); ++y)
            if (ps.level_of(x) <= ps.level_of(y)) rels.back().push_back({x, y});
    return FiniteStructure(Signature(std::move(syms)), ps.size(), std::move(rels));
}

PartiteStructure structure_to_partite(const FiniteStructure& s, const std::string& prec_symbol) {
    const int pi = s.signature().index_of(prec_symbol);
    if (pi < 0) throw InputError("partite: symbol '" + prec_symbol + "' missing");
    if (s.signature().at(pi).arity != 2)
        throw InputError("partite: symbol '" + prec_symbol + "' must be binary");
    const int n = s.size();
    if (n == 0) return PartiteStructure(FiniteStructure(Signature(std::vector<RelationSymbol>{}), 0), {});
    // The symbol must be a weak linear order: reflexive, transitive, total.
    auto leq = [&](int x, int y) { return s.has_tuple(pi, {x, y}); };
    for (int x = 0; x < n; ++x) {
        if (!leq(x, x)) throw InputError("partite: level order is not reflexive");
        for (int y = 0; y < n; ++y) {
            if (!leq(x, y) && !leq(y, x)) throw InputError("partite: level order is not total");
            for (int z = 0; z < n; ++z)
                if (leq(x, y) && leq(y, z) && !leq(x, z))
                    throw InputError("partite: level order is not transitive");
        }
    }
    std::vector<int> elems = iota_vec(n);
    std::stable_sort(elems.begin(), elems.end(), [&](int x, int y) {
        return leq(x, y) && !leq(y, x);
    });
    std::vector<int> levels(n);
    int lvl = 0;
    for (int i = 0; i < n; ++i) {
        if (i > 0 && !(leq(elems[i], elems[i - 1]) && leq(elems[i - 1], elems[i]))) ++lvl;
        levels[elems[i]] = lvl;
    }
    std::vector<std::string> keep;
    for (int si = 0; si < s.signature().size(); ++si)
        if (si != pi) keep.push_back(s.signature().at(si).name);
    return PartiteStructure(reduct(s, keep), std::move(levels));
}

Json partite_to_json(const PartiteStructure& ps) {
    Json j = structure_to_json(ps.base());
    j["levels"] = ps.levels();
    return j;
}

PartiteStructure partite_from_json(const Json& j) {
    FiniteStructure base = structure_from_json(j);
    if (!j.contains("levels")) throw InputError("partite: missing 'levels'");
    std::vector<int> levels;
    try {
        levels = j.at("levels").get<std::vector<int>>();
    } catch (const Json::exception& e) {
        throw InputError(std::string("partite: bad 'levels': ") + e.what());
    }
    return PartiteStructure(std::move(base), std::move(levels));
}

// ---------------------------------------------------------------------------
// Powers

PartiteStructure nr_power(const PartiteStructure& b, const Transversal& a, int d,
                          const ArrowOptions& opts) {
    (void)opts;
    if (d < 1) throw InputError("power: dimension must be >= 1");
    if (d > 26) throw BudgetError("power: dimension too large");
    require_compatible(a.partite(), b, "power");
    PowerIndex ix(b, d);
    auto copies = partite_embeddings(a.partite(), b);
    const int m = static_cast<int>(copies.size());

    const Signature& sig = b.base().signature();
    std::vector<std::vector<Tuple>> rels(sig.size());
    std::uint64_t work = 0;
    std::vector<int> coords(d);
    for (int si = 0; si < sig.size(); ++si) {
        const int h = sig.at(si).arity;
        std::vector<int> wl(h);
        std::vector<int> freepos(d);
        for (const auto& w : b.base().relation(si)) {
            for (int c = 0; c < h; ++c) wl[c] = b.level_of(w[c]);
            for (unsigned pm = 1; pm < (1u << d); ++pm) {
                int nfree = 0;
                for (int q = 0; q < d; ++q)
                    if (!(pm >> q & 1u)) freepos[nfree++] = q;
                if (nfree > 0 && m == 0) continue;
                std::vector<int> ks(nfree, 0);
                while (true) {
                    if (++work > kMaxGenerated)
                        throw BudgetError("power: tuple generation exceeded " +
                                          std::to_string(kMaxGenerated) + " steps");
                    Tuple t(h);
                    for (int c = 0; c < h; ++c) {
                        for (int q = 0; q < d; ++q) coords[q] = w[c];
                        for (int j = 0; j < nfree; ++j)
                            coords[freepos[j]] = copies[ks[j]][a.element_at(wl[c])];
                        t[c] = ix.elem(wl[c], coords.data());
                    }
                    rels[si].push_back(t);
                    int j = nfree - 1;
                    while (j >= 0 && ks[j] == m - 1) ks[j--] = 0;
                    if (j < 0) break;
                    ++ks[j];
                }
            }
        }
        std::sort(rels[si].begin(), rels[si].end());
        rels[si].erase(std::unique(rels[si].begin(), rels[si].end()), rels[si].end());
    }
    return PartiteStructure(FiniteStructure(sig, ix.total(), std::move(rels)), ix.levels());
}

int power_element(const PartiteStructure& b, int d, int level, const Tuple& coords) {
    if (static_cast<int>(coords.size()) != d) throw InputError("power: coordinate count != d");
    PowerIndex ix(b, d);
    for (int v : coords)
        if (v < 0 || v >= b.size() || b.level_of(v) != level)
            throw InputError("power: coordinate off the requested level");
    std::vector<int> c(coords.begin(), coords.end());
    return ix.elem(level, c.data());
}

bool is_template(const Transversal& a, const PartiteStructure& b) {
    if (a.level_count() != b.level_count()) return false;
    if (!(a.base().signature() == b.base().signature())) return false;
    const Signature& sig = b.base().signature();
    for (int si = 0; si < sig.size(); ++si)
        for (const auto& t : b.base().relation(si)) {
            Tuple pt(t.size());
            for (std::size_t c = 0; c < t.size(); ++c) pt[c] = a.element_at(b.level_of(t[c]));
            if (!a.base().has_tuple(si, pt)) return false;
        }
    return true;
}

std::vector<Map> power_alpha_embeddings(const Transversal& a, const PartiteStructure& b, int d,
                                        const ArrowOptions& opts) {
    (void)opts;
    if (d < 1) throw InputError("power: dimension must be >= 1");
    require_compatible(a.partite(), b, "power");
    auto copies = partite_embeddings(a.partite(), b);
    const int m = static_cast<int>(copies.size());
    if (m == 0) return {};
    std::uint64_t count = 1;
    for (int q = 0; q < d; ++q) {
        count *= static_cast<std::uint64_t>(m);
        if (count > kMaxPowerPoints) throw BudgetError("power: too many diagonal embeddings");
    }
    PowerIndex ix(b, d);
    const int L = a.level_count();
    std::vector<Map> out;
    out.reserve(count);
    std::vector<int> alpha(d, 0);
    std::vector<int> coords(d);
    while (true) {
        Map g(a.base().size());
        for (int i = 0; i < L; ++i) {
            const int x = a.element_at(i);
            for (int q = 0; q < d; ++q) coords[q] = copies[alpha[q]][x];
            g[x] = ix.elem(i, coords.data());
        }
        out.push_back(std::move(g));
        int j = d - 1;
        while (j >= 0 && alpha[j] == m - 1) alpha[j--] = 0;
        if (j < 0) break;
        ++alpha[j];
    }
    return out;
}

Map power_line_embedding(const Transversal& a, const PartiteStructure& b, int d, const Word& line,
                         const ArrowOptions& opts) {
    (void)opts;
    if (static_cast<int>(line.size()) != d) throw InputError("line: length != d");
    require_compatible(a.partite(), b, "power");
    auto copies = partite_embeddings(a.partite(), b);
    const int m = static_cast<int>(copies.size());
    bool wild = false;
    for (int v : line) {
        if (v == 0)
            wild = true;
        else if (v < 1 || v > m)
            throw InputError("line: letter out of range");
    }
    if (!wild) throw InputError("line: no wildcard position");

    PowerIndex ix(b, d);
    std::vector<std::vector<int>> cover(b.size());
    for (int k = 0; k < m; ++k)
        for (int x = 0; x < a.base().size(); ++x) cover[copies[k][x]].push_back(k);

    Map g(b.size());
    std::vector<int> coords(d);
    for (int u = 0; u < b.size(); ++u) {
        if (cover[u].empty())
            throw InputError("line: element " + std::to_string(u) +
                             " lies in no copy of the pattern");
        const int x = a.element_at(b.level_of(u));
        int val = -1;
        for (int k : cover[u]) {
            for (int q = 0; q < d; ++q) {
                const int copy = line[q] == 0 ? k : line[q] - 1;
                coords[q] = copies[copy][x];
            }
            const int v = ix.elem(b.level_of(u), coords.data());
            if (val < 0)
                val = v;
            else if (val != v)
                throw InvariantError("line: witness images disagree across copies");
        }
        g[u] = val;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Arrow over level-preserving embeddings

ArrowResult check_partite_arrow(const PartiteStructure& c, const PartiteStructure& b,
                                const PartiteStructure& a, int r, const ArrowOptions& opts) {
    if (r < 1) throw InputError("arrow: color count must be >= 1");
    require_compatible(a, c, "partite arrow");
    require_compatible(b, c, "partite arrow");
    auto pattern = bounded_partite_embeddings(a, c, kMaxOccurrences, "partite arrow: patterns");
    auto hosts = bounded_partite_embeddings(b, c, kMaxOccurrences, "partite arrow: hosts");
    auto inner = partite_embeddings(a, b);
    std::map<Map, int> index;
    for (std::size_t i = 0; i < pattern.size(); ++i) index[pattern[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> families;
    families.reserve(hosts.size());
    for (const auto& f : hosts) {
        std::vector<int> fam;
        fam.reserve(inner.size());
        for (const auto& e : inner) {
            auto it = index.find(compose(f, e));
            if (it == index.end())
                throw InvariantError("partite arrow: composed copy not level-preserving");
            fam.push_back(it->second);
        }
        std::sort(fam.begin(), fam.end());
        fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
        families.push_back(std::move(fam));
    }
    auto res = sweep_families(pattern.size(), families, r, 1, opts);
    if (res.verdict == Verdict::fails) {
        ArrowInstance inst{std::move(pattern), std::move(hosts), std::move(families)};
        if (find_satisfying_family(inst, *res.coloring, 1))
            throw InvariantError("partite arrow: refutation failed re-verification");
    }
    return res;
}

// ---------------------------------------------------------------------------
// The partite lemma

PartiteLemmaResult partite_lemma_witness(const Transversal& a, const PartiteStructure& b, int r,
                                         const ArrowOptions& opts) {
    if (r < 1) throw InputError("lemma: color count must be >= 1");
    require_compatible(a.partite(), b, "lemma");
    PartiteLemmaResult res;
    auto copies = partite_embeddings(a.partite(), b);
    res.m = static_cast<int>(copies.size());
    res.witness = b;
    if (copies.empty()) {
        res.note = "no copies of the pattern; the arrow is vacuous";
        return res;
    }
    if (r == 1) {
        res.note = "one color";
        return res;
    }

    std::vector<char> cov(b.size(), 0);
    for (const auto& g : copies)
        for (int v : g) cov[v] = 1;
    std::vector<int> covered;
    for (int x = 0; x < b.size(); ++x)
        if (cov[x]) covered.push_back(x);
    const bool full = static_cast<int>(covered.size()) == b.size();

    PartiteStructure bstar;
    if (full) {
        bstar = b;
    } else {
        std::vector<int> lvl;
        lvl.reserve(covered.size());
        for (int x : covered) lvl.push_back(b.level_of(x));
        bstar = PartiteStructure(substructure(b.base(), covered), std::move(lvl));
    }

    int d0 = 1;
    try {
        if (auto hd = hj_number(res.m, r, 8, opts)) {
            d0 = *hd;
            res.d_exact = true;
        }
    } catch (const BudgetError&) {
    }

    res.witness = bstar;
    for (int d = d0;; ++d) {
        res.d = d;
        try {
            PartiteStructure power = nr_power(bstar, a, d, opts);
            res.witness = power;
            if (!full) {
                auto occ = bounded_partite_embeddings(bstar, power, kMaxOccurrences, "lemma");
                res.witness = glue_at_occurrences(power, iota_vec(b.level_count()), b, covered,
                                                  occ);
            }
            auto chk = check_partite_arrow(res.witness, b, a.partite(), r, opts);
            if (chk.verdict == Verdict::holds) return res;
            if (res.d_exact)
                throw InvariantError(
                    "lemma: power at the exact Hales-Jewett dimension failed verification");
        } catch (const BudgetError& e) {
            res.status = ConstructionStatus::budget_partial;
            res.note = e.what();
            return res;
        }
    }
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

// One induction step: restrict P to the stage levels, apply the lemma, glue a
// copy of P onto every occurrence of the restriction inside the witness.
// Returns false when the stage exhausted the budget (note set in the entry).
bool advance_stage(PartiteStructure& P, const Transversal& a_t, const std::vector<int>& lv,
                   int r, const ArrowOptions& arrow, StageLogEntry& le, bool check_template,
                   const std::vector<FiniteStructure>* family) {
    le.result_points = P.size();
    std::vector<int> d_elems;
    std::vector<char> seen(lv.size(), 0);
    for (int x = 0; x < P.size(); ++x) {
        auto it = std::lower_bound(lv.begin(), lv.end(), P.level_of(x));
        if (it != lv.end() && *it == P.level_of(x)) {
            d_elems.push_back(x);
            seen[it - lv.begin()] = 1;
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        le.note = "vacuous: a stage level is unpopulated";
        return true;
    }

    std::vector<int> local(d_elems.size());
    for (std::size_t i = 0; i < d_elems.size(); ++i)
        local[i] = static_cast<int>(
            std::lower_bound(lv.begin(), lv.end(), P.level_of(d_elems[i])) - lv.begin());
    PartiteStructure D(substructure(P.base(), d_elems), std::move(local));
    le.d_points = D.size();

    if (check_template && !is_template(a_t, D))
        throw InvariantError("construction: stage structure is not a template for the pattern");

    if (partite_embeddings(a_t.partite(), D).empty()) {
        le.note = "vacuous: no pattern copies on these levels";
        return true;
    }

    auto lem = partite_lemma_witness(a_t, D, r, arrow);
    le.m = lem.m;
    le.d = lem.d;
    le.witness_points = lem.witness.size();
    if (lem.status == ConstructionStatus::budget_partial) {
        le.note = lem.note;
        return false;
    }
    if (family && !in_forb(*family, lem.witness.base()))
        throw InvariantError("construction: stage witness contains a forbidden substructure");

    std::vector<Map> occ;
    try {
        occ = bounded_partite_embeddings(D, lem.witness, kMaxOccurrences, "construction");
        P = glue_at_occurrences(lem.witness, lv, P, d_elems, occ);
    } catch (const BudgetError& e) {
        le.note = e.what();
        return false;
    }
    le.occurrences = static_cast<int>(occ.size());
    le.result_points = P.size();
    return true;
}

}  // namespace

ConstructionResult partite_construction(const FiniteStructure& a, const FiniteStructure& b, int r,
                                        const PartiteOptions& opts) {
    if (r < 1) throw InputError("construction: color count must be >= 1");
    const std::string& ord = opts.order_symbol;
    OrderedInputs in = split_ordered(a, b, ord);

    ConstructionResult res;
    res.output = b;
    if (r == 1) {
        res.note = "one color: the host itself suffices";
        return res;
    }
    if (!exists_embedding(a, b)) {
        res.note = "pattern does not embed into the host; the arrow is vacuous";
        return res;
    }

    const int an = a.size(), bn = b.size();
    int p = -1;
    for (int cand = bn; cand <= kMaxLevelSearch; ++cand) {
        try {
            if (check_arrow(linear_order(cand, ord), linear_order(bn, ord), linear_order(an, ord),
                            r, opts.arrow)
                    .verdict == Verdict::holds) {
                p = cand;
                break;
            }
        } catch (const BudgetError& e) {
            res.status = ConstructionStatus::budget_partial;
            res.note = std::string("level-count search: ") + e.what();
            return res;
        }
    }
    if (p < 0) {
        res.status = ConstructionStatus::budget_partial;
        res.note = "level-count search exhausted at " + std::to_string(kMaxLevelSearch);
        return res;
    }
    res.p = p;

    auto stage_sets = combinations(p, an);
    res.q = static_cast<int>(stage_sets.size());

    PartiteStructure P;
    StageLogEntry e0;
    e0.stage = 0;
    e0.levels = iota_vec(p);
    if (auto sb = singleton_base(in.b_tau, p)) {
        P = std::move(*sb);
        e0.note = "compact base: one point per level";
    } else {
        auto subsets = combinations(p, bn);
        const std::uint64_t total = static_cast<std::uint64_t>(subsets.size()) * bn;
        if (total > kMaxGluePoints) {
            res.status = ConstructionStatus::budget_partial;
            res.note = "base would have " + std::to_string(total) + " points";
            return res;
        }
        const Signature& sig = in.b_tau.signature();
        std::vector<std::vector<Tuple>> rels(sig.size());
        std::vector<int> lv(total);
        for (std::size_t ci = 0; ci < subsets.size(); ++ci) {
            const int base_id = static_cast<int>(ci) * bn;
            for (int j = 0; j < bn; ++j) lv[base_id + j] = subsets[ci][j];
            for (int si = 0; si < sig.size(); ++si)
                for (const auto& t : in.b_tau.relation(si)) {
                    Tuple tt(t.size());
                    for (std::size_t c = 0; c < t.size(); ++c) tt[c] = base_id + t[c];
                    rels[si].push_back(tt);
                }
        }
        P = PartiteStructure(FiniteStructure(sig, static_cast<int>(total), std::move(rels)),
                             std::move(lv));
        e0.note = "stacked base: one host copy per level subset";
    }
    if (!emittable(P)) {
        res.status = ConstructionStatus::budget_partial;
        res.note = "base with " + std::to_string(P.size()) + " points exceeds the emission budget";
        return res;
    }
    e0.result_points = P.size();
    res.stage_log.push_back(e0);

    for (int k = 1; k <= res.q; ++k) {
        StageLogEntry le;
        le.stage = k;
        le.levels = stage_sets[k - 1];
        PartiteStructure prev = P;
        bool ok = advance_stage(P, in.a_t, le.levels, r, opts.arrow, le, false, nullptr);
        if (ok && !emittable(P)) {
            ok = false;
            le.note = "stage completed but its " + std::to_string(P.size()) +
                      " points exceed the emission budget";
            P = std::move(prev);
        }
        res.stage_log.push_back(le);
        if (!ok) {
            res.status = ConstructionStatus::budget_partial;
            res.failed_stage = k;
            res.note = "stage " + std::to_string(k) + ": " + le.note;
            res.output = match_signature(linear_extension(P, ord), a.signature());
            return res;
        }
    }
    res.output = match_signature(linear_extension(P, ord), a.signature());
    return res;
}

ConstructionResult partite_construction_forb(const FiniteStructure& a, const FiniteStructure& b,
                                             int r, const std::vector<FiniteStructure>& family,
                                             const PartiteOptions& opts) {
    if (r < 1) throw InputError("construction: color count must be >= 1");
    const std::string& ord = opts.order_symbol;
    OrderedInputs in = split_ordered(a, b, ord);

    FiniteStructure a_plain = reduct(a, in.tau);
    FiniteStructure b_plain = reduct(b, in.tau);
    for (const auto& f : family) {
        if (!(f.signature() == a_plain.signature()))
            throw InputError("construction: family signature must match the unordered part");
        if (!is_irreducible(f)) throw InputError("construction: family member not irreducible");
    }
    if (!in_forb(family, a_plain) || !in_forb(family, b_plain))
        throw InputError("construction: inputs must omit the family");
    if (family.empty()) return partite_construction(a, b, r, opts);

    ConstructionResult res;
    res.output = b;
    if (r == 1) {
        res.note = "one color: the host itself suffices";
        return res;
    }
    if (!exists_embedding(a, b)) {
        res.note = "pattern does not embed into the host; the arrow is vacuous";
        return res;
    }

    FiniteStructure ambient;
    std::string amb_note;
    if (opts.ambient) {
        if (!(opts.ambient->signature() == a.signature()))
            throw InputError("construction: ambient signature differs");
        if (!is_linear_order(*opts.ambient, ord))
            throw InputError("construction: ambient must be linearly ordered");
        try {
            if (check_arrow_hypergraph(*opts.ambient, b, a, r, opts.arrow).verdict !=
                Verdict::holds)
                throw InputError("construction: supplied ambient does not arrow the inputs");
            amb_note = "supplied ambient, arrow verified";
        } catch (const BudgetError&) {
            amb_note = "supplied ambient, arrow not verified within budget";
        }
        ambient = *opts.ambient;
    } else {
        auto plain = partite_construction(a, b, r, opts);
        if (plain.status == ConstructionStatus::complete &&
            plain.output.size() <= kMaxLevelSearch) {
            ambient = plain.output;
            amb_note = "ambient from the unrestricted construction";
        } else if (auto found = find_arrow_ambient(a, b, r, opts.ambient_max_size, opts)) {
            ambient = std::move(*found);
            amb_note = "ambient from exhaustive search";
        } else {
            res.status = ConstructionStatus::budget_partial;
            res.note = "no ambient found up to size " + std::to_string(opts.ambient_max_size);
            return res;
        }
    }
    ambient = relabel(ambient, rank_perm(order_of(ambient, ord)));

    auto host_copies = enumerate_embeddings(b, ambient);
    if (host_copies.empty()) {
        res.status = ConstructionStatus::budget_partial;
        res.note = "ambient contains no copy of the host";
        return res;
    }
    auto pattern_copies = enumerate_embeddings(a, ambient);
    res.q = static_cast<int>(pattern_copies.size());

    // Only ambient vertices met by a host copy carry a level.
    const int cn = ambient.size();
    std::vector<int> vtx_level(cn, -1);
    {
        std::vector<char> occ(cn, 0);
        for (const auto& f : host_copies)
            for (int v : f) occ[v] = 1;
        int L = 0;
        for (int v = 0; v < cn; ++v)
            if (occ[v]) vtx_level[v] = L++;
        res.p = L;
    }

    const int an = a.size(), bn = b.size();
    std::vector<int> a_order = order_of(a, ord);
    std::vector<int> b_order = order_of(b, ord);

    PartiteStructure P;
    {
        const std::uint64_t total = static_cast<std::uint64_t>(host_copies.size()) * bn;
        if (total > kMaxGluePoints) {
            res.status = ConstructionStatus::budget_partial;
            res.note = "base would have " + std::to_string(total) + " points";
            return res;
        }
        const Signature& sig = in.b_tau.signature();
        std::vector<std::vector<Tuple>> rels(sig.size());
        std::vector<int> lv(total);
        for (std::size_t ci = 0; ci < host_copies.size(); ++ci) {
            const int base_id = static_cast<int>(ci) * bn;
            for (int j = 0; j < bn; ++j) lv[base_id + j] = vtx_level[host_copies[ci][b_order[j]]];
            for (int si = 0; si < sig.size(); ++si)
                for (const auto& t : in.b_tau.relation(si)) {
                    Tuple tt(t.size());
                    for (std::size_t c = 0; c < t.size(); ++c) tt[c] = base_id + t[c];
                    rels[si].push_back(tt);
                }
        }
        P = PartiteStructure(FiniteStructure(sig, static_cast<int>(total), std::move(rels)),
                             std::move(lv));
    }
    if (!emittable(P)) {
        res.status = ConstructionStatus::budget_partial;
        res.note = "base with " + std::to_string(P.size()) + " points exceeds the emission budget";
        return res;
    }
    StageLogEntry e0;
    e0.stage = 0;
    e0.levels = iota_vec(res.p);
    e0.result_points = P.size();
    e0.note = "one host copy per ambient host embedding";
    res.stage_log.push_back(e0);

    auto finalize = [&](FiniteStructure out) {
        if (!in_forb(family, reduct(out, in.tau)))
            throw InvariantError("construction: output contains a forbidden substructure");
        res.output = match_signature(out, a.signature());
    };

    for (int k = 1; k <= res.q; ++k) {
        StageLogEntry le;
        le.stage = k;
        const Map& g = pattern_copies[k - 1];
        std::vector<int> lv;
        bool unoccupied = false;
        for (int i = 0; i < an; ++i) {
            const int level = vtx_level[g[a_order[i]]];
            if (level < 0) unoccupied = true;
            lv.push_back(level);
        }
        le.levels = lv;
        if (unoccupied) {
            le.note = "vacuous: a stage vertex meets no host copy";
            le.result_points = P.size();
            res.stage_log.push_back(le);
            continue;
        }
        PartiteStructure prev = P;
        bool ok = advance_stage(P, in.a_t, lv, r, opts.arrow, le, true, &family);
        if (ok && !emittable(P)) {
            ok = false;
            le.note = "stage completed but its " + std::to_string(P.size()) +
                      " points exceed the emission budget";
            P = std::move(prev);
        }
        res.stage_log.push_back(le);
        if (!ok) {
            res.status = ConstructionStatus::budget_partial;
            res.failed_stage = k;
            res.note = "stage " + std::to_string(k) + ": " + le.note;
            finalize(linear_extension(P, ord));
            if (!amb_note.empty()) res.note += "; " + amb_note;
            return res;
        }
    }
    finalize(linear_extension(P, ord));
    res.note = amb_note;
    return res;
}

std::optional<FiniteStructure> find_arrow_ambient(const FiniteStructure& a,
                                                  const FiniteStructure& b, int r, int max_size,
                                                  const PartiteOptions& opts) {
    if (r < 1) throw InputError("ambient search: color count must be >= 1");
    const std::string& ord = opts.order_symbol;
    OrderedInputs in = split_ordered(a, b, ord);

    const Signature& sig = a.signature();
    const int ord_index = sig.index_of(ord);

    // Closure properties observed on both inputs cut the candidate space:
    // a symbol closed under entry permutations only needs one orbit bit, an
    // irreflexive one skips repeated entries.
    std::vector<char> symmetric(sig.size(), 1), irreflexive(sig.size(), 1);
    for (const FiniteStructure* s : {&a, &b})
        for (int si = 0; si < sig.size(); ++si) {
            if (si == ord_index) continue;
            for (const auto& t : s->relation(si)) {
                Tuple sorted = t;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                    irreflexive[si] = 0;
                Tuple perm = sorted;
                do {
                    if (!s->has_tuple(si, perm)) {
                        symmetric[si] = 0;
                        break;
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
        }

    for (int n = b.size(); n <= max_size; ++n) {
        struct Bit {
            int si;
            Tuple rep;
        };
        std::vector<Bit> bits;
        for (int si = 0; si < sig.size(); ++si) {
            if (si == ord_index) continue;
            const int h = sig.at(si).arity;
            Tuple t(h, 0);
            while (true) {
                bool skip = symmetric[si] && !std::is_sorted(t.begin(), t.end());
                if (!skip && irreflexive[si]) {
                    Tuple sorted = t;
                    std::sort(sorted.begin(), sorted.end());
                    skip = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
                }
                if (!skip) bits.push_back({si, t});
                int c = h - 1;
                while (c >= 0 && t[c] == n - 1) t[c--] = 0;
                if (c < 0) break;
                ++t[c];
            }
        }
        if (bits.size() > kMaxAmbientBits)
            throw BudgetError("ambient search: " + std::to_string(bits.size()) +
                              " relation bits at size " + std::to_string(n));

        std::vector<Tuple> ord_tuples;
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) ord_tuples.push_back({x, y});

        for (std::uint64_t mask = 0; mask < (1ull << bits.size()); ++mask) {
            std::vector<std::vector<Tuple>> rels(sig.size());
            rels[ord_index] = ord_tuples;
            for (std::size_t bi = 0; bi < bits.size(); ++bi) {
                if (!(mask >> bi & 1ull)) continue;
                const Bit& bt = bits[bi];
                if (symmetric[bt.si]) {
                    Tuple perm = bt.rep;
                    do {
                        rels[bt.si].push_back(perm);
                    } while (std::next_permutation(perm.begin(), perm.end()));
                } else {
                    rels[bt.si].push_back(bt.rep);
                }
            }
            FiniteStructure cand(sig, n, std::move(rels));
            if (!exists_embedding(b, cand)) continue;
            try {
                if (check_arrow_hypergraph(cand, b, a, r, opts.arrow).verdict == Verdict::holds)
                    return cand;
            } catch (const BudgetError&) {
            }
        }
    }
    return std::nullopt;
}

Json ConstructionResult::stage_log_json() const {
    Json arr = Json::array();
    for (const auto& e : stage_log) {
        Json j;
        j["stage"] = e.stage;
        j["levels"] = e.levels;
        j["d_points"] = e.d_points;
        j["m"] = e.m;
        j["d"] = e.d;
        j["witness_points"] = e.witness_points;
        j["occurrences"] = e.occurrences;
        j["result_points"] = e.result_points;
        j["note"] = e.note;
        arr.push_back(j);
    }
    return arr;
}

}  // namespace ramsey
