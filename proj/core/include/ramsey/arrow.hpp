#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ramsey/embedding.hpp"
#include "ramsey/json_io.hpp"
#include "ramsey/structure.hpp"

namespace ramsey {

enum class Verdict { holds, fails };

// 2^26 colorings unless RAMSEY_BUDGET overrides it.
std::uint64_t default_budget();

struct ArrowOptions {
    std::uint64_t budget = default_budget();
    int jobs = 1;
};

// Everything the coloring sweep needs: the indexed embeddings of A into C and,
// for each embedding f of B into C, the index set {index(f o e) : e in Emb(A,B)}.
struct ArrowInstance {
    std::vector<Map> pattern_embeddings;   // Emb(A, C), lexicographic order
    std::vector<Map> host_embeddings;      // Emb(B, C), lexicographic order
    std::vector<std::vector<int>> families; // one sorted index set per host embedding
};

ArrowInstance build_arrow_instance(const FiniteStructure& c, const FiniteStructure& b,
                                   const FiniteStructure& a);

struct ArrowResult {
    Verdict verdict = Verdict::holds;
    // Present on fails: the first refuting coloring in base-r counter order
    // (colors 1..r assigned along the Emb(A,C) index order).
    std::optional<std::vector<int>> coloring;
    std::uint64_t checked = 0;
};

// C -> (B)^A_r with defect threshold k: every r-coloring of Emb(A,C) admits
// f in Emb(B,C) whose composed family carries at most k colors. Exhaustive
// sweep with sound pruning; refuses upfront when r^|Emb(A,C)| exceeds the
// budget. Deterministic for any job count.
ArrowResult check_arrow(const FiniteStructure& c, const FiniteStructure& b,
                        const FiniteStructure& a, int r, const ArrowOptions& opts = {});
ArrowResult check_arrow_defect(const FiniteStructure& c, const FiniteStructure& b,
                               const FiniteStructure& a, int r, int k,
                               const ArrowOptions& opts = {});

// Same verdict via the hypergraph reduction: vertices are Emb(A,C), one
// hyperedge per composed family, and the arrow fails exactly when the
// vertices admit an r-coloring with no monochromatic hyperedge (equivalently
// a homomorphism into the "all non-constant tuples" template on [r]).
// Backtracking with dynamic variable order; the refuting coloring, if any,
// need not match the sweep's, but always re-verifies. The budget caps
// backtracking assignments instead of r^|Emb(A,C)|, so instances far beyond
// the sweep's reach stay checkable.
ArrowResult check_arrow_hypergraph(const FiniteStructure& c, const FiniteStructure& b,
                                   const FiniteStructure& a, int r,
                                   const ArrowOptions& opts = {});

// Joint sweep: colorings (chi_1, ..., chi_l) of Emb(A_i, C) for each pattern;
// requires one f in Emb(B,C) monochromatic under every chi_i simultaneously.
struct SimultaneousResult {
    Verdict verdict = Verdict::holds;
    std::optional<std::vector<std::vector<int>>> colorings; // per pattern, on fails
    std::uint64_t checked = 0;
};
SimultaneousResult check_simultaneous(const FiniteStructure& c, const FiniteStructure& b,
                                      const std::vector<FiniteStructure>& patterns, int r,
                                      const ArrowOptions& opts = {});

// Iterates a 2-color witness builder r-1 times (C_1 = oracle(B),
// C_i = oracle(C_{i-1})); the result handles r colors whenever the oracle
// keeps its 2-color contract. r = 1 returns B unchanged.
FiniteStructure compose_color_reduction(
    const std::function<FiniteStructure(const FiniteStructure&)>& oracle,
    const FiniteStructure& b, int r);

// Direct evaluation, no search: index of some family carrying at most k
// colors under `coloring`, or nullopt. Used to re-verify certificates.
std::optional<int> find_satisfying_family(const ArrowInstance& inst,
                                          const std::vector<int>& coloring, int k = 1);

// Sweep core over an explicit family list; exposed for the partite pipeline,
// which checks arrows against designated witness families only.
ArrowResult sweep_families(std::size_t n_points, const std::vector<std::vector<int>>& families,
                           int r, int k, const ArrowOptions& opts,
                           const std::vector<int>& block_starts = {0});

Json certificate_to_json(const ArrowResult& r);
Json certificate_to_json(const SimultaneousResult& r);

} // namespace ramsey
