#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramsey/arrow.hpp"
#include "ramsey/embedding.hpp"
#include "ramsey/hales_jewett.hpp"
#include "ramsey/structure.hpp"

namespace ramsey {

// A structure whose domain is split into nonempty levels 0..n-1. The implied
// weak linear order (x before y iff level(x) <= level(y)) is not stored as a
// relation; partite embeddings preserve levels exactly, which coincides with
// plain embeddings of the order-encoded structure when level counts match.
class PartiteStructure {
  public:
    PartiteStructure() = default;
    // levels[i] is the level of element i; levels must cover 0..n-1 with
    // every level nonempty.
    PartiteStructure(FiniteStructure base, std::vector<int> levels);

    const FiniteStructure& base() const { return base_; }
    const std::vector<int>& levels() const { return levels_; }
    int level_of(int x) const { return levels_.at(x); }
    int level_count() const { return n_levels_; }
    int size() const { return base_.size(); }
    const std::vector<int>& level_members(int level) const;

    bool operator==(const PartiteStructure&) const = default;

  private:
    FiniteStructure base_;
    std::vector<int> levels_;
    int n_levels_ = 0;
    std::vector<std::vector<int>> members_;
};

// A partite structure with exactly one element per level.
class Transversal {
  public:
    Transversal() = default;
    explicit Transversal(PartiteStructure ps);

    const PartiteStructure& partite() const { return ps_; }
    const FiniteStructure& base() const { return ps_.base(); }
    int level_count() const { return ps_.level_count(); }
    // The unique element on the given level.
    int element_at(int level) const { return ps_.level_members(level).at(0); }
    // pi(x) for x in another structure on the same levels: the element of
    // this transversal on x's level.
    int pi(const PartiteStructure& b, int x) const { return element_at(b.level_of(x)); }

  private:
    PartiteStructure ps_;
};

bool is_transversal(const PartiteStructure& ps);

// Level-preserving embeddings of a into b (level counts must agree and the
// signatures must match). Enumeration order follows enumerate_embeddings.
std::vector<Map> partite_embeddings(const PartiteStructure& a, const PartiteStructure& b);
bool is_partite_embedding(const PartiteStructure& a, const PartiteStructure& b, const Map& m);

// Encode the level order as an explicit weak-linear-order relation appended
// to the signature, and back. Round trip is exact.
FiniteStructure partite_to_structure(const PartiteStructure& ps,
                                     const std::string& prec_symbol = "prec");
PartiteStructure structure_to_partite(const FiniteStructure& s,
                                      const std::string& prec_symbol = "prec");

Json partite_to_json(const PartiteStructure& ps);
PartiteStructure partite_from_json(const Json& j);

// The d-th NR-power of b over a. Level i of the result is (level i of b)^d,
// elements ordered by level, then lexicographically by coordinate tuples.
// A tuple is in a result relation iff some nonempty set P of coordinate
// positions projects it onto a tuple of b and every other position lands
// inside a single copy of a in b.
PartiteStructure nr_power(const PartiteStructure& b, const Transversal& a, int d,
                          const ArrowOptions& opts = {});

// Index of the power element on `level` whose coordinate tuple (values are
// element ids of b, all on that level) is `coords`.
int power_element(const PartiteStructure& b, int d, int level, const Tuple& coords);

// true iff every tuple of b projects level-wise to a tuple of a.
bool is_template(const Transversal& a, const PartiteStructure& b);

// The copy-diagonal embeddings g_alpha of a into nr_power(b, a, d): alpha
// ranges over [m]^d (m = number of copies of a in b) in lexicographic order,
// matching the point order of the Hales-Jewett grid.
std::vector<Map> power_alpha_embeddings(const Transversal& a, const PartiteStructure& b, int d,
                                        const ArrowOptions& opts = {});

// The line witness g_L: b -> nr_power(b, a, d) for a combinatorial line over
// the copy alphabet (Word with 0 as wildcard, letters 1..m). Requires every
// element of b to lie in a copy of a; throws InvariantError if the defining
// values disagree (which would contradict well-definedness).
Map power_line_embedding(const Transversal& a, const PartiteStructure& b, int d,
                         const Word& line, const ArrowOptions& opts = {});

enum class ConstructionStatus { complete, budget_partial };

struct PartiteLemmaResult {
    ConstructionStatus status = ConstructionStatus::complete;
    PartiteStructure witness; // on budget_partial: the largest power built
    int m = 0;                // copies of a in the covered part of b
    int d = 0;                // power dimension reached
    bool d_exact = false;     // d came from hj_number rather than escalation
    std::string note;
};

// Witness C with C -> (B)^A_r for level-preserving colorings, built as an
// NR-power of the covered part of b, verified by exhaustive sweep, and
// re-extended to full b at every embedding of the covered part.
PartiteLemmaResult partite_lemma_witness(const Transversal& a, const PartiteStructure& b,
                                         int r, const ArrowOptions& opts = {});

struct StageLogEntry {
    int stage = 0;             // 0 for the base stage
    std::vector<int> levels;   // level subset handled by this stage
    int d_points = 0;          // size of the induced structure D
    int m = 0;
    int d = 0;
    int witness_points = 0;    // size of E_k
    int occurrences = 0;       // embeddings of D into E_k that got a copy glued
    int result_points = 0;     // size of P_k
    std::string note;
};

struct ConstructionResult {
    ConstructionStatus status = ConstructionStatus::complete;
    FiniteStructure output;       // ordered structure; partial progress on budget errors
    int p = 0;                    // ambient size (levels)
    int q = 0;                    // number of stages
    int failed_stage = -1;        // stage index that hit the budget, -1 if none
    std::vector<StageLogEntry> stage_log;
    std::string note;
    Json stage_log_json() const;
};

struct PartiteOptions {
    ArrowOptions arrow;
    std::string order_symbol = "ord";
    // partite_construction_forb only: ambient to use instead of running the
    // plain construction or searching.
    std::optional<FiniteStructure> ambient;
    int ambient_max_size = 7;
};

// The partite construction for linearly ordered structures: from ordered a
// and b (order relation `order_symbol` in both signatures) builds c with
// c -> (b)^a_r, stage by stage. Budget exhaustion at any stage returns the
// last completed stage as a partial output instead of throwing.
ConstructionResult partite_construction(const FiniteStructure& a, const FiniteStructure& b,
                                        int r, const PartiteOptions& opts = {});

// The forbidden-family variant: all family members must be irreducible and
// a, b must omit them. Every stage witness is checked to stay inside the
// class; the output (complete or partial) omits the family.
ConstructionResult partite_construction_forb(const FiniteStructure& a,
                                             const FiniteStructure& b, int r,
                                             const std::vector<FiniteStructure>& family,
                                             const PartiteOptions& opts = {});

// Smallest linearly ordered structure (by size, then by enumeration order of
// relation tuples) that arrows (b)^a_r, found by exhaustive search with the
// hypergraph backend. nullopt if none exists up to max_size.
std::optional<FiniteStructure> find_arrow_ambient(const FiniteStructure& a,
                                                  const FiniteStructure& b, int r,
                                                  int max_size,
                                                  const PartiteOptions& opts = {});

// Arrow check where colorings live on level-preserving embeddings.
ArrowResult check_partite_arrow(const PartiteStructure& c, const PartiteStructure& b,
                                const PartiteStructure& a, int r,
                                const ArrowOptions& opts = {});

} // namespace ramsey
