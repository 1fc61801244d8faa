#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ramsey/arrow.hpp"

namespace ramsey {

// A word over the alphabet {1..m} with 0 standing for the wildcard slot.
// A line is a word with at least one wildcard; substituting each letter for
// the wildcards yields its m points.
using Word = std::vector<int>;

// All lines in dimension d, lexicographic with the wildcard ordered before
// every letter. This order is part of the library contract.
std::vector<Word> hj_lines(int m, int d);

// (m+1)^d - m^d, the number of lines; throws BudgetError on overflow.
std::uint64_t hj_line_count(int m, int d);

std::vector<Word> line_points(const Word& line, int m);

// Points of the grid [m]^d are indexed lexicographically, most significant
// coordinate first.
std::uint64_t word_index(const Word& w, int m);
Word index_word(std::uint64_t idx, int m, int d);

// Does every r-coloring of [m]^d contain a monochromatic line? Verdict
// "holds" means yes; a "fails" certificate is the lexicographically first
// refuting coloring, indexed by point order.
ArrowResult hj_check(int m, int r, int d, const ArrowOptions& opts = {});

// Smallest dimension in 1..d_max with the property, or nullopt if none was
// found within d_max. Budget refusals propagate.
std::optional<int> hj_number(int m, int r, int d_max, const ArrowOptions& opts = {});

// Scans lines in contract order and returns the first line monochromatic
// under the given point coloring, if any.
std::optional<Word> find_mono_line(int m, int d, const std::vector<int>& coloring);

} // namespace ramsey
