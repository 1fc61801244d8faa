#include "ramsey/hales_jewett.hpp"

#include <algorithm>
#include <string>

#include "ramsey/errors.hpp"

namespace ramsey {

namespace {

void validate_md(int m, int d) {
    if (m < 1) throw InputError("hales-jewett: alphabet size must be >= 1");
    if (d < 1) throw InputError("hales-jewett: dimension must be >= 1");
}

std::uint64_t checked_pow(std::uint64_t base, int exp, const char* what) {
    std::uint64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && out > UINT64_MAX / base)
            throw BudgetError(std::string("hales-jewett: ") + what + " overflows");
        out *= base;
    }
    return out;
}

} // namespace

std::uint64_t hj_line_count(int m, int d) {
    validate_md(m, d);
    std::uint64_t all = checked_pow(static_cast<std::uint64_t>(m) + 1, d, "word count");
    std::uint64_t solid = checked_pow(static_cast<std::uint64_t>(m), d, "point count");
    return all - solid;
}

std::vector<Word> hj_lines(int m, int d) {
    validate_md(m, d);
    std::uint64_t count = hj_line_count(m, d);
    if (count > (std::uint64_t(1) << 28))
        throw BudgetError("hales-jewett: too many lines to materialize");

    std::vector<Word> lines;
    lines.reserve(count);
    Word w(d, 0);
    // Odometer over {0..m}^d, skipping words without a wildcard.
    while (true) {
        bool has_star = false;
        for (int x : w)
            if (x == 0) { has_star = true; break; }
        if (has_star) lines.push_back(w);
        int pos = d - 1;
        while (pos >= 0 && w[pos] == m) w[pos--] = 0;
        if (pos < 0) break;
        ++w[pos];
    }
    return lines;
}

std::vector<Word> line_points(const Word& line, int m) {
    if (m < 1) throw InputError("hales-jewett: alphabet size must be >= 1");
    bool has_star = false;
    for (int x : line) {
        if (x < 0 || x > m) throw InputError("hales-jewett: letter out of range");
        if (x == 0) has_star = true;
    }
    if (!has_star) throw InputError("hales-jewett: line needs at least one wildcard");

    std::vector<Word> pts;
    pts.reserve(m);
    for (int a = 1; a <= m; ++a) {
        Word p = line;
        for (int& x : p)
            if (x == 0) x = a;
        pts.push_back(std::move(p));
    }
    return pts;
}

std::uint64_t word_index(const Word& w, int m) {
    std::uint64_t idx = 0;
    for (int x : w) {
        if (x < 1 || x > m) throw InputError("hales-jewett: point letter out of range");
        idx = idx * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(x - 1);
    }
    return idx;
}

Word index_word(std::uint64_t idx, int m, int d) {
    validate_md(m, d);
    Word w(d, 1);
    for (int pos = d - 1; pos >= 0; --pos) {
        w[pos] = static_cast<int>(idx % m) + 1;
        idx /= m;
    }
    if (idx != 0) throw InputError("hales-jewett: point index out of range");
    return w;
}

ArrowResult hj_check(int m, int r, int d, const ArrowOptions& opts) {
    validate_md(m, d);
    if (r < 1) throw InputError("hales-jewett: color count must be >= 1");

    std::uint64_t points = checked_pow(static_cast<std::uint64_t>(m), d, "point count");
    if (points > (std::uint64_t(1) << 24))
        throw BudgetError("hales-jewett: grid too large to materialize");

    std::vector<std::vector<int>> families;
    families.reserve(hj_line_count(m, d));
    for (const auto& line : hj_lines(m, d)) {
        std::vector<int> fam;
        fam.reserve(m);
        for (const auto& p : line_points(line, m))
            fam.push_back(static_cast<int>(word_index(p, m)));
        std::sort(fam.begin(), fam.end());
        fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
        families.push_back(std::move(fam));
    }
    return sweep_families(static_cast<std::size_t>(points), families, r, 1, opts);
}

std::optional<int> hj_number(int m, int r, int d_max, const ArrowOptions& opts) {
    if (d_max < 1) throw InputError("hales-jewett: d_max must be >= 1");
    for (int d = 1; d <= d_max; ++d)
        if (hj_check(m, r, d, opts).verdict == Verdict::holds) return d;
    return std::nullopt;
}

std::optional<Word> find_mono_line(int m, int d, const std::vector<int>& coloring) {
    validate_md(m, d);
    std::uint64_t points = checked_pow(static_cast<std::uint64_t>(m), d, "point count");
    if (coloring.size() != points)
        throw InputError("hales-jewett: coloring must assign every grid point");

    for (const auto& line : hj_lines(m, d)) {
        int seen = 0;
        bool mono = true;
        for (const auto& p : line_points(line, m)) {
            int c = coloring[static_cast<std::size_t>(word_index(p, m))];
            if (seen == 0) seen = c;
            else if (seen != c) { mono = false; break; }
        }
        if (mono) return line;
    }
    return std::nullopt;
}

} // namespace ramsey
