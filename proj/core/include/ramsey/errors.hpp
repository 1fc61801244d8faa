#pragma once

#include <stdexcept>
#include <string>

namespace ramsey {

// Malformed input: bad signatures, out-of-range tuples, unparseable JSON,
// violated operation preconditions. CLI maps this to exit code 3.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A search space exceeded the configured budget before a verdict was reached.
// CLI maps this to exit code 2.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check failed; indicates a bug, not bad input.
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

} // namespace ramsey
