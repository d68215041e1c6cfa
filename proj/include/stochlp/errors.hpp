#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stochlp {

// Malformed input, unsupported distribution mix, invalid decomposition.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured size limit (cells, regions, terms) would be exceeded.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural invariant failed; signals a bug or an inconsistent input.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Budgets {
  std::uint64_t max_cells = 1000000000ULL;
  std::uint64_t max_regions = 1000000ULL;
  std::uint64_t max_terms = 10000000ULL;
};

// Defaults, optionally scaled by STOCHLP_BUDGET (a positive multiplier,
// or an absolute "cells=..,regions=..,terms=.." list).
Budgets default_budgets();

}  // namespace stochlp
