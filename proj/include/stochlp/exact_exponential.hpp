#pragma once

#include "stochlp/bag_symbolic.hpp"

#include <optional>
#include <string>

namespace stochlp {

struct ExactResult {
  double value = 0;
  double radius = 0;
  std::string digits;
  sym::Sum expression;  // function of x alone
  int original_width = 0;
  int separated_width = 0;
  int separated_n = 0;
  SymStats stats;
  double elapsed_ms = 0;
};

// Pr[longest path <= x] for independent standard exponential edge lengths.
ExactResult exact_exp(const Dag& g, const std::optional<TreeDecomposition>& td, const mpq_class& x,
                      const Budgets& budgets = default_budgets());

// Root expression only; evaluate it at several x without recomputing.
sym::Sum exact_exp_expression(const Prepared& p, const Budgets& budgets, SymStats* stats = nullptr);

}  // namespace stochlp
