#include "stochlp/exact_exponential.hpp"

#include <chrono>

namespace stochlp {

namespace {

void check_input(const Dag& g) {
  if (g.m() == 0) throw InputError("graph has no edges");
  if (!g.isolated().empty())
    throw InputError("isolated vertex " + std::to_string(g.label(g.isolated()[0])) + " is not allowed");
}

}  // namespace

sym::Sum exact_exp_expression(const Prepared& p, const Budgets& budgets, SymStats* stats) {
  return sweep(p.ctx, EdgeModel{}, budgets, stats);
}

ExactResult exact_exp(const Dag& g, const std::optional<TreeDecomposition>& td, const mpq_class& x,
                      const Budgets& budgets) {
  auto t0 = std::chrono::steady_clock::now();
  check_input(g);
  if (g.family() != DistKind::Exponential)
    throw InputError("distribution mismatch: exact solver needs exponential edge lengths");
  ExactResult r;
  Prepared p = prepare(g, td);
  r.original_width = p.original_width;
  r.separated_width = p.separated_width;
  r.separated_n = p.separated_n;
  if (x <= 0) {
    r.digits = "0";
  } else {
    r.expression = exact_exp_expression(p, budgets, &r.stats);
    auto v = sym::evaluate(r.expression, {}, x);
    r.value = v.value;
    r.radius = v.radius;
    r.digits = v.digits;
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace stochlp
