#pragma once

#include "stochlp/symbolic.hpp"
#include "stochlp/tree_decomposition.hpp"

#include <vector>

namespace stochlp {

// How a random edge turns into a CDF factor.
struct EdgeModel {
  bool taylor = false;
  int tau = 0;
  // F^{(d)}(0)/d! for d = 0..tau, used when taylor is set.
  std::vector<mpq_class> series;
};

struct SymStats {
  std::size_t peak_regions = 0;
  std::size_t peak_terms = 0;
  std::vector<std::size_t> bag_regions;  // regions of each bag term after integration
  void see(const sym::Sum& s);
};

// H(z_u - z_v) * F(z_u - z_v) for one edge.
sym::Sum edge_cdf(int u, int v, const DistSpec& d, const EdgeModel& model);

// Bag term: the internal vertices of G_i integrated out, sources kept as
// shift variables without differentiation.
sym::Sum bag_phi(const DecompositionContext& ctx, int bag, const EdgeModel& model,
                 const Budgets& budgets, SymStats* stats = nullptr);

// φ(G_i): bag_phi differentiated along every source.
sym::Sum bag_density_exp(const DecompositionContext& ctx, int bag,
                         const Budgets& budgets = default_budgets());

// Subtree term of bag i from its bag term and finished child terms: glue
// vertices integrated out, then sources not in the parent bag set to x and
// terminals set to 0.
sym::Sum merge_phi(const DecompositionContext& ctx, int bag, const sym::Sum& bag_term,
                   const std::vector<const sym::Sum*>& children, const EdgeModel& model,
                   const Budgets& budgets, SymStats* stats = nullptr);

// Bottom-up sweep; returns the root term (a function of x alone).
sym::Sum sweep(const DecompositionContext& ctx, const EdgeModel& model, const Budgets& budgets,
               SymStats* stats = nullptr);

}  // namespace stochlp
