#pragma once

#include "stochlp/errors.hpp"
#include "stochlp/graph.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace stochlp {

struct McResult {
  double estimate = 0;
  double stderr_ = 0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

// Counter-based uniform in [0, 1): depends only on (seed, sample, edge).
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t edge);

// Hit fraction of longest path <= x over independent samples.
McResult monte_carlo(const Dag& g, double x, std::uint64_t samples, std::uint64_t seed);

struct VolumeBracket {
  mpq_class lower, upper;
  std::uint64_t cells = 0;
};

// Uniform edges only. Cells of side 1/R in [0,1]^m: lower counts cells whose
// maximal corner is feasible, upper those whose minimal corner is.
VolumeBracket riemann_bracket(const Dag& g, const mpq_class& x, int resolution,
                              const Budgets& budgets = default_budgets());

// Piecewise polynomial on [0, inf): piece i covers [breaks[i], breaks[i+1]),
// the last piece extends to infinity. Zero below 0.
struct PiecewisePoly {
  std::vector<mpq_class> breaks;               // breaks[0] == 0, increasing
  std::vector<std::vector<mpq_class>> coeffs;  // ascending powers of t

  static PiecewisePoly uniform_cdf(const mpq_class& a);
  static PiecewisePoly step();  // CDF of the constant 0
  mpq_class operator()(const mpq_class& t) const;
  PiecewisePoly derivative() const;
  void simplify();
};

PiecewisePoly pp_product(const PiecewisePoly& a, const PiecewisePoly& b);
// CDF of A + B from the density of A and the CDF of B.
PiecewisePoly pp_convolve(const PiecewisePoly& density_a, const PiecewisePoly& cdf_b);

struct SpResult {
  double value = 0;
  mpq_class rational;  // set for uniform edges
  bool is_rational = false;
  std::string digits;
};

// Two-terminal series-parallel reduction; several sources or terminals are
// joined to a virtual source or terminal by zero-length edges first.
SpResult series_parallel_exact(const Dag& g, const mpq_class& x,
                               const Budgets& budgets = default_budgets());

// CDF of the sum of m independent U[0,1].
mpq_class irwin_hall(int m, const mpq_class& x);

}  // namespace stochlp
