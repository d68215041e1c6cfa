#include "stochlp/oracles.hpp"

#include <cmath>

namespace stochlp {

VolumeBracket riemann_bracket(const Dag& g, const mpq_class& x, int resolution, const Budgets& budgets) {
  if (g.m() == 0) throw InputError("graph has no edges");
  if (resolution < 1) throw InputError("resolution must be positive");
  for (const Edge& e : g.edges())
    if (e.dist.kind != DistKind::Uniform) throw InputError("riemann_bracket needs uniform edge lengths");
  const int m = g.m();
  std::uint64_t cells = 1;
  for (int e = 0; e < m; ++e) {
    if (cells > budgets.max_cells / static_cast<std::uint64_t>(resolution))
      throw BudgetError("riemann_bracket: R^m exceeds the cell budget");
    cells *= static_cast<std::uint64_t>(resolution);
  }
  VolumeBracket b;
  b.cells = cells;
  if (x < 0) {
    b.lower = b.upper = 0;
    return b;
  }
  // Corner lengths are a_e * c / R; compare R * length (an integer) with
  // floor(x R), exact for the integer sums involved.
  mpz_class thr_z = mpz_class(x.get_num() * resolution) / x.get_den();
  mpz_class cap = 0;
  for (const Edge& e : g.edges()) cap += e.dist.a;
  cap *= resolution;
  const double threshold = (thr_z > cap ? cap : thr_z).get_d();

  std::vector<int> ids(m);
  for (int e = 0; e < m; ++e) ids[e] = e;
  std::vector<char> src(g.n(), 0), term(g.n(), 0);
  for (int s : g.sources()) src[s] = 1;
  for (int t : g.terminals()) term[t] = 1;
  const std::vector<double> zeros(g.n(), 0.0);

  std::uint64_t lower = 0, upper = 0;
  const auto total = static_cast<std::int64_t>(cells);
#pragma omp parallel
  {
    std::vector<double> lo(m), hi(m);
#pragma omp for reduction(+ : lower, upper) schedule(static)
    for (std::int64_t k = 0; k < total; ++k) {
      auto rest = static_cast<std::uint64_t>(k);
      for (int e = 0; e < m; ++e) {
        auto c = static_cast<double>(rest % static_cast<std::uint64_t>(resolution));
        rest /= static_cast<std::uint64_t>(resolution);
        lo[e] = g.edge(e).dist.a * c;
        hi[e] = g.edge(e).dist.a * (c + 1);
      }
      if (static_longest_path(g, ids, lo, src, term, zeros, zeros) <= threshold) {
        ++upper;
        if (static_longest_path(g, ids, hi, src, term, zeros, zeros) <= threshold) ++lower;
      }
    }
  }
  b.lower = mpq_class(mpz_class(std::to_string(lower)), mpz_class(std::to_string(cells)));
  b.upper = mpq_class(mpz_class(std::to_string(upper)), mpz_class(std::to_string(cells)));
  b.lower.canonicalize();
  b.upper.canonicalize();
  return b;
}

}  // namespace stochlp
