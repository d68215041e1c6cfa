#pragma once

#include "stochlp/errors.hpp"
#include "stochlp/tree_decomposition.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace stochlp {

struct GridSpec {
  int M = 1;
  double x = 1.0;
};

// Dense table over {0..extent-1} per variable, row-major with the last
// variable fastest. vars are vertex ids in increasing order.
struct StaircaseTable {
  std::vector<int> vars;
  std::vector<char> is_source;  // role per var
  std::vector<int> extent;
  std::vector<double> values;
  GridSpec grid;
  bool cumulative = true;  // Λ-table; false for λ

  std::size_t size() const { return values.size(); }
  int position(int var) const;  // index into vars, or -1
  std::size_t offset(const std::vector<int>& g) const;
  double at(const std::vector<int>& g) const { return values[offset(g)]; }
  static StaircaseTable scalar(double v, GridSpec grid);
};

// Table algebra used by the merge. All loops run in lexicographic order.
StaircaseTable fix_var(const StaircaseTable& t, int var, int index);
// Backward difference t(g) - t(g-1) along var, with t(-1) = 0.
StaircaseTable backward_difference(const StaircaseTable& t, int var);
// Product of the factors summed over sum_vars. Shared vars must agree on role.
StaircaseTable contract(const std::vector<const StaircaseTable*>& factors,
                        const std::vector<int>& sum_vars, std::uint64_t max_entries,
                        bool parallel);

// M = ceil((6k+6) m n / eps), eps clamped to (0,1].
std::int64_t choose_M(int k, int n, int m, double eps);

// Cells of the uniform edges of G_i whose minimal corner satisfies every
// bag constraint at the shifts z (keyed by vertex, over S_i and T_i).
std::uint64_t bag_cell_count(const DecompositionContext& ctx, int bag,
                             const std::map<int, double>& z, GridSpec grid);

struct BagTableStats {
  std::uint64_t cells = 0;
  std::uint64_t patterns = 0;
  std::uint64_t entries = 0;
};

// Λ_i on the grid: N / M^{|E_u(G_i)|}. source_shift is added to every source
// coordinate before counting; `fixed` pins vars to a grid index and drops
// them from the table.
StaircaseTable bag_staircase(const DecompositionContext& ctx, int bag, GridSpec grid,
                             int source_shift = 0, const std::map<int, int>& fixed = {},
                             std::uint64_t max_cells = default_budgets().max_cells,
                             bool parallel = true, BagTableStats* stats = nullptr);

// Plain forward differences along the given source vars (extent drops by 1).
StaircaseTable finite_difference(const StaircaseTable& t, const std::vector<int>& source_vars);

// Sum over every source coordinate with terminal coordinates at index 0.
double accumulate(const StaircaseTable& t);

// Λ(D_i) from the bag table (source-shifted, frozen vars already fixed) and
// the finished child tables.
StaircaseTable merge_subtree(const DecompositionContext& ctx, int bag, const StaircaseTable& bag_table,
                             const std::vector<const StaircaseTable*>& child_tables,
                             std::uint64_t max_entries, bool parallel);

struct BagReport {
  int bag = 0;
  int edges = 0;
  int uniform_edges = 0;
  std::uint64_t cells = 0;
  std::uint64_t patterns = 0;
  std::uint64_t entries = 0;
  double ms = 0;
};

struct ApproxResult {
  double value = 0;
  std::int64_t M = 0;
  int original_width = 0;
  int separated_width = 0;
  int separated_n = 0;
  std::uint64_t cells_used = 0;
  std::vector<BagReport> per_bag;
  double elapsed_ms = 0;
};

struct ApproxOptions {
  double epsilon = 1.0;
  std::optional<std::int64_t> grid_m;
  Budgets budgets = default_budgets();
  bool parallel = true;
};

ApproxResult approx_dag(const Dag& g, const std::optional<TreeDecomposition>& td, double x,
                        const ApproxOptions& opt = {});

// Same pipeline on an already prepared context.
ApproxResult approx_prepared(const Prepared& p, double x, std::int64_t M, const ApproxOptions& opt);

}  // namespace stochlp
