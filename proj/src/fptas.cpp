#include "stochlp/fptas.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>

namespace stochlp {

std::int64_t choose_M(int k, int n, int m, double eps) {
  if (!(eps > 0)) throw InputError("epsilon must be positive");
  if (eps > 1) eps = 1;
  long double q = static_cast<long double>(6 * k + 6) * m * n / eps;
  long double r = std::round(q);
  long double M = std::fabs(q - r) <= 1e-9L * std::max<long double>(1, r) ? r : std::ceil(q);
  if (M < 1) M = 1;
  if (M > INT_MAX) throw InputError("grid resolution M overflows");
  return static_cast<std::int64_t>(M);
}

namespace {

// The bag-local constraint system: for every source s and terminal t of G_i
// joined by a path, g_s - g_t >= ceil(K_st / x) with K_st the longest path.
struct BagSystem {
  std::vector<int> fixed;     // S_i then T_i, sorted within each
  std::vector<int> local_fixed;
  std::vector<char> source;   // role per fixed vertex
  std::vector<int> uniform;   // indices into bag edge list with random length
  std::vector<int> coef;      // a per uniform edge
  std::vector<std::pair<int, int>> pairs;  // indices into fixed
  std::vector<int> tails, heads, len_slot;  // local ids; len_slot -1 on zero edges
  int local_n = 0;
};

BagSystem build_system(const DecompositionContext& ctx, int bag) {
  BagSystem s;
  const Dag& g = ctx.graph;
  std::vector<int> local(g.n(), -1);
  std::vector<int> verts;
  for (int e : ctx.bag_edges[bag]) {
    verts.push_back(g.edge(e).u);
    verts.push_back(g.edge(e).v);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  for (std::size_t k = 0; k < verts.size(); ++k) local[verts[k]] = static_cast<int>(k);
  s.local_n = static_cast<int>(verts.size());
  for (int v : ctx.S[bag]) {
    s.fixed.push_back(v);
    s.source.push_back(1);
  }
  for (int v : ctx.T[bag]) {
    s.fixed.push_back(v);
    s.source.push_back(0);
  }

  std::vector<int> edges = ctx.bag_edges[bag];
  std::sort(edges.begin(), edges.end(), [&](int a, int b) {
    return std::pair(g.edge(a).u, g.edge(a).v) < std::pair(g.edge(b).u, g.edge(b).v);
  });
  for (int e : edges) {
    const Edge& ed = g.edge(e);
    s.tails.push_back(local[ed.u]);
    s.heads.push_back(local[ed.v]);
    if (ed.dist.kind == DistKind::Zero) {
      s.len_slot.push_back(-1);
    } else if (ed.dist.kind == DistKind::Uniform) {
      s.len_slot.push_back(static_cast<int>(s.uniform.size()));
      s.uniform.push_back(e);
      s.coef.push_back(ed.dist.a);
    } else {
      throw InputError("distribution mismatch: the grid algorithm needs uniform edge lengths");
    }
  }
  for (std::size_t a = 0; a < s.fixed.size(); ++a) {
    if (!s.source[a]) continue;
    std::vector<std::int64_t> d(s.local_n, -1);
    d[local[s.fixed[a]]] = 0;
    for (std::size_t k = 0; k < s.tails.size(); ++k)
      if (d[s.tails[k]] >= 0) d[s.heads[k]] = 0;
    for (std::size_t b = 0; b < s.fixed.size(); ++b)
      if (!s.source[b] && d[local[s.fixed[b]]] >= 0)
        s.pairs.push_back({static_cast<int>(a), static_cast<int>(b)});
  }
  for (int v : s.fixed) s.local_fixed.push_back(local[v]);
  return s;
}

// Smallest d >= 0 with K <= d*x, capped at `cap`.
int min_shift(std::int64_t K, double x, int cap) {
  if (K == 0) return 0;
  if (!(x > 0)) return cap;
  double q = std::ceil(static_cast<double>(K) / x);
  if (q >= cap) {
    if (static_cast<double>(K) <= (cap - 1) * x) q = cap - 1;
    else return cap;
  }
  auto d = static_cast<std::int64_t>(q);
  while (d > 0 && static_cast<double>(K) <= static_cast<double>(d - 1) * x) --d;
  while (static_cast<double>(K) > static_cast<double>(d) * x) ++d;
  return static_cast<int>(std::min<std::int64_t>(d, cap));
}

struct Patterns {
  std::vector<std::vector<int>> d;
  std::vector<std::uint64_t> count;
  std::uint64_t cells = 0;
};

Patterns count_patterns(int bag, const BagSystem& s, GridSpec grid,
                        int cap, std::uint64_t max_cells) {
  Patterns out;
  std::uint64_t cells = 1;
  for (std::size_t k = 0; k < s.uniform.size(); ++k) {
    if (cells > max_cells / static_cast<std::uint64_t>(grid.M))
      throw BudgetError("bag " + std::to_string(bag) + " needs more than " + std::to_string(max_cells) +
                        " cells");
    cells *= static_cast<std::uint64_t>(grid.M);
  }
  out.cells = cells;
  std::map<std::vector<int>, std::uint64_t> hist;
  std::vector<int> c(s.uniform.size(), 0);
  std::vector<std::int64_t> len(s.tails.size(), 0), d(s.local_n);
  std::vector<int> pattern(s.pairs.size());
  for (std::uint64_t cell = 0; cell < cells; ++cell) {
    for (std::size_t k = 0; k < s.tails.size(); ++k)
      len[k] = s.len_slot[k] < 0 ? 0 : static_cast<std::int64_t>(s.coef[s.len_slot[k]]) * c[s.len_slot[k]];
    std::size_t p = 0;
    for (std::size_t a = 0; a < s.fixed.size() && p < s.pairs.size(); ++a) {
      if (s.pairs[p].first != static_cast<int>(a)) continue;
      int la = s.local_fixed[a];
      std::fill(d.begin(), d.end(), -1);
      d[la] = 0;
      for (std::size_t k = 0; k < s.tails.size(); ++k) {
        int u = s.tails[k];
        if (d[u] >= 0) d[s.heads[k]] = std::max(d[s.heads[k]], d[u] + len[k]);
      }
      for (; p < s.pairs.size() && s.pairs[p].first == static_cast<int>(a); ++p)
        pattern[p] = min_shift(d[s.local_fixed[s.pairs[p].second]], grid.x, cap);
    }
    ++hist[pattern];
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
      if (++c[k] < grid.M) break;
      c[k] = 0;
    }
  }
  for (auto& [pat, n] : hist) {
    out.d.push_back(pat);
    out.count.push_back(n);
  }
  return out;
}

std::uint64_t count_at(const BagSystem& s, const Patterns& pats, const std::vector<int>& e) {
  std::uint64_t total = 0;
  for (std::size_t q = 0; q < pats.d.size(); ++q) {
    bool ok = true;
    for (std::size_t p = 0; p < s.pairs.size() && ok; ++p)
      ok = e[s.pairs[p].first] - e[s.pairs[p].second] >= pats.d[q][p];
    if (ok) total += pats.count[q];
  }
  return total;
}

}  // namespace

std::uint64_t bag_cell_count(const DecompositionContext& ctx, int bag, const std::map<int, double>& z,
                             GridSpec grid) {
  if (!(grid.x > 0) || grid.M < 1) throw InputError("grid needs x > 0 and M >= 1");
  BagSystem s = build_system(ctx, bag);
  std::vector<int> e(s.fixed.size());
  for (std::size_t k = 0; k < s.fixed.size(); ++k) {
    auto it = z.find(s.fixed[k]);
    if (it == z.end()) throw InputError("missing shift for vertex " + std::to_string(ctx.graph.label(s.fixed[k])));
    double scaled = it->second * grid.M / grid.x;
    e[k] = static_cast<int>(s.source[k] ? std::ceil(scaled) : std::floor(scaled));
  }
  int lo = 0, hi = 0;
  for (int v : e) lo = std::min(lo, v), hi = std::max(hi, v);
  Patterns pats = count_patterns(bag, s, grid, hi - lo + 1, UINT64_MAX);
  return count_at(s, pats, e);
}

StaircaseTable bag_staircase(const DecompositionContext& ctx, int bag, GridSpec grid, int source_shift,
                             const std::map<int, int>& fixed, std::uint64_t max_cells, bool parallel,
                             BagTableStats* stats) {
  BagSystem s = build_system(ctx, bag);
  int cap = grid.M + source_shift + 1;
  Patterns pats = count_patterns(bag, s, grid, cap, max_cells);

  StaircaseTable t;
  t.grid = grid;
  t.cumulative = true;
  std::vector<int> order(s.fixed.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return s.fixed[a] < s.fixed[b]; });
  std::vector<int> slot;  // table position -> fixed index
  std::vector<int> base(s.fixed.size(), 0);
  for (int k : order) {
    int v = s.fixed[k];
    auto it = fixed.find(v);
    int shift = s.source[k] ? source_shift : 0;
    if (it != fixed.end()) {
      base[k] = it->second + shift;
      continue;
    }
    base[k] = shift;
    t.vars.push_back(v);
    t.is_source.push_back(s.source[k]);
    t.extent.push_back(grid.M + 1);
    slot.push_back(k);
  }
  std::uint64_t entries = 1;
  for (int ext : t.extent) {
    entries *= static_cast<std::uint64_t>(ext);
    if (entries > max_cells) throw BudgetError("bag " + std::to_string(bag) + " table exceeds budget");
  }
  if (pats.d.size() > 0 && entries > max_cells / pats.d.size())
    throw BudgetError("bag " + std::to_string(bag) + " table evaluation exceeds budget (" +
                      std::to_string(entries) + " points x " + std::to_string(pats.d.size()) + " patterns)");
  t.values.assign(entries, 0.0);
  const double denom = static_cast<double>(pats.cells);
  const std::int64_t total = static_cast<std::int64_t>(entries);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::vector<int> e = base;
    std::int64_t rest = idx;
    for (int k = static_cast<int>(slot.size()) - 1; k >= 0; --k) {
      e[slot[k]] += static_cast<int>(rest % (grid.M + 1));
      rest /= grid.M + 1;
    }
    t.values[idx] = static_cast<double>(count_at(s, pats, e)) / denom;
  }
  if (stats) {
    stats->cells = pats.cells;
    stats->patterns = pats.d.size();
    stats->entries = entries;
  }
  return t;
}

StaircaseTable merge_subtree(const DecompositionContext& ctx, int bag, const StaircaseTable& bag_table,
                             const std::vector<const StaircaseTable*>& child_tables,
                             std::uint64_t max_entries, bool parallel) {
  const GridSpec grid = bag_table.grid;
  auto freeze = [&](StaircaseTable t) {
    for (int v : ctx.frozen_sources[bag]) t = fix_var(t, v, grid.M);
    for (int v : ctx.frozen_terminals[bag]) t = fix_var(t, v, 0);
    return t;
  };
  StaircaseTable G = freeze(bag_table);
  std::vector<StaircaseTable> kids;
  for (auto* c : child_tables) kids.push_back(freeze(*c));
  StaircaseTable U = StaircaseTable::scalar(1.0, grid);
  if (!kids.empty()) {
    std::vector<const StaircaseTable*> ptr;
    for (auto& k : kids) ptr.push_back(&k);
    U = contract(ptr, {}, max_entries, parallel);
  }
  for (int v : ctx.J[bag])
    if (G.position(v) < 0 || U.position(v) < 0)
      throw InvariantError("glue vertex " + std::to_string(v) + " missing from an operand table");
  for (int v : ctx.Sp[bag]) G = backward_difference(G, v);
  for (int v : ctx.Tp[bag]) U = backward_difference(U, v);
  StaircaseTable r = contract({&G, &U}, ctx.J[bag], max_entries, parallel);
  r.grid = grid;
  return r;
}

ApproxResult approx_prepared(const Prepared& p, double x, std::int64_t M, const ApproxOptions& opt) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  const DecompositionContext& ctx = p.ctx;
  if (M < 1 || M > INT_MAX) throw InputError("grid resolution out of range");
  ApproxResult res;
  res.M = M;
  res.original_width = p.original_width;
  res.separated_width = p.separated_width;
  res.separated_n = p.separated_n;
  if (ctx.graph.m() > 0 && ctx.graph.family() != DistKind::Uniform)
    throw InputError("distribution mismatch: the grid algorithm needs uniform edge lengths");
  if (x < 0) {
    res.value = 0;
    return res;
  }
  GridSpec grid{static_cast<int>(M), x};
  std::vector<StaircaseTable> done(ctx.bags());
  for (int i : ctx.postorder) {
    auto tb = clock::now();
    std::map<int, int> fixed;
    for (int v : ctx.frozen_sources[i]) fixed[v] = grid.M;
    for (int v : ctx.frozen_terminals[i]) fixed[v] = 0;
    BagTableStats st;
    StaircaseTable G = bag_staircase(ctx, i, grid, 1, fixed, opt.budgets.max_cells, opt.parallel, &st);
    std::vector<const StaircaseTable*> kids;
    for (int j : ctx.children[i]) kids.push_back(&done[j]);
    done[i] = merge_subtree(ctx, i, G, kids, opt.budgets.max_cells, opt.parallel);
    for (int j : ctx.children[i]) done[j] = StaircaseTable{};
    BagReport br;
    br.bag = i;
    br.edges = static_cast<int>(ctx.bag_edges[i].size());
    for (int e : ctx.bag_edges[i])
      if (ctx.graph.edge(e).dist.kind == DistKind::Uniform) ++br.uniform_edges;
    br.cells = st.cells;
    br.patterns = st.patterns;
    br.entries = st.entries;
    br.ms = std::chrono::duration<double, std::milli>(clock::now() - tb).count();
    res.cells_used += st.cells;
    res.per_bag.push_back(br);
  }
  const StaircaseTable& root = done[ctx.td.root];
  if (!root.vars.empty()) throw InvariantError("root table still has free coordinates");
  res.value = root.values.at(0);
  std::sort(res.per_bag.begin(), res.per_bag.end(), [](auto& a, auto& b) { return a.bag < b.bag; });
  res.elapsed_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  return res;
}

ApproxResult approx_dag(const Dag& g, const std::optional<TreeDecomposition>& td, double x,
                        const ApproxOptions& opt) {
  if (g.m() == 0) throw InputError("graph has no edges");
  if (g.family() != DistKind::Uniform)
    throw InputError("distribution mismatch: the grid algorithm needs uniform edge lengths");
  Prepared p = prepare(g, td);
  std::int64_t M = opt.grid_m ? *opt.grid_m : choose_M(p.original_width, g.n(), g.m(), opt.epsilon);
  return approx_prepared(p, x, M, opt);
}

}  // namespace stochlp
