#include "stochlp/bag_symbolic.hpp"

#include <algorithm>
#include <functional>

namespace stochlp {

using sym::Chain;
using sym::Factor;
using sym::Monomial;
using sym::Sum;

void SymStats::see(const Sum& s) {
  peak_regions = std::max(peak_regions, s.regions());
  peak_terms = std::max(peak_terms, s.terms());
}

Sum edge_cdf(int u, int v, const DistSpec& d, const EdgeModel& model) {
  if (u == v) throw InvariantError("edge factor with identical endpoints");
  Chain guard{v, u};
  if (d.kind == DistKind::Zero) return Sum::guard(guard);
  if (model.taylor) {
    Sum s;
    for (int deg = 0; deg < static_cast<int>(model.series.size()); ++deg) {
      if (model.series[deg] == 0) continue;
      // (z_u - z_v)^deg by the binomial theorem.
      mpz_class binom = 1;
      for (int j = 0; j <= deg; ++j) {
        if (j > 0) binom = binom * (deg - j + 1) / j;
        int pu = j, pv = deg - j;
        Monomial m;
        if (pu) m.push_back({u, pu, 0});
        if (pv) m.push_back({v, pv, 0});
        std::sort(m.begin(), m.end());
        mpq_class c = model.series[deg] * mpq_class(binom);
        if (pv % 2) c = -c;
        s.add(guard, m, c);
      }
    }
    return s;
  }
  if (d.kind != DistKind::Exponential)
    throw InputError("exact symbolic solver needs exponential edge lengths");
  Sum s = Sum::guard(guard);
  Monomial m{{u, 0, -1}, {v, 0, 1}};
  std::sort(m.begin(), m.end());
  s.add(guard, m, -1);
  return s;
}

namespace {

struct LocalEdge {
  int tail, head;
  DistSpec dist;
};

Sum maybe_truncate(const Sum& s, const EdgeModel& model) {
  return model.taylor ? sym::truncate_total_degree(s, model.tau) : s;
}

}  // namespace

Sum bag_phi(const DecompositionContext& ctx, int bag, const EdgeModel& model, const Budgets& budgets,
            SymStats* stats) {
  const Dag& g = ctx.graph;
  const int N = g.n();
  std::vector<char> is_source(N, 0), is_internal(N, 0), through(N, 0);
  for (int s : ctx.S[bag]) is_source[s] = 1;
  for (int w : ctx.I[bag]) is_internal[w] = 1;
  for (int e : ctx.bag_edges[bag])
    if (is_source[g.edge(e).v]) through[g.edge(e).v] = 1;
  // A source with in-edges inside the bag gets an integrated copy N+s that
  // carries its out-edges and receives those in-edges; z_copy < z_s.
  auto hat = [&](int v) { return through[v] ? N + v : v; };
  std::vector<LocalEdge> edges;
  for (int e : ctx.bag_edges[bag]) {
    const Edge& ed = g.edge(e);
    edges.push_back({hat(ed.u), hat(ed.v), ed.dist});
  }
  // Owners: vertices with a factor. Integrated: internals and copies.
  std::vector<int> owners, integrated;
  for (int s : ctx.S[bag]) {
    owners.push_back(hat(s));
    if (through[s]) integrated.push_back(N + s);
  }
  for (int w : ctx.I[bag]) {
    owners.push_back(w);
    integrated.push_back(w);
  }
  auto order_key = [&](int v) { return v >= N ? v - N : v; };
  std::sort(owners.begin(), owners.end(), [&](int a, int b) { return order_key(a) > order_key(b); });
  std::vector<char> integ(2 * N, 0);
  for (int v : integrated) integ[v] = 1;
  std::vector<int> zero_next(2 * N, -1);
  std::vector<char> has_random(2 * N, 0);
  for (const auto& e : edges) {
    if (e.dist.kind == DistKind::Zero) {
      if (zero_next[e.tail] >= 0) throw InvariantError("vertex with two zero-length out-edges");
      zero_next[e.tail] = e.head;
    } else {
      has_random[e.tail] = 1;
    }
  }
  // Integrated vertices with a zero out-edge: the delta part of their density
  // is a substitution. Without other out-edges only the delta part remains.
  std::vector<int> optional, forced;
  for (int w : integrated)
    if (zero_next[w] >= 0) (has_random[w] ? optional : forced).push_back(w);
  if (optional.size() > 20) throw BudgetError("too many zero-length branches in one bag");

  Sum total;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << optional.size()); ++mask) {
    std::vector<char> delta(2 * N, 0);
    for (int w : forced) delta[w] = 1;
    for (std::size_t k = 0; k < optional.size(); ++k)
      if (mask >> k & 1) delta[optional[k]] = 1;
    std::function<int(int)> rep = [&](int v) { return delta[v] ? rep(zero_next[v]) : v; };

    struct Piece {
      Sum sum;
      std::set<int> vars;
    };
    std::vector<Piece> pieces;
    for (int u : owners) {
      Sum f = Sum::constant(1);
      for (const auto& e : edges) {
        if (e.tail != u) continue;
        if (delta[u] && e.dist.kind == DistKind::Zero) continue;
        f = sym::multiply(f, edge_cdf(rep(u), rep(e.head), e.dist, model), budgets);
      }
      if (integ[u] && !delta[u]) f = sym::differentiate(f, u);
      if (u >= N) f = sym::multiply(f, Sum::guard({rep(u), u - N}), budgets);
      pieces.push_back({f, f.free_vars()});
    }
    Sum acc = Sum::constant(1);
    std::vector<char> done(2 * N, 0);
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      acc = sym::multiply(acc, pieces[k].sum, budgets);
      if (stats) stats->see(acc);
      for (int w : integrated) {
        if (delta[w] || done[w]) continue;
        bool later = false;
        for (std::size_t q = k + 1; q < pieces.size() && !later; ++q) later = pieces[q].vars.count(w) > 0;
        if (later) continue;
        acc = maybe_truncate(sym::integrate_out(acc, w, budgets), model);
        done[w] = 1;
        if (stats) stats->see(acc);
      }
    }
    total += acc;
  }
  total = maybe_truncate(total, model);
  if (stats) {
    stats->see(total);
    if (static_cast<int>(stats->bag_regions.size()) <= bag) stats->bag_regions.resize(bag + 1, 0);
    stats->bag_regions[bag] = total.regions();
  }
  return total;
}

Sum bag_density_exp(const DecompositionContext& ctx, int bag, const Budgets& budgets) {
  const Dag& g = ctx.graph;
  for (int s : ctx.S[bag])
    for (int e : ctx.bag_edges[bag])
      if (g.edge(e).u == s && g.edge(e).dist.kind == DistKind::Zero)
        throw InputError("density of a source with a zero-length out-edge is singular");
  Sum phi = bag_phi(ctx, bag, EdgeModel{}, budgets);
  for (int s : ctx.S[bag]) phi = sym::differentiate(phi, s);
  return phi;
}

Sum merge_phi(const DecompositionContext& ctx, int bag, const Sum& bag_term,
              const std::vector<const Sum*>& children, const EdgeModel& model, const Budgets& budgets,
              SymStats* stats) {
  Sum U = Sum::constant(1);
  for (const Sum* c : children) {
    U = sym::multiply(U, *c, budgets);
    if (stats) stats->see(U);
  }
  for (int v : ctx.J[bag]) U = sym::differentiate(U, v);
  Sum P = sym::multiply(bag_term, U, budgets);
  if (ctx.Sp[bag].size() % 2) P = P.scaled(-1);
  if (stats) stats->see(P);
  for (int v : ctx.J[bag]) {
    if (model.taylor) P = sym::multiply(P, Sum::guard({sym::kZero, v, sym::kX}), budgets);
    P = maybe_truncate(sym::integrate_out(P, v, budgets), model);
    if (stats) stats->see(P);
  }
  for (int v : ctx.frozen_sources[bag]) P = sym::substitute(P, v, sym::kX);
  for (int v : ctx.frozen_terminals[bag]) P = sym::substitute(P, v, sym::kZero);
  if (!model.taylor) {
    // Exponent bounds: alpha <= |V(D_i)|, |beta| <= |E(D_i)|.
    int edges_below = 0;
    std::function<void(int)> count = [&](int i) {
      edges_below += static_cast<int>(ctx.bag_edges[i].size());
      for (int j : ctx.children[i]) count(j);
    };
    count(bag);
    auto vars = P.free_vars();
    vars.insert(sym::kX);
    for (int v : vars)
      if (P.max_alpha(v) > ctx.subtree_vertices[bag] || P.max_abs_beta(v) > edges_below)
        throw InvariantError("exponent bound violated at bag " + std::to_string(bag));
  }
  return P;
}

Sum sweep(const DecompositionContext& ctx, const EdgeModel& model, const Budgets& budgets, SymStats* stats) {
  std::vector<Sum> done(ctx.bags());
  for (int i : ctx.postorder) {
    Sum term = bag_phi(ctx, i, model, budgets, stats);
    std::vector<const Sum*> kids;
    for (int j : ctx.children[i]) kids.push_back(&done[j]);
    done[i] = merge_phi(ctx, i, term, kids, model, budgets, stats);
    for (int j : ctx.children[i]) done[j] = Sum{};
  }
  Sum root = done[ctx.td.root];
  if (!root.free_vars().empty()) throw InvariantError("root term still depends on shift variables");
  return root;
}

}  // namespace stochlp
