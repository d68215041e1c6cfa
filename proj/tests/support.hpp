#pragma once

#include "stochlp/fptas.hpp"
#include "stochlp/graph.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

using namespace stochlp;

// Canonical n/d; gmp arithmetic needs canonical operands.
inline mpq_class frac(long n, long d) {
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

inline Dag single_edge(DistSpec d) { return Dag(2, {{0, 1, d}}); }

inline Dag chain(int edges, DistSpec d) {
  std::vector<Edge> es;
  for (int v = 0; v < edges; ++v) es.push_back({v, v + 1, d});
  return Dag(edges + 1, es);
}

inline Dag diamond(DistSpec d) { return Dag(4, {{0, 1, d}, {0, 2, d}, {1, 3, d}, {2, 3, d}}); }

// Random DAG on n vertices (edges u<v with probability p), no isolated
// vertices, at most max_m edges. Scales drawn from 1..max_a for uniform.
inline Dag random_dag(std::mt19937_64& rng, int n, double p, int max_m, DistKind kind, int max_a = 1) {
  for (;;) {
    std::vector<Edge> es;
    std::uniform_real_distribution<double> coin(0, 1);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (coin(rng) < p) {
          DistSpec d = kind == DistKind::Exponential ? DistSpec::exponential()
                                                     : DistSpec::uniform(1 + static_cast<int>(rng() % max_a));
          es.push_back({u, v, d});
        }
    if (es.empty() || static_cast<int>(es.size()) > max_m) continue;
    std::vector<char> touched(n, 0);
    for (const Edge& e : es) touched[e.u] = touched[e.v] = 1;
    if (std::count(touched.begin(), touched.end(), 0)) continue;
    return Dag(n, es);
  }
}

// Copy of g relabelled along a random topological order; pos maps old ids
// to new ones.
inline Dag random_relabel(std::mt19937_64& rng, const Dag& g, std::vector<int>& pos) {
  std::vector<int> indeg(g.n()), ready;
  pos.assign(g.n(), 0);
  for (const Edge& e : g.edges()) ++indeg[e.v];
  for (int v = 0; v < g.n(); ++v)
    if (!indeg[v]) ready.push_back(v);
  for (int k = 0; k < g.n(); ++k) {
    std::size_t pick = rng() % ready.size();
    int v = ready[pick];
    ready.erase(ready.begin() + static_cast<long>(pick));
    pos[v] = k;
    for (int e : g.out(v))
      if (--indeg[g.edge(e).v] == 0) ready.push_back(g.edge(e).v);
  }
  std::vector<Edge> es;
  for (const Edge& e : g.edges()) es.push_back({pos[e.u], pos[e.v], e.dist});
  return Dag(g.n(), es);
}

// Independent grid semantics: enumerate all global cells of the uniform
// edges; a cell counts when integer shifts exist with global sources at M,
// global terminals at 0, and every bag's source-to-terminal constraint
// (g_s + 1) - g_t >= ceil(K / x) holding (K = longest corner path in grid
// units). Feasibility by Bellman-Ford on the difference constraints.
inline double brute_grid_value(const DecompositionContext& c, int M, double x) {
  const Dag& g = c.graph;
  std::vector<int> slot(g.m(), -1);
  int uniform = 0;
  for (int e = 0; e < g.m(); ++e)
    if (g.edge(e).dist.kind == DistKind::Uniform) slot[e] = uniform++;
  std::int64_t cells = 1;
  for (int k = 0; k < uniform; ++k) cells *= M;
  std::vector<int> cc(uniform, 0);
  std::int64_t feasible = 0;
  struct Con {
    int a, b;
    std::int64_t w;  // g_b <= g_a + w
  };
  const int Z = g.n();
  for (std::int64_t cell = 0; cell < cells; ++cell) {
    std::vector<Con> cons;
    for (int i = 0; i < c.bags(); ++i) {
      std::vector<char> src(g.n(), 0), term(g.n(), 0);
      for (int v : c.S[i]) src[v] = 1;
      for (int v : c.T[i]) term[v] = 1;
      std::vector<int> es = c.bag_edges[i];
      std::sort(es.begin(), es.end(), [&](int p, int q) { return g.edge(p).u < g.edge(q).u; });
      for (int a : c.S[i]) {
        std::vector<std::int64_t> d(g.n(), -1);
        d[a] = 0;
        for (int e : es) {
          int u = g.edge(e).u;
          if (d[u] < 0) continue;
          std::int64_t len = slot[e] < 0 ? 0 : static_cast<std::int64_t>(g.edge(e).dist.a) * cc[slot[e]];
          d[g.edge(e).v] = std::max(d[g.edge(e).v], d[u] + len);
        }
        for (int b : c.T[i]) {
          if (d[b] < 0) continue;
          std::int64_t need = 0;
          while (static_cast<double>(d[b]) > need * x) ++need;
          cons.push_back({a, b, 1 - need});
        }
      }
    }
    for (int v = 0; v < g.n(); ++v) {
      bool gs = g.in(v).empty() && !g.out(v).empty();
      bool gt = g.out(v).empty() && !g.in(v).empty();
      cons.push_back({Z, v, gt ? 0 : M});
      cons.push_back({v, Z, gs ? -M : 0});
    }
    std::vector<std::int64_t> dist(g.n() + 1, 0);
    bool changed = true;
    for (int it = 0; changed && it <= g.n() + 2; ++it) {
      changed = false;
      for (const Con& k : cons)
        if (dist[k.a] + k.w < dist[k.b]) {
          dist[k.b] = dist[k.a] + k.w;
          changed = true;
        }
    }
    if (!changed) ++feasible;
    for (int k = uniform - 1; k >= 0; --k) {
      if (++cc[k] < M) break;
      cc[k] = 0;
    }
  }
  return static_cast<double>(feasible) / static_cast<double>(cells);
}

}  // namespace testing_support
