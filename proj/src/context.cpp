#include "stochlp/errors.hpp"
#include "stochlp/tree_decomposition.hpp"

#include <algorithm>
#include <functional>

namespace stochlp {

namespace {

std::vector<int> minus(const std::vector<int>& a, const std::vector<char>& drop) {
  std::vector<int> r;
  for (int v : a)
    if (!drop[v]) r.push_back(v);
  return r;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

std::vector<int> unite(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

std::string vname(const Dag& g, int v) { return std::to_string(g.label(v)); }

}  // namespace

DecompositionContext build_context(const Dag& g, const TreeDecomposition& td) {
  DecompositionContext c;
  c.graph = g;
  c.td = td;
  int b = td.size();
  c.children = td.children();
  c.parent.assign(b, -1);
  for (int i = 0; i < b; ++i)
    for (int j : c.children[i]) c.parent[j] = i;
  for (int i = 0; i < b; ++i)
    if (c.children[i].size() > 2) throw InvariantError("bag " + std::to_string(i) + " has more than two children");
  std::function<void(int)> post = [&](int i) {
    for (int j : c.children[i]) post(j);
    c.postorder.push_back(i);
  };
  post(td.root);

  c.in_bag.assign(b, std::vector<char>(g.n(), 0));
  for (int i = 0; i < b; ++i)
    for (int v : td.bags[i]) c.in_bag[i][v] = 1;

  auto owner = edge_owners(g, td);
  c.bag_edges.assign(b, {});
  for (int e = 0; e < g.m(); ++e) c.bag_edges[owner[e]].push_back(e);

  c.S.resize(b), c.T.resize(b), c.I.resize(b);
  c.SU.resize(b), c.TU.resize(b), c.IU.resize(b);
  c.SD.resize(b), c.TD.resize(b), c.ID.resize(b);
  c.Sp.resize(b), c.Tp.resize(b), c.J.resize(b);
  c.frozen_sources.resize(b), c.frozen_terminals.resize(b);
  c.subtree_vertices.assign(b, 0);

  std::vector<std::vector<int>> d_edges(b), d_vertices(b);
  for (int i : c.postorder) {
    std::vector<int> u_edges, u_vertices;
    for (int j : c.children[i]) {
      u_edges.insert(u_edges.end(), d_edges[j].begin(), d_edges[j].end());
      u_vertices = unite(u_vertices, d_vertices[j]);
    }
    std::sort(u_edges.begin(), u_edges.end());
    d_edges[i] = u_edges;
    d_edges[i].insert(d_edges[i].end(), c.bag_edges[i].begin(), c.bag_edges[i].end());
    std::sort(d_edges[i].begin(), d_edges[i].end());
    d_vertices[i] = unite(u_vertices, td.bags[i]);
    c.subtree_vertices[i] = static_cast<int>(d_vertices[i].size());

    auto gi = classify_subgraph_vertices(g, c.bag_edges[i]);
    auto ui = classify_subgraph_vertices(g, u_edges);
    auto di = classify_subgraph_vertices(g, d_edges[i]);
    c.S[i] = gi.sources, c.T[i] = gi.terminals, c.I[i] = gi.internals;
    c.SU[i] = ui.sources, c.TU[i] = ui.terminals, c.IU[i] = ui.internals;
    c.SD[i] = di.sources, c.TD[i] = di.terminals, c.ID[i] = di.internals;

    std::vector<char> in_h(g.n(), 0);
    if (c.parent[i] >= 0) in_h = c.in_bag[c.parent[i]];
    c.Sp[i] = minus(intersect(c.S[i], c.TU[i]), in_h);
    c.Tp[i] = minus(intersect(c.T[i], c.SU[i]), in_h);
    c.J[i] = unite(c.Sp[i], c.Tp[i]);
    c.frozen_sources[i] = minus(c.SD[i], in_h);
    c.frozen_terminals[i] = minus(c.TD[i], in_h);
  }

  auto problems = check_context(c);
  if (!problems.empty()) {
    std::string msg = "decomposition invariant violated: " + problems[0];
    for (std::size_t k = 1; k < problems.size() && k < 5; ++k) msg += "; " + problems[k];
    throw InvariantError(msg);
  }
  return c;
}

std::vector<std::string> check_context(const DecompositionContext& c) {
  std::vector<std::string> bad;
  const Dag& g = c.graph;
  int b = c.bags();

  std::vector<int> times(g.m(), 0);
  for (int i = 0; i < b; ++i)
    for (int e : c.bag_edges[i]) {
      ++times[e];
      const Edge& ed = g.edge(e);
      if (!c.in_bag[i][ed.u] || !c.in_bag[i][ed.v])
        bad.push_back("edge assigned to a bag missing an endpoint");
      for (int h = c.parent[i]; h >= 0; h = c.parent[h])
        if (c.in_bag[h][ed.u] && c.in_bag[h][ed.v])
          bad.push_back("edge not assigned ancestor-first");
    }
  for (int e = 0; e < g.m(); ++e)
    if (times[e] != 1)
      bad.push_back("edge (" + vname(g, g.edge(e).u) + "," + vname(g, g.edge(e).v) +
                    ") is in " + std::to_string(times[e]) + " bag-subgraphs");

  // Subtree membership, used by the separation and successor checks.
  std::vector<std::vector<char>> in_sub(b, std::vector<char>(g.n(), 0));
  std::vector<std::vector<char>> in_strict(b, std::vector<char>(g.n(), 0));
  for (int i : c.postorder) {
    for (int j : c.children[i])
      for (int v = 0; v < g.n(); ++v)
        if (in_sub[j][v]) in_strict[i][v] = 1;
    for (int v = 0; v < g.n(); ++v) in_sub[i][v] = in_strict[i][v] || c.in_bag[i][v];
  }
  // V(U_i): vertices touched by edges of the child subtrees.
  std::vector<std::vector<char>> in_u(b, std::vector<char>(g.n(), 0));
  std::vector<std::vector<char>> in_d(b, std::vector<char>(g.n(), 0));
  for (int i : c.postorder) {
    for (int j : c.children[i])
      for (int v = 0; v < g.n(); ++v)
        if (in_d[j][v]) in_u[i][v] = 1;
    in_d[i] = in_u[i];
    for (int e : c.bag_edges[i]) in_d[i][g.edge(e).u] = in_d[i][g.edge(e).v] = 1;
  }
  std::vector<char> d_edge_mark;

  for (int i = 0; i < b; ++i) {
    std::string at = " at bag " + std::to_string(i);
    if (!intersect(c.S[i], c.T[i]).empty()) bad.push_back("S_i and T_i intersect" + at);
    for (int u : c.Tp[i])
      for (int e : g.out(u)) {
        int w = g.edge(e).v;
        if (c.in_bag[i][w] && !in_u[i][w])
          bad.push_back("vertex " + vname(g, u) + " in T'_i has a successor in B_i outside U_i" + at);
      }
    auto cover = unite(c.I[i], c.IU[i]);
    std::vector<char> drop(g.n(), 0);
    for (int v : cover) drop[v] = 1;
    if (minus(c.ID[i], drop) != c.J[i]) bad.push_back("J_i differs from I(D_i) minus I(G_i), I(U_i)" + at);

    int h = c.parent[i];
    if (h >= 0) {
      for (const Edge& e : g.edges()) {
        auto crosses = [&](int x, int y) {
          return c.in_bag[h][x] && !c.in_bag[i][x] && in_strict[i][y] && !c.in_bag[i][y];
        };
        if (crosses(e.u, e.v) || crosses(e.v, e.u))
          bad.push_back("edge joins parent-only and descendant-only vertices" + at);
      }
    }
    if (c.children[i].size() == 2) {
      int l = c.children[i][0], r = c.children[i][1];
      if (!intersect(c.SD[l], c.TD[r]).empty() || !intersect(c.TD[l], c.SD[r]).empty())
        bad.push_back("children share a source/terminal across sides" + at);
    }
    for (int v : intersect(c.S[i], c.SU[i]))
      if (!c.in_parent(i, v)) bad.push_back("vertex " + vname(g, v) + " in S_i and S(U_i)" + at);
    for (int v : intersect(c.T[i], c.TU[i]))
      if (!c.in_parent(i, v)) bad.push_back("vertex " + vname(g, v) + " in T_i and T(U_i)" + at);

    // Frozen vertices must be final: no edge outside D_i.
    d_edge_mark.assign(g.m(), 0);
    std::function<void(int)> mark = [&](int x) {
      for (int e : c.bag_edges[x]) d_edge_mark[e] = 1;
      for (int y : c.children[x]) mark(y);
    };
    mark(i);
    auto frozen = unite(c.frozen_sources[i], c.frozen_terminals[i]);
    for (int v : frozen) {
      for (int e : g.out(v))
        if (!d_edge_mark[e]) bad.push_back("frozen vertex " + vname(g, v) + " has an edge outside D_i" + at);
      for (int e : g.in(v))
        if (!d_edge_mark[e]) bad.push_back("frozen vertex " + vname(g, v) + " has an edge outside D_i" + at);
    }
  }
  return bad;
}

int shared_boundary_overlaps(const DecompositionContext& c) {
  int count = 0;
  for (int i = 0; i < c.bags(); ++i) {
    count += static_cast<int>(intersect(c.S[i], c.SU[i]).size());
    count += static_cast<int>(intersect(c.T[i], c.TU[i]).size());
  }
  return count;
}

Prepared prepare(const Dag& g, const std::optional<TreeDecomposition>& given) {
  TreeDecomposition td = given ? *given : heuristic_td(g);
  auto check = validate_td(g, td);
  if (!check.ok)
    throw InputError("invalid tree decomposition (condition " + std::to_string(check.condition) +
                     "): " + check.message);
  Prepared p;
  p.original_width = td.width();
  auto bin = binarize_td(td, g.n());
  auto sep = separate(g, bin);
  p.ctx = build_context(sep.graph, sep.td);
  p.separated_width = sep.td.width();
  p.separated_n = sep.graph.n();
  p.original = sep.original;
  return p;
}

}  // namespace stochlp
