#include "stochlp/graph.hpp"

#include "stochlp/errors.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

namespace stochlp {

std::string to_string(const DistSpec& d) {
  switch (d.kind) {
    case DistKind::Uniform: return "uniform " + std::to_string(d.a);
    case DistKind::Exponential: return "exp";
    case DistKind::Oracle: return "oracle " + d.oracle;
    case DistKind::Zero: return "zero";
  }
  return "?";
}

Dag::Dag(int n, std::vector<Edge> edges, std::vector<int> labels) : n_(n) {
  if (n < 0) throw InputError("negative vertex count");
  if (labels.empty()) {
    labels.resize(n);
    for (int i = 0; i < n; ++i) labels[i] = i + 1;
  }
  if (static_cast<int>(labels.size()) != n) throw InputError("label map size mismatch");
  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw InputError("edge endpoint out of range");
    if (e.u == e.v) throw InputError("self loop at vertex " + std::to_string(labels[e.u]));
    if (!seen.insert({e.u, e.v}).second)
      throw InputError("duplicate edge " + std::to_string(labels[e.u]) + " " +
                       std::to_string(labels[e.v]));
    if (e.dist.kind == DistKind::Uniform && e.dist.a < 1)
      throw InputError("non-positive uniform scale");
    succ[e.u].push_back(e.v);
    ++indeg[e.v];
  }
  // Kahn with a min-heap keeps an already topological labelling unchanged.
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<int> order, pos(n, -1);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    pos[v] = static_cast<int>(order.size());
    order.push_back(v);
    for (int w : succ[v])
      if (--indeg[w] == 0) ready.push(w);
  }
  if (static_cast<int>(order.size()) != n) throw InputError("cycle detected");
  labels_.resize(n);
  for (int i = 0; i < n; ++i) labels_[i] = labels[order[i]];
  edges_ = std::move(edges);
  out_.assign(n, {});
  in_.assign(n, {});
  for (int i = 0; i < m(); ++i) {
    edges_[i].u = pos[edges_[i].u];
    edges_[i].v = pos[edges_[i].v];
    out_[edges_[i].u].push_back(i);
    in_[edges_[i].v].push_back(i);
  }
  auto by_head = [&](int a, int b) { return edges_[a].v < edges_[b].v; };
  auto by_tail = [&](int a, int b) { return edges_[a].u < edges_[b].u; };
  for (int v = 0; v < n; ++v) {
    std::sort(out_[v].begin(), out_[v].end(), by_head);
    std::sort(in_[v].begin(), in_[v].end(), by_tail);
  }
}

int Dag::find_edge(int u, int v) const {
  for (int e : out_[u])
    if (edges_[e].v == v) return e;
  return -1;
}

std::vector<int> Dag::sources() const {
  std::vector<int> r;
  for (int v = 0; v < n_; ++v)
    if (in_[v].empty() && !out_[v].empty()) r.push_back(v);
  return r;
}

std::vector<int> Dag::terminals() const {
  std::vector<int> r;
  for (int v = 0; v < n_; ++v)
    if (out_[v].empty() && !in_[v].empty()) r.push_back(v);
  return r;
}

std::vector<int> Dag::isolated() const {
  std::vector<int> r;
  for (int v = 0; v < n_; ++v)
    if (out_[v].empty() && in_[v].empty()) r.push_back(v);
  return r;
}

DistKind Dag::family() const {
  bool have = false;
  DistSpec first;
  for (const Edge& e : edges_) {
    if (e.dist.kind == DistKind::Zero) continue;
    if (!have) {
      first = e.dist;
      have = true;
      continue;
    }
    if (e.dist.kind != first.kind || (e.dist.kind == DistKind::Oracle && e.dist.oracle != first.oracle))
      throw InputError("distribution mismatch: mixed edge distributions");
  }
  if (!have) throw InputError("graph has no random edges");
  return first.kind;
}

Dag parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n = -1, m = -1;
  std::vector<Edge> edges;
  auto fail = [&](const std::string& why) {
    throw InputError("line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto to_int = [&](const std::string& s) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(s, &used);
      } catch (...) {
        fail("malformed integer '" + s + "'");
      }
      if (used != s.size()) fail("malformed integer '" + s + "'");
      return v;
    };
    if (n < 0) {
      if (tok.size() != 2) fail("expected header 'n m'");
      n = to_int(tok[0]);
      m = to_int(tok[1]);
      if (n < 1 || m < 0) fail("bad header");
      continue;
    }
    if (tok.size() < 3) fail("expected 'u v dist'");
    int u = to_int(tok[0]), v = to_int(tok[1]);
    if (u < 1 || u > n || v < 1 || v > n) fail("vertex out of range");
    DistSpec d;
    if (tok[2] == "uniform") {
      if (tok.size() != 4) fail("expected 'uniform <a>'");
      d = DistSpec::uniform(to_int(tok[3]));
      if (d.a < 1) fail("non-positive uniform scale");
    } else if (tok[2] == "exp") {
      if (tok.size() != 3) fail("trailing tokens after 'exp'");
      d = DistSpec::exponential();
    } else if (tok[2] == "oracle") {
      if (tok.size() != 4) fail("expected 'oracle <name>'");
      d = DistSpec::named(tok[3]);
    } else {
      fail("unknown distribution tag '" + tok[2] + "'");
    }
    edges.push_back({u - 1, v - 1, d});
  }
  if (n < 0) throw InputError("empty graph file");
  if (static_cast<int>(edges.size()) != m)
    throw InputError("header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  return Dag(n, std::move(edges));
}

std::string write_graph(const Dag& g) {
  // Written in original labels so that a companion .td stays valid.
  std::ostringstream os;
  os << g.n() << ' ' << g.m() << '\n';
  for (const Edge& e : g.edges())
    os << g.label(e.u) << ' ' << g.label(e.v) << ' ' << to_string(e.dist) << '\n';
  return os.str();
}

double static_longest_path(const Dag& g, const std::vector<int>& edge_ids,
                           const std::vector<double>& len,
                           const std::vector<char>& is_source,
                           const std::vector<char>& is_terminal,
                           const std::vector<double>& src_offset,
                           const std::vector<double>& term_offset) {
  // best[v] = longest path from v to a terminal, including the terminal offset.
  std::vector<std::vector<std::pair<int, double>>> adj(g.n());
  for (std::size_t k = 0; k < edge_ids.size(); ++k) {
    const Edge& e = g.edge(edge_ids[k]);
    adj[e.u].push_back({e.v, len[k]});
  }
  std::vector<double> best(g.n(), kNoPath);
  double result = kNoPath;
  for (int v = g.n() - 1; v >= 0; --v) {
    double b = is_terminal[v] ? term_offset[v] : kNoPath;
    for (auto [w, l] : adj[v])
      if (best[w] != kNoPath) b = std::max(b, l + best[w]);
    best[v] = b;
    if (is_source[v] && b != kNoPath) result = std::max(result, b - src_offset[v]);
  }
  return result;
}

double static_longest_path(const Dag& g, const std::vector<double>& len,
                           const std::vector<double>& src_offset,
                           const std::vector<double>& term_offset) {
  std::vector<int> ids(g.m());
  for (int i = 0; i < g.m(); ++i) ids[i] = i;
  std::vector<char> src(g.n(), 0), term(g.n(), 0);
  for (int s : g.sources()) src[s] = 1;
  for (int t : g.terminals()) term[t] = 1;
  return static_longest_path(g, ids, len, src, term, src_offset, term_offset);
}

Classification classify_subgraph_vertices(const Dag& g, const std::vector<int>& edge_ids) {
  std::vector<char> in_sub(g.m(), 0);
  for (int e : edge_ids) {
    if (e < 0 || e >= g.m()) throw InputError("subgraph edge not contained in graph");
    in_sub[e] = 1;
  }
  Classification c;
  for (int v = 0; v < g.n(); ++v) {
    int out_in = 0, in_in = 0;
    bool out_missing = false, in_missing = false;
    for (int e : g.out(v)) {
      if (in_sub[e]) ++out_in;
      else out_missing = true;
    }
    for (int e : g.in(v)) {
      if (in_sub[e]) ++in_in;
      else in_missing = true;
    }
    if (out_in == 0 && in_in == 0) continue;
    bool src = out_in > 0 && (g.in(v).empty() || in_missing);
    bool term = in_in > 0 && (g.out(v).empty() || out_missing);
    if (src) c.sources.push_back(v);
    if (term) c.terminals.push_back(v);
    if (!src && !term) c.internals.push_back(v);
  }
  return c;
}

std::vector<std::vector<int>> enumerate_st_paths(const Dag& g, std::size_t limit) {
  std::vector<std::vector<int>> paths;
  std::vector<int> stack;
  // Successor lists are sorted by head, so DFS order is lexicographic.
  std::function<void(int)> dfs = [&](int v) {
    stack.push_back(v);
    if (g.out(v).empty()) {
      if (paths.size() >= limit)
        throw InputError("path count exceeds limit " + std::to_string(limit));
      paths.push_back(stack);
    }
    for (int e : g.out(v)) dfs(g.edge(e).v);
    stack.pop_back();
  };
  for (int s : g.sources()) dfs(s);
  return paths;
}

}  // namespace stochlp
