#include "stochlp/tree_decomposition.hpp"

#include "stochlp/errors.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace stochlp {

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

std::vector<std::vector<int>> TreeDecomposition::children() const {
  int b = size();
  if (b == 0) throw InputError("decomposition has no bags");
  if (root < 0 || root >= b) throw InputError("root bag out of range");
  if (static_cast<int>(tree_edges.size()) != b - 1)
    throw InputError("bag graph is not a tree (" + std::to_string(tree_edges.size()) +
                     " edges for " + std::to_string(b) + " bags)");
  std::vector<std::vector<int>> adj(b);
  for (auto [x, y] : tree_edges) {
    if (x < 0 || x >= b || y < 0 || y >= b || x == y) throw InputError("bad tree edge");
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<std::vector<int>> ch(b);
  std::vector<char> seen(b, 0);
  std::queue<int> q;
  q.push(root);
  seen[root] = 1;
  int reached = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        ch[x].push_back(y);
        q.push(y);
      }
  }
  if (reached != b) throw InputError("bag tree is disconnected");
  return ch;
}

std::vector<int> TreeDecomposition::parents() const {
  auto ch = children();
  std::vector<int> p(size(), -1);
  for (int x = 0; x < size(); ++x)
    for (int y : ch[x]) p[y] = x;
  return p;
}

TreeDecomposition parse_td(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int nb = -1, declared = -1, nv = -1;
  TreeDecomposition td;
  auto fail = [&](const std::string& why) {
    throw InputError("td line " + std::to_string(lineno) + ": " + why);
  };
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
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0] == "c") continue;
    if (tok[0] == "s") {
      if (nb >= 0) fail("duplicate header");
      if (tok.size() != 5 || tok[1] != "td") fail("malformed header, expected 's td <b> <w+1> <n>'");
      nb = to_int(tok[2]);
      declared = to_int(tok[3]) - 1;
      nv = to_int(tok[4]);
      if (nb < 1 || nv < 0 || declared < -1) fail("malformed header values");
      td.bags.assign(nb, {});
      continue;
    }
    if (nb < 0) fail("content before header");
    if (tok[0] == "b") {
      if (tok.size() < 2) fail("malformed bag line");
      int i = to_int(tok[1]);
      if (i < 1 || i > nb) fail("bag index out of range");
      for (std::size_t k = 2; k < tok.size(); ++k) {
        int v = to_int(tok[k]);
        if (v < 1 || v > nv) fail("vertex out of range in bag");
        td.bags[i - 1].push_back(v - 1);
      }
      continue;
    }
    if (tok.size() != 2) fail("expected tree edge 'i j'");
    int x = to_int(tok[0]), y = to_int(tok[1]);
    if (x < 1 || x > nb || y < 1 || y > nb) fail("bag index out of range");
    td.tree_edges.push_back({x - 1, y - 1});
  }
  if (nb < 0) throw InputError("td: missing header");
  for (auto& b : td.bags) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  td.declared_width = declared;
  td.children();  // shape check
  return td;
}

std::string write_td(const TreeDecomposition& td, int n, const Dag* labels_from) {
  std::ostringstream os;
  os << "s td " << td.size() << ' ' << td.width() + 1 << ' ' << n << '\n';
  // Keep the root first so that a reader using bag 1 as root agrees.
  std::vector<int> order(td.size());
  std::iota(order.begin(), order.end(), 0);
  std::swap(order[0], order[td.root]);
  std::vector<int> pos(td.size());
  for (int i = 0; i < td.size(); ++i) pos[order[i]] = i;
  for (int i = 0; i < td.size(); ++i) {
    os << "b " << i + 1;
    std::vector<int> labels;
    for (int v : td.bags[order[i]]) labels.push_back(labels_from ? labels_from->label(v) : v + 1);
    std::sort(labels.begin(), labels.end());
    for (int l : labels) os << ' ' << l;
    os << '\n';
  }
  for (auto [x, y] : td.tree_edges) os << pos[x] + 1 << ' ' << pos[y] + 1 << '\n';
  return os.str();
}

TreeDecomposition to_internal(const TreeDecomposition& td, const Dag& g) {
  std::vector<int> internal(g.n(), -1);
  for (int v = 0; v < g.n(); ++v) {
    int l = g.label(v) - 1;
    if (l < 0 || l >= g.n()) throw InputError("label map out of range");
    internal[l] = v;
  }
  TreeDecomposition out = td;
  for (auto& b : out.bags) {
    for (int& v : b) {
      if (v < 0 || v >= g.n()) throw InputError("td vertex out of range");
      v = internal[v];
    }
    std::sort(b.begin(), b.end());
  }
  return out;
}

TdCheck validate_td(const Dag& g, const TreeDecomposition& td) {
  TdCheck r;
  auto fail = [&](int cond, std::string msg, std::vector<int> w) {
    r.ok = false;
    r.condition = cond;
    r.message = std::move(msg);
    r.witness = std::move(w);
    return r;
  };
  std::vector<std::vector<int>> ch;
  try {
    ch = td.children();
  } catch (const InputError& e) {
    return fail(0, e.what(), {});
  }
  std::vector<std::vector<int>> holders(g.n());
  for (int i = 0; i < td.size(); ++i)
    for (int v : td.bags[i]) {
      if (v < 0 || v >= g.n()) return fail(1, "bag " + std::to_string(i) + " names unknown vertex", {v});
      holders[v].push_back(i);
    }
  for (int v = 0; v < g.n(); ++v)
    if (holders[v].empty())
      return fail(1, "vertex " + std::to_string(g.label(v)) + " is in no bag", {v});
  std::vector<std::vector<char>> member(td.size(), std::vector<char>(g.n(), 0));
  for (int i = 0; i < td.size(); ++i)
    for (int v : td.bags[i]) member[i][v] = 1;
  for (const Edge& e : g.edges()) {
    bool covered = false;
    for (int i : holders[e.u])
      if (member[i][e.v]) {
        covered = true;
        break;
      }
    if (!covered)
      return fail(2, "edge (" + std::to_string(g.label(e.u)) + "," + std::to_string(g.label(e.v)) +
                         ") is in no bag",
                  {e.u, e.v});
  }
  for (int v = 0; v < g.n(); ++v) {
    int links = 0;
    for (auto [x, y] : td.tree_edges)
      if (member[x][v] && member[y][v]) ++links;
    if (links != static_cast<int>(holders[v].size()) - 1)
      return fail(3, "bags containing vertex " + std::to_string(g.label(v)) + " are disconnected",
                  {v});
  }
  return r;
}

TreeDecomposition heuristic_td(const Dag& g) {
  int n = g.n();
  std::vector<std::set<int>> adj(n);
  for (const Edge& e : g.edges()) {
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
  }
  std::vector<char> gone(n, 0);
  std::vector<int> order, rank(n, -1);
  std::vector<std::vector<int>> bag_of(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!gone[v] && (best < 0 || adj[v].size() < adj[best].size())) best = v;
    std::vector<int> nb(adj[best].begin(), adj[best].end());
    bag_of[best] = nb;
    bag_of[best].push_back(best);
    std::sort(bag_of[best].begin(), bag_of[best].end());
    for (int a : nb)
      for (int b : nb)
        if (a != b) adj[a].insert(b);
    for (int a : nb) adj[a].erase(best);
    adj[best].clear();
    gone[best] = 1;
    rank[best] = step;
    order.push_back(best);
  }
  // Bag index n-1-rank puts the last eliminated vertex at the root.
  TreeDecomposition td;
  td.bags.resize(n);
  for (int v = 0; v < n; ++v) td.bags[n - 1 - rank[v]] = bag_of[v];
  int prev_root = -1;
  for (int idx = n - 1; idx >= 0; --idx) {
    int v = order[idx];
    int parent = -1;
    for (int w : bag_of[v])
      if (w != v && (parent < 0 || rank[w] < rank[parent])) parent = w;
    int me = n - 1 - rank[v];
    if (parent >= 0) {
      td.tree_edges.push_back({n - 1 - rank[parent], me});
    } else {
      if (prev_root >= 0) td.tree_edges.push_back({prev_root, me});
      prev_root = me;
    }
  }
  td.root = 0;
  td.declared_width = td.width();
  return td;
}

namespace {

struct Rooted {
  std::vector<std::vector<int>> bags;
  std::vector<std::vector<int>> ch;
  int root;
};

TreeDecomposition emit(const Rooted& r) {
  // BFS renumbering, root first.
  TreeDecomposition out;
  std::vector<int> idx(r.bags.size(), -1);
  std::queue<int> q;
  q.push(r.root);
  idx[r.root] = 0;
  std::vector<int> order{r.root};
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : r.ch[x]) {
      idx[y] = static_cast<int>(order.size());
      order.push_back(y);
      q.push(y);
    }
  }
  out.bags.resize(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) out.bags[k] = r.bags[order[k]];
  for (int x : order)
    for (int y : r.ch[x]) out.tree_edges.push_back({idx[x], idx[y]});
  out.root = 0;
  out.declared_width = out.width();
  return out;
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TreeDecomposition binarize_td(const TreeDecomposition& td, int n) {
  auto ch = td.children();
  bool binary = std::all_of(ch.begin(), ch.end(), [](const auto& c) { return c.size() <= 2; });
  if (binary && td.size() <= 4 * std::max(n, 1)) return td;

  Rooted r{td.bags, ch, td.root};
  for (auto& b : r.bags) std::sort(b.begin(), b.end());
  if (td.size() > 2 * std::max(n, 1)) {
    // Contract bags contained in their parent or in a child.
    std::vector<int> parent(r.bags.size(), -1);
    for (std::size_t x = 0; x < r.bags.size(); ++x)
      for (int y : r.ch[x]) parent[y] = static_cast<int>(x);
    std::vector<char> alive(r.bags.size(), 1);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t y = 0; y < r.bags.size(); ++y) {
        if (!alive[y]) continue;
        int p = parent[y];
        int into = -1;
        if (p >= 0 && subset(r.bags[y], r.bags[p])) {
          into = p;
        } else {
          for (int c : r.ch[y])
            if (subset(r.bags[y], r.bags[c])) {
              into = c;
              break;
            }
        }
        if (into < 0) continue;
        if (into == p) {
          auto& pc = r.ch[p];
          pc.erase(std::find(pc.begin(), pc.end(), static_cast<int>(y)));
          for (int c : r.ch[y]) {
            pc.push_back(c);
            parent[c] = p;
          }
        } else {
          // Child absorbs y's place.
          r.bags[y] = r.bags[into];
          auto grand = r.ch[into];
          auto& yc = r.ch[y];
          yc.erase(std::find(yc.begin(), yc.end(), into));
          for (int c : grand) {
            yc.push_back(c);
            parent[c] = static_cast<int>(y);
          }
          r.ch[into].clear();
          y = static_cast<std::size_t>(into);
        }
        r.ch[y].clear();
        alive[y] = 0;
        changed = true;
      }
    }
    for (auto& c : r.ch) std::sort(c.begin(), c.end());
  }
  // Duplicate-bag chains for nodes with more than two children.
  std::size_t original = r.bags.size();
  for (std::size_t x = 0; x < original; ++x) {
    if (r.ch[x].size() <= 2) continue;
    std::vector<int> kids = r.ch[x];
    int cur = static_cast<int>(x);
    std::size_t k = 0;
    while (kids.size() - k > 2) {
      int dup = static_cast<int>(r.bags.size());
      r.bags.push_back(r.bags[x]);
      r.ch.push_back({});
      r.ch[cur] = {kids[k], dup};
      ++k;
      cur = dup;
    }
    r.ch[cur] = {kids[k], kids[k + 1]};
  }
  return emit(r);
}

std::vector<int> edge_owners(const Dag& g, const TreeDecomposition& td) {
  auto par = td.parents();
  std::vector<int> depth(td.size(), 0);
  auto ch = td.children();
  std::queue<int> q;
  q.push(td.root);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : ch[x]) {
      depth[y] = depth[x] + 1;
      q.push(y);
    }
  }
  std::vector<std::vector<int>> holders(g.n());
  for (int i = 0; i < td.size(); ++i)
    for (int v : td.bags[i]) holders[v].push_back(i);
  std::vector<int> owner(g.m(), -1);
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    for (int i : holders[ed.u]) {
      if (!std::binary_search(td.bags[i].begin(), td.bags[i].end(), ed.v)) continue;
      if (owner[e] < 0 || depth[i] < depth[owner[e]]) owner[e] = i;
    }
    if (owner[e] < 0) throw InputError("edge not covered by any bag");
  }
  return owner;
}

Separated separate(const Dag& g, const TreeDecomposition& td) {
  auto owner = edge_owners(g, td);
  auto ch = td.children();
  std::vector<int> depth(td.size(), 0);
  std::queue<int> q;
  q.push(td.root);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : ch[x]) {
      depth[y] = depth[x] + 1;
      q.push(y);
    }
  }
  std::vector<int> top(g.n(), -1);
  for (int i = 0; i < td.size(); ++i)
    for (int v : td.bags[i])
      if (top[v] < 0 || depth[i] < depth[top[v]]) top[v] = i;

  Separated s;
  int n3 = 3 * g.n();
  std::vector<Edge> edges;
  for (int v = 0; v < g.n(); ++v) {
    edges.push_back({minus_copy(v), star_copy(v), DistSpec::zero()});
    edges.push_back({star_copy(v), plus_copy(v), DistSpec::zero()});
  }
  s.edge_of.resize(g.m());
  for (int e = 0; e < g.m(); ++e) {
    const Edge& ed = g.edge(e);
    int tail = owner[e] == top[ed.u] ? star_copy(ed.u) : plus_copy(ed.u);
    s.edge_of[e] = static_cast<int>(edges.size());
    edges.push_back({tail, minus_copy(ed.v), ed.dist});
  }
  std::vector<int> labels(n3);
  for (int v = 0; v < n3; ++v) labels[v] = v + 1;
  s.graph = Dag(n3, std::move(edges), labels);
  s.original.resize(n3);
  s.copy.resize(n3);
  for (int v = 0; v < n3; ++v) {
    s.original[v] = v / 3;
    s.copy[v] = v % 3;
  }
  s.td = td;
  for (auto& b : s.td.bags) {
    std::vector<int> tripled;
    for (int v : b) {
      tripled.push_back(minus_copy(v));
      tripled.push_back(star_copy(v));
      tripled.push_back(plus_copy(v));
    }
    std::sort(tripled.begin(), tripled.end());
    b = tripled;
  }
  s.td.declared_width = s.td.width();
  return s;
}

}  // namespace stochlp
