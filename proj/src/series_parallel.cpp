#include "stochlp/oracles.hpp"
#include "stochlp/symbolic.hpp"

#include <map>
#include <optional>

namespace stochlp {

namespace {

// CDF of one reduced component. Exponential components are functions of
// z_0 - z_1 in the symbolic calculus.
struct Component {
  bool zero = false;
  PiecewisePoly pp;
  sym::Sum sum;
};

struct MultiEdge {
  int u, v;
  Component c;
  bool alive = true;
};

class Reducer {
 public:
  Reducer(bool exponential, const Budgets& budgets) : exp_(exponential), budgets_(budgets) {}

  Component leaf(const DistSpec& d) const {
    Component c;
    if (d.kind == DistKind::Zero) {
      c.zero = true;
      c.pp = PiecewisePoly::step();
      c.sum = sym::Sum::guard({1, 0});
    } else if (exp_) {
      sym::Monomial m{{0, 0, -1}, {1, 0, 1}};
      c.sum = sym::Sum::guard({1, 0});
      c.sum.add({1, 0}, m, -1);
    } else {
      c.pp = PiecewisePoly::uniform_cdf(d.a);
    }
    return c;
  }

  Component series(const Component& a, const Component& b) const {
    if (a.zero) return b;
    if (b.zero) return a;
    Component c;
    if (exp_) {
      // F(z0 - z1) = int f_a(z0 - z2) F_b(z2 - z1) dz2
      sym::Sum fa = sym::differentiate(sym::substitute(a.sum, 1, 2), 2).scaled(-1);
      sym::Sum fb = sym::substitute(b.sum, 0, 2);
      c.sum = sym::integrate_out(sym::multiply(fa, fb, budgets_), 2, budgets_);
    } else {
      c.pp = pp_convolve(a.pp.derivative(), b.pp);
    }
    return c;
  }

  Component parallel(const Component& a, const Component& b) const {
    Component c;
    c.zero = a.zero && b.zero;
    if (exp_) c.sum = sym::multiply(a.sum, b.sum, budgets_);
    else c.pp = pp_product(a.pp, b.pp);
    return c;
  }

 private:
  bool exp_;
  Budgets budgets_;
};

}  // namespace

SpResult series_parallel_exact(const Dag& g, const mpq_class& x, const Budgets& budgets) {
  if (g.m() == 0) throw InputError("graph has no edges");
  if (!g.isolated().empty()) throw InputError("isolated vertices are not allowed");
  const DistKind fam = g.family();
  if (fam != DistKind::Uniform && fam != DistKind::Exponential)
    throw InputError("series_parallel_exact needs uniform or exponential edge lengths");
  const bool exponential = fam == DistKind::Exponential;
  Reducer red(exponential, budgets);

  std::vector<MultiEdge> edges;
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, red.leaf(e.dist)});
  int n = g.n();
  auto sources = g.sources(), terminals = g.terminals();
  int s = sources[0], t = terminals[0];
  if (sources.size() > 1) {
    s = n++;
    for (int v : sources) edges.push_back({s, v, red.leaf(DistSpec::zero())});
  }
  if (terminals.size() > 1) {
    t = n++;
    for (int v : terminals) edges.push_back({v, t, red.leaf(DistSpec::zero())});
  }

  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<int, int>, int> first;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
      if (!edges[i].alive) continue;
      auto [it, fresh] = first.try_emplace({edges[i].u, edges[i].v}, i);
      if (fresh) continue;
      MultiEdge& keep = edges[it->second];
      keep.c = red.parallel(keep.c, edges[i].c);
      edges[i].alive = false;
      changed = true;
    }
    std::vector<std::vector<int>> in(n), out(n);
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
      if (!edges[i].alive) continue;
      out[edges[i].u].push_back(i);
      in[edges[i].v].push_back(i);
    }
    for (int w = 0; w < n; ++w) {
      if (w == s || w == t || in[w].size() != 1 || out[w].size() != 1) continue;
      MultiEdge& a = edges[in[w][0]];
      MultiEdge& b = edges[out[w][0]];
      if (!a.alive || !b.alive) continue;
      a.c = red.series(a.c, b.c);
      a.v = b.v;
      b.alive = false;
      changed = true;
      break;
    }
  }
  std::optional<int> last;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    if (!edges[i].alive) continue;
    if (last || edges[i].u != s || edges[i].v != t) throw InputError("graph is not series-parallel");
    last = i;
  }
  const Component& c = edges[*last].c;
  SpResult r;
  if (exponential) {
    auto v = sym::evaluate(c.sum, {{0, x}, {1, 0}}, x);
    r.value = v.value;
    r.digits = v.digits;
  } else {
    r.rational = c.pp(x);
    r.is_rational = true;
    r.value = r.rational.get_d();
    r.digits = r.rational.get_str();
  }
  return r;
}

}  // namespace stochlp
