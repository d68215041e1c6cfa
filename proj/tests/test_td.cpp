#include "support.hpp"

#include "stochlp/errors.hpp"
#include "stochlp/tree_decomposition.hpp"

#include <doctest.h>

#include <set>

using namespace stochlp;
using namespace testing_support;

namespace {

int max_children(const TreeDecomposition& td) {
  std::size_t best = 0;
  for (const auto& c : td.children()) best = std::max(best, c.size());
  return static_cast<int>(best);
}

}  // namespace

TEST_CASE("parse_td examples") {
  TreeDecomposition one = parse_td("s td 1 2 2\nb 1 1 2\n");
  CHECK(one.size() == 1);
  CHECK(one.width() == 1);
  CHECK(one.bags[0] == std::vector<int>{0, 1});

  TreeDecomposition two = parse_td("c chain\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
  CHECK(two.size() == 2);
  CHECK(two.width() == 1);
  CHECK(validate_td(chain(2, DistSpec::uniform(1)), two).ok);

  CHECK_THROWS_AS(parse_td("s td 2 2 3\nb 1 1 2\nb 3 2 3\n"), InputError);
  CHECK_THROWS_AS(parse_td("b 1 1 2\n"), InputError);
  CHECK_THROWS_AS(parse_td("s td x 2 3\n"), InputError);
  // Two bags without a tree edge: not connected.
  CHECK_THROWS_AS(parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n"), InputError);
}

TEST_CASE("write_td round trips") {
  TreeDecomposition td = parse_td("s td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 3 4\n1 2\n2 3\n");
  TreeDecomposition again = parse_td(write_td(td, 4));
  CHECK(again.bags == td.bags);
  CHECK(again.tree_edges == td.tree_edges);
}

TEST_CASE("validate_td examples") {
  Dag c = chain(2, DistSpec::uniform(1));
  CHECK(validate_td(c, parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n")).ok);

  TdCheck uncovered = validate_td(c, parse_td("s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n"));
  CHECK_FALSE(uncovered.ok);
  CHECK(uncovered.condition == 2);
  CHECK(uncovered.witness == std::vector<int>{1, 2});

  // Vertex 1 sits in bags 1 and 3 but not in bag 2 between them.
  Dag g(4, {{0, 1, DistSpec::uniform(1)}, {0, 3, DistSpec::uniform(1)}, {2, 3, DistSpec::uniform(1)}});
  TdCheck split = validate_td(g, parse_td("s td 3 2 4\nb 1 1 2\nb 2 3 4\nb 3 1 4\n1 2\n2 3\n"));
  CHECK_FALSE(split.ok);
  CHECK(split.condition == 3);
  CHECK(split.witness == std::vector<int>{0});

  TdCheck missing = validate_td(c, parse_td("s td 1 2 3\nb 1 1 2\n"));
  CHECK_FALSE(missing.ok);
  CHECK(missing.condition == 1);
}

TEST_CASE("heuristic_td examples") {
  TreeDecomposition c5 = heuristic_td(chain(4, DistSpec::uniform(1)));
  CHECK(c5.width() == 1);
  CHECK(validate_td(chain(4, DistSpec::uniform(1)), c5).ok);
  CHECK(heuristic_td(single_edge(DistSpec::uniform(1))).width() == 1);
  auto u = DistSpec::uniform(1);
  Dag k4(4, {{0, 1, u}, {0, 2, u}, {0, 3, u}, {1, 2, u}, {1, 3, u}, {2, 3, u}});
  TreeDecomposition t = heuristic_td(k4);
  CHECK(t.width() == 3);
  CHECK(validate_td(k4, t).ok);
}

TEST_CASE("binarize_td examples") {
  auto u = DistSpec::uniform(1);
  Dag star(4, {{0, 1, u}, {0, 2, u}, {0, 3, u}});
  TreeDecomposition td;
  td.bags = {{0}, {0, 1}, {0, 2}, {0, 3}};
  td.tree_edges = {{0, 1}, {0, 2}, {0, 3}};
  TreeDecomposition b = binarize_td(td, star.n());
  CHECK(max_children(b) <= 2);
  CHECK(b.size() == 5);
  CHECK(b.width() == td.width());
  CHECK(validate_td(star, b).ok);

  TreeDecomposition chain_td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
  TreeDecomposition same = binarize_td(chain_td, 3);
  CHECK(same.bags == chain_td.bags);
  CHECK(same.tree_edges == chain_td.tree_edges);

  Dag star6(6, {{0, 1, u}, {0, 2, u}, {0, 3, u}, {0, 4, u}, {0, 5, u}});
  TreeDecomposition s5;
  s5.bags = {{0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}};
  for (int k = 1; k <= 5; ++k) s5.tree_edges.push_back({0, k});
  TreeDecomposition b5 = binarize_td(s5, 6);
  CHECK(b5.size() <= 24);
  CHECK(max_children(b5) <= 2);
  CHECK(validate_td(star6, b5).ok);
}

TEST_CASE("separate examples") {
  Dag e = single_edge(DistSpec::uniform(1));
  TreeDecomposition td;
  td.bags = {{0, 1}};
  Separated s = separate(e, td);
  CHECK(s.graph.n() == 6);
  CHECK(s.graph.m() == 5);
  int zeros = 0;
  for (const Edge& ed : s.graph.edges()) zeros += ed.dist.kind == DistKind::Zero;
  CHECK(zeros == 4);
  CHECK(s.td.size() == 1);
  CHECK(s.td.width() == 5);

  Dag c = chain(2, DistSpec::uniform(1));
  Prepared p = prepare(c, parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n"));
  CHECK(p.separated_width <= 5);
  for (int i = 0; i < p.ctx.bags(); ++i) {
    std::set<int> s_set(p.ctx.S[i].begin(), p.ctx.S[i].end());
    for (int t : p.ctx.T[i]) CHECK(s_set.count(t) == 0);
  }
}

TEST_CASE("ancestor-first ownership puts shared edges in the upper bag") {
  auto u = DistSpec::uniform(1);
  Dag g(4, {{0, 1, u}, {1, 2, u}, {2, 3, u}, {1, 3, u}});
  TreeDecomposition td;
  td.bags = {{0, 1, 2}, {1, 2, 3}};
  td.tree_edges = {{0, 1}};
  auto owners = edge_owners(g, td);
  CHECK(owners[g.find_edge(1, 2)] == 0);
  CHECK(owners[g.find_edge(0, 1)] == 0);
  CHECK(owners[g.find_edge(2, 3)] == 1);
  CHECK(owners[g.find_edge(1, 3)] == 1);
}

TEST_CASE("leaf bags have no glue variables") {
  Prepared p = prepare(chain(3, DistSpec::uniform(1)), std::nullopt);
  for (int i = 0; i < p.ctx.bags(); ++i)
    if (p.ctx.children[i].empty()) {
      CHECK(p.ctx.Sp[i].empty());
      CHECK(p.ctx.Tp[i].empty());
      CHECK(p.ctx.J[i].empty());
    }
}

TEST_CASE("property: context invariants on random graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    int n = 2 + static_cast<int>(rng() % 8);
    Dag g = random_dag(rng, n, 0.35, 18, DistKind::Uniform);
    TreeDecomposition h = heuristic_td(g);
    REQUIRE(validate_td(g, h).ok);
    TreeDecomposition b = binarize_td(h, g.n());
    CHECK(validate_td(g, b).ok);
    CHECK(b.size() <= 4 * g.n());
    CHECK(max_children(b) <= 2);
    CHECK(b.width() == h.width());

    Separated s = separate(g, b);
    CHECK(validate_td(s.graph, s.td).ok);
    CHECK(s.td.width() <= 3 * b.width() + 2);

    Prepared p = prepare(g, h);
    CHECK(check_context(p.ctx).empty());
    std::vector<int> seen(p.ctx.graph.m(), 0);
    for (int i = 0; i < p.ctx.bags(); ++i)
      for (int e : p.ctx.bag_edges[i]) ++seen[e];
    for (int c : seen) CHECK(c == 1);

    // Zero links add nothing to any path.
    std::vector<double> len(g.m()), sep_len(s.graph.m(), 0.0);
    std::uniform_real_distribution<double> U(0, 1);
    for (int e = 0; e < g.m(); ++e) sep_len[s.edge_of[e]] = len[e] = U(rng);
    double a = static_longest_path(g, len, std::vector<double>(g.n()), std::vector<double>(g.n()));
    double c = static_longest_path(s.graph, sep_len, std::vector<double>(s.graph.n()),
                                   std::vector<double>(s.graph.n()));
    CHECK(a == doctest::Approx(c).epsilon(1e-12));
  }
}
