#include "support.hpp"

#include "stochlp/errors.hpp"
#include "stochlp/graph.hpp"

#include <doctest.h>

using namespace stochlp;
using namespace testing_support;

TEST_CASE("parse_graph reads chains and exponential edges") {
  Dag g = parse_graph("3 2\n1 2 uniform 1\n2 3 uniform 1\n");
  CHECK(g.n() == 3);
  CHECK(g.m() == 2);
  CHECK(g.edge(0).u == 0);
  CHECK(g.edge(1).v == 2);
  CHECK(g.edge(0).dist == DistSpec::uniform(1));

  Dag e = parse_graph("# comment\n2 1\n1 2 exp\n");
  CHECK(e.m() == 1);
  CHECK(e.edge(0).dist.kind == DistKind::Exponential);

  Dag o = parse_graph("2 1\n1 2 oracle expcdf  # trailing\n");
  CHECK(o.edge(0).dist == DistSpec::named("expcdf"));
}

TEST_CASE("parse_graph rejects bad input") {
  CHECK_THROWS_AS(parse_graph("2 2\n1 2 exp\n2 1 exp\n"), InputError);
  CHECK_THROWS_AS(parse_graph("2 1\n1 2 uniform 0\n"), InputError);
  CHECK_THROWS_AS(parse_graph("2 1\n1 2 gamma\n"), InputError);
  CHECK_THROWS_AS(parse_graph("2 1\n1 1 exp\n"), InputError);
  CHECK_THROWS_AS(parse_graph("3 2\n1 2 exp\n1 2 exp\n"), InputError);
  CHECK_THROWS_AS(parse_graph("2 2\n1 2 exp\n"), InputError);
  CHECK_THROWS_AS(parse_graph("2 1\n1 5 exp\n"), InputError);
}

TEST_CASE("vertices are relabelled into a topological order") {
  Dag g = parse_graph("3 2\n3 1 exp\n1 2 exp\n");
  for (const Edge& e : g.edges()) CHECK(e.u < e.v);
  // File vertex 3 comes first.
  CHECK(g.label(0) == 3);
  Dag back = parse_graph(write_graph(g));
  CHECK(back.labels() == g.labels());
}

TEST_CASE("static_longest_path examples") {
  Dag c = chain(2, DistSpec::uniform(1));
  CHECK(static_longest_path(c, {1, 2}, {0, 0, 0}, {0, 0, 0}) == doctest::Approx(3));
  Dag e = single_edge(DistSpec::uniform(1));
  CHECK(static_longest_path(e, {0.4}, {0.5, 0}, {0, 0}) == doctest::Approx(-0.1));
  Dag d = diamond(DistSpec::uniform(1));
  // Edge order: 0->1, 0->2, 1->3, 2->3 with lengths (1,2,1,2) gives paths 2 and 4.
  CHECK(static_longest_path(d, {1, 2, 1, 2}, {0, 0, 0, 0}, {0, 0, 0, 0}) == doctest::Approx(4));
}

TEST_CASE("classify_subgraph_vertices examples") {
  Dag c = chain(2, DistSpec::uniform(1));
  auto one = classify_subgraph_vertices(c, {1});
  CHECK(one.sources == std::vector<int>{1});
  CHECK(one.terminals == std::vector<int>{2});
  CHECK(one.internals.empty());

  auto all = classify_subgraph_vertices(c, {0, 1});
  CHECK(all.sources == std::vector<int>{0});
  CHECK(all.terminals == std::vector<int>{2});
  CHECK(all.internals == std::vector<int>{1});

  Dag d = diamond(DistSpec::uniform(1));
  int e01 = d.find_edge(0, 1), e13 = d.find_edge(1, 3);
  auto half = classify_subgraph_vertices(d, {e01, e13});
  CHECK(half.sources == std::vector<int>{0});
  CHECK(half.terminals == std::vector<int>{3});
  CHECK(half.internals == std::vector<int>{1});

  CHECK_THROWS_AS(classify_subgraph_vertices(c, {7}), InputError);
}

TEST_CASE("enumerate_st_paths examples") {
  CHECK(enumerate_st_paths(chain(2, DistSpec::uniform(1)), 10) == std::vector<std::vector<int>>{{0, 1, 2}});
  CHECK(enumerate_st_paths(diamond(DistSpec::uniform(1)), 10).size() == 2);
  std::vector<Edge> es;
  for (int k = 0; k < 4; ++k) {
    int s = 3 * k;
    es.push_back({s, s + 1, DistSpec::uniform(1)});
    es.push_back({s, s + 2, DistSpec::uniform(1)});
    es.push_back({s + 1, s + 3, DistSpec::uniform(1)});
    es.push_back({s + 2, s + 3, DistSpec::uniform(1)});
  }
  Dag ladder(13, es);
  CHECK_THROWS_AS(enumerate_st_paths(ladder, 10), InputError);
  CHECK(enumerate_st_paths(ladder, 16).size() == 16);
}

TEST_CASE("property: static_longest_path equals the best enumerated path") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> len(0, 3), off(-1, 1);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Dag g = random_dag(rng, 2 + static_cast<int>(rng() % 6), 0.45, 12, DistKind::Uniform);
    std::vector<std::vector<int>> paths;
    try {
      paths = enumerate_st_paths(g, 16);
    } catch (const InputError&) {
      continue;
    }
    std::vector<double> l(g.m()), so(g.n()), to(g.n());
    for (auto& v : l) v = len(rng);
    for (auto& v : so) v = off(rng);
    for (auto& v : to) v = off(rng);
    double best = kNoPath;
    for (const auto& p : paths) {
      double s = -so[p.front()] + to[p.back()];
      for (std::size_t k = 0; k + 1 < p.size(); ++k) s += l[g.find_edge(p[k], p[k + 1])];
      best = std::max(best, s);
    }
    CHECK(static_longest_path(g, l, so, to) == doctest::Approx(best).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("property: whole-graph classification is the degree rule") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Dag g = random_dag(rng, 2 + static_cast<int>(rng() % 7), 0.4, 20, DistKind::Uniform);
    std::vector<int> all(g.m());
    for (int e = 0; e < g.m(); ++e) all[e] = e;
    auto c = classify_subgraph_vertices(g, all);
    CHECK(c.sources == g.sources());
    CHECK(c.terminals == g.terminals());
    CHECK(c.sources.size() + c.terminals.size() + c.internals.size() == static_cast<std::size_t>(g.n()));
  }
}

TEST_CASE("family rejects mixed distributions") {
  Dag g(3, {{0, 1, DistSpec::uniform(1)}, {1, 2, DistSpec::exponential()}});
  CHECK_THROWS_AS(g.family(), InputError);
  CHECK(single_edge(DistSpec::exponential()).family() == DistKind::Exponential);
}
