#include "support.hpp"

#include "stochlp/errors.hpp"
#include "stochlp/exact_exponential.hpp"
#include "stochlp/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace stochlp;
using namespace testing_support;

namespace {

double erlang_cdf(int k, double x) {
  double term = 1, sum = 0;
  for (int j = 0; j < k; ++j) {
    sum += term;
    term *= x / (j + 1);
  }
  return 1 - std::exp(-x) * sum;
}

double exact(const Dag& g, const mpq_class& x, const std::optional<TreeDecomposition>& td = std::nullopt) {
  return exact_exp(g, td, x).value;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

Prepared raw_one_bag(const Dag& g) {
  TreeDecomposition td;
  td.bags.push_back({});
  for (int v = 0; v < g.n(); ++v) td.bags[0].push_back(v);
  Prepared p;
  p.ctx = build_context(g, td);
  return p;
}

}  // namespace

TEST_CASE("closed forms") {
  DistSpec e = DistSpec::exponential();
  CHECK(exact(single_edge(e), 1) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-15));
  for (int k : {2, 3, 5})
    for (double x : {0.5, 2.0, 7.0})
      CHECK(exact(chain(k, e), mpq_class(x)) == doctest::Approx(erlang_cdf(k, x)).epsilon(1e-14));
  double two = erlang_cdf(2, 2.0);
  CHECK(exact(diamond(e), 2) == doctest::Approx(two * two).epsilon(1e-15));
  Dag fork(3, {{0, 1, e}, {0, 2, e}});
  CHECK(exact(fork, 1) == doctest::Approx(std::pow(1 - std::exp(-1.0), 2)).epsilon(1e-15));

  Dag five(5, {{0, 1, e}, {0, 2, e}, {0, 3, e}, {2, 3, e}, {0, 4, e}});
  mpq_class x(3, 2);
  double q = std::exp(-1.5);
  double expect = std::pow(1 - q, 3) * (1 - q - 1.5 * q);
  ExactResult r = exact_exp(five, std::nullopt, x);
  CHECK(r.value == doctest::Approx(expect).epsilon(1e-15));
  CHECK(r.digits.substr(0, 14) == "0.207318746912");
  // The radius covers rounding the 256-bit value to a double.
  CHECK(r.radius < 1e-16);
  CHECK(std::abs(r.value - expect) <= r.radius + 1e-16);
}

TEST_CASE("bag_density_exp examples") {
  DistSpec e = DistSpec::exponential();
  // Single edge: the density of the edge length, e^{-(z_0 - z_1)} above z_1.
  Prepared p = raw_one_bag(single_edge(e));
  sym::Sum phi = bag_density_exp(p.ctx, 0);
  CHECK(sym::evaluate(phi, {{0, 1}, {1, 0}}, 0).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(sym::evaluate(phi, {{0, 0}, {1, 1}}, 0).value == 0.0);

  // Two-edge path in one bag: Erlang(2) density (z_0 - z_2) e^{-(z_0 - z_2)}.
  Prepared q = raw_one_bag(chain(2, e));
  sym::Sum erl = bag_density_exp(q.ctx, 0);
  CHECK(sym::evaluate(erl, {{0, 2}, {2, 0}}, 0).value == doctest::Approx(2 * std::exp(-2.0)).epsilon(1e-15));
}

TEST_CASE("a chain split across bags gives the Erlang CDF") {
  DistSpec e = DistSpec::exponential();
  TreeDecomposition td;
  td.bags = {{0, 1}, {1, 2}};
  td.tree_edges = {{0, 1}};
  for (double x : {0.25, 1.0, 3.5})
    CHECK(exact(chain(2, e), mpq_class(x), td) == doctest::Approx(erlang_cdf(2, x)).epsilon(1e-15));
}

TEST_CASE("expression can be reused at several horizons") {
  Dag g = chain(3, DistSpec::exponential());
  ExactResult r = exact_exp(g, std::nullopt, 1);
  for (double x : {0.5, 1.0, 4.0})
    CHECK(sym::evaluate(r.expression, {}, mpq_class(x)).value == doctest::Approx(erlang_cdf(3, x)).epsilon(1e-14));
}

TEST_CASE("exact-exp errors") {
  CHECK_THROWS_WITH_AS(exact_exp(single_edge(DistSpec::uniform(1)), std::nullopt, 1),
                       doctest::Contains("distribution mismatch"), InputError);
  Budgets tiny = default_budgets();
  tiny.max_regions = 1;
  CHECK_THROWS_AS(exact_exp(diamond(DistSpec::exponential()), std::nullopt, 1, tiny), BudgetError);
}

TEST_CASE("property: CDF axioms on random DAGs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    Dag g = random_dag(rng, 3 + static_cast<int>(rng() % 3), 0.5, 5, DistKind::Exponential);
    CHECK(exact(g, 0) == 0.0);
    ExactResult r = exact_exp(g, std::nullopt, 1);
    double prev = 0;
    for (int k = 1; k <= 12; ++k) {
      double v = sym::evaluate(r.expression, {}, frac(k, 2)).value;
      CHECK(v >= prev - 1e-15);
      CHECK(v <= 1.0 + 1e-15);
      prev = v;
    }
    CHECK(sym::evaluate(r.expression, {}, 50).value == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("property: value does not depend on the decomposition or the labelling") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 25; ++trial) {
    Dag g = random_dag(rng, 3 + static_cast<int>(rng() % 3), 0.5, 5, DistKind::Exponential);
    mpq_class x = frac(1 + static_cast<long>(rng() % 5), 2);
    double base = exact(g, x);
    TreeDecomposition all;
    all.bags.push_back({});
    for (int v = 0; v < g.n(); ++v) all.bags[0].push_back(v);
    CHECK(exact(g, x, all) == doctest::Approx(base).epsilon(1e-25));
    std::vector<int> pos;
    Dag h = random_relabel(rng, g, pos);
    CHECK(exact(h, x) == doctest::Approx(base).epsilon(1e-25));
  }
}

TEST_CASE("property: agrees with the series-parallel oracle and Monte Carlo") {
  std::mt19937_64 rng(7);
  int sp = 0;
  for (int trial = 0; trial < 40; ++trial) {
    Dag g = random_dag(rng, 3 + static_cast<int>(rng() % 3), 0.5, 5, DistKind::Exponential);
    mpq_class x = frac(1 + static_cast<long>(rng() % 6), 2);
    double v = exact(g, x);
    try {
      SpResult s = series_parallel_exact(g, x);
      CHECK(v == doctest::Approx(s.value).epsilon(1e-9));
      ++sp;
    } catch (const InputError&) {
      // not series-parallel
    }
    if (trial < 10) {
      McResult mc = monte_carlo(g, x.get_d(), 40000, 1000 + trial);
      CHECK(std::abs(mc.estimate - v) <= 4 * mc.stderr_ + 1e-12);
    }
  }
  CHECK(sp >= 10);
}

TEST_CASE("property: bag region count stays within (w+1)!") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    Dag g = random_dag(rng, 3 + static_cast<int>(rng() % 3), 0.5, 5, DistKind::Exponential);
    ExactResult r = exact_exp(g, std::nullopt, 1);
    for (std::size_t regions : r.stats.bag_regions)
      CHECK(regions <= factorial(r.separated_width + 1));
  }
}
