#include "stochlp/taylor.hpp"

#include "stochlp/numeric.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace stochlp {

DistributionOracle find_oracle(const std::string& name) {
  if (name == "expcdf") {
    return {name,
            [](int d) -> mpq_class { return d == 0 ? 0 : (d % 2 ? 1 : -1); },
            [](int d, double t) { return d == 0 ? -std::expm1(-t) : (d % 2 ? 1 : -1) * std::exp(-t); },
            std::nullopt};
  }
  if (name == "unitslab") {
    return {name,
            [](int d) -> mpq_class { return d == 1 ? 1 : 0; },
            [](int d, double t) { return d == 0 ? t : (d == 1 ? 1.0 : 0.0); },
            1.0};
  }
  throw InputError("unknown oracle '" + name + "' (known: expcdf, unitslab)");
}

int choose_tau(int k, double x, int bags, double eps) {
  if (!(eps > 0 && eps <= 1)) throw InputError("additive epsilon must lie in (0, 1]");
  if (bags < 1 || k < 0 || x < 0) throw InputError("choose_tau: bad arguments");
  const long double e2 = std::numbers::e_v<long double> * std::numbers::e_v<long double>;
  long double v = (e2 + 1) * (3.0L * k + 3) * x + 2 * std::log(static_cast<long double>(bags)) -
                  std::log(static_cast<long double>(eps));
  return static_cast<int>(std::ceil(v)) + 1;
}

double remainder_r(int k, int tau, double x) {
  // In logs to keep large tau finite.
  if (x <= 0) return 0;
  double lg = (tau + 1) * std::log((k + 1) * x) - std::lgamma(tau + 2.0);
  return std::exp(lg);
}

double taylor_bound(int bags, int k, int tau, double x) {
  double b = bags;
  return b * b * (4 * std::pow(x, k + 1) + 1) * remainder_r(k, tau, x);
}

std::vector<mpq_class> taylor_series(const DistributionOracle& oracle, int tau) {
  std::vector<mpq_class> s(tau + 1);
  for (int d = 0; d <= tau; ++d) s[d] = oracle.at_zero(d) / mpq_class(factorial(d));
  return s;
}

void check_oracle(const DistributionOracle& oracle, int tau, double x) {
  if (oracle.max_x && x > *oracle.max_x)
    throw InputError("oracle " + oracle.name + " is only valid for x <= " + format_double(*oracle.max_x));
  const int points = 16;
  for (int d = 0; d <= tau; ++d)
    for (int j = 0; j <= points; ++j) {
      double t = x * j / points;
      double v = oracle.eval(d, t);
      if (!(std::fabs(v) <= 1))
        throw InputError("oracle " + oracle.name + " violates |F^(" + std::to_string(d) + ")(" +
                         format_double(t) + ")| <= 1");
    }
}

namespace {

bool edge_matches(const DistSpec& d, const DistributionOracle& oracle) {
  switch (d.kind) {
    case DistKind::Zero: return true;
    case DistKind::Oracle: return d.oracle == oracle.name;
    case DistKind::Exponential: return oracle.name == "expcdf";
    case DistKind::Uniform: return d.a == 1 && oracle.name == "unitslab";
  }
  return false;
}

}  // namespace

TaylorResult approx_taylor(const Dag& g, const std::optional<TreeDecomposition>& td, const mpq_class& x,
                           const DistributionOracle& oracle, const TaylorOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  if (g.m() == 0) throw InputError("graph has no edges");
  if (!g.isolated().empty())
    throw InputError("isolated vertex " + std::to_string(g.label(g.isolated()[0])) + " is not allowed");
  for (const Edge& e : g.edges())
    if (!edge_matches(e.dist, oracle))
      throw InputError("distribution mismatch: edge " + std::to_string(g.label(e.u)) + "->" +
                       std::to_string(g.label(e.v)) + " is " + to_string(e.dist) + ", oracle is " +
                       oracle.name);
  if (!opt.tau && !opt.epsilon) throw InputError("either tau or an additive epsilon is required");

  TaylorResult r;
  Prepared p = prepare(g, td);
  r.original_width = p.original_width;
  r.separated_width = p.separated_width;
  r.separated_n = p.separated_n;
  r.bags = p.ctx.bags();
  const double xd = x.get_d();
  if (opt.tau) {
    if (*opt.tau < 0) throw InputError("tau must be nonnegative");
    r.tau = *opt.tau;
  } else {
    r.tau = choose_tau(r.original_width, std::max(xd, 0.0), r.bags, *opt.epsilon);
    // Dense polynomials in one bag's variables must fit the term budget.
    mpz_class dense = binomial(r.tau + r.separated_width + 1, r.separated_width + 1);
    if (dense > mpz_class(std::to_string(opt.budgets.max_terms)))
      throw BudgetError("formula-tau infeasible (tau=" + std::to_string(r.tau) + "), supply --tau");
  }
  r.theoretical_bound = taylor_bound(r.bags, r.separated_width, r.tau, std::max(xd, 0.0));
  if (x > 0) {
    check_oracle(oracle, r.tau, xd);
    EdgeModel model{true, r.tau, taylor_series(oracle, r.tau)};
    SymStats stats;
    try {
      r.expression = sweep(p.ctx, model, opt.budgets, &stats);
    } catch (const BudgetError& e) {
      if (!opt.tau) throw BudgetError(std::string(e.what()) + "; formula-tau infeasible, supply --tau");
      throw;
    }
    r.monomials_peak = stats.peak_terms;
    r.regions_peak = stats.peak_regions;
    r.value = sym::evaluate(r.expression, {}, x).value;
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace stochlp
