#pragma once

#include "stochlp/bag_symbolic.hpp"

#include <functional>
#include <optional>
#include <string>

namespace stochlp {

// Edge-length CDF F accessed through its derivatives.
struct DistributionOracle {
  std::string name;
  // F^{(d)}(0) exactly.
  std::function<mpq_class(int d)> at_zero;
  // F^{(d)}(t) for t >= 0.
  std::function<double(int d, double t)> eval;
  // Largest horizon for which the series represents F on [0, x].
  std::optional<double> max_x;
};

// Built-in oracles: "expcdf" (1 - e^{-t}) and "unitslab" (t on [0, 1]).
DistributionOracle find_oracle(const std::string& name);

// Default order: ceil((e^2+1)(3k+3)x + 2 ln b + ln(1/eps)) + 1.
int choose_tau(int k, double x, int bags, double eps);

// R(k, tau, x) = ((k+1)x)^{tau+1} / (tau+1)!
double remainder_r(int k, int tau, double x);

// b^2 (4x^{k+1} + 1) R(k, tau, x)
double taylor_bound(int bags, int k, int tau, double x);

// F^{(d)}(0)/d! for d = 0..tau.
std::vector<mpq_class> taylor_series(const DistributionOracle& oracle, int tau);

// Spot-checks |F^{(d)}(t)| <= 1 for d <= tau on [0, x]; throws InputError.
void check_oracle(const DistributionOracle& oracle, int tau, double x);

struct TaylorOptions {
  std::optional<int> tau;
  std::optional<double> epsilon;  // used when tau is not given
  Budgets budgets = default_budgets();
};

struct TaylorResult {
  double value = 0;
  int tau = 0;
  double theoretical_bound = 0;
  std::size_t monomials_peak = 0;
  std::size_t regions_peak = 0;
  int original_width = 0;
  int separated_width = 0;
  int separated_n = 0;
  int bags = 0;
  sym::Sum expression;
  double elapsed_ms = 0;
};

// Additive approximation of Pr[longest path <= x]; every non-zero edge
// uses the oracle's distribution.
TaylorResult approx_taylor(const Dag& g, const std::optional<TreeDecomposition>& td, const mpq_class& x,
                           const DistributionOracle& oracle, const TaylorOptions& opt);

}  // namespace stochlp
