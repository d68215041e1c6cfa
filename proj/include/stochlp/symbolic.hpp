#pragma once

#include "stochlp/errors.hpp"

#include <gmpxx.h>

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace stochlp::sym {

// Chain elements: variables are >= 0; two reserved constants.
inline constexpr int kZero = -1;
inline constexpr int kX = -2;  // the horizon x, also allowed inside terms

// z^alpha * e^(beta z) for one variable (or the horizon).
struct Factor {
  int var = 0;
  int alpha = 0;
  int beta = 0;
  auto operator<=>(const Factor&) const = default;
};

using Monomial = std::vector<Factor>;  // sorted by var, no (0,0) factors
using Chain = std::vector<int>;        // elements in strictly increasing order
using Terms = std::map<Monomial, mpq_class>;

Monomial mono_mul(const Monomial& a, const Monomial& b);

// Sum over region buckets of indicator(chain) * polynomial-exponential terms.
class Sum {
 public:
  std::map<Chain, Terms> buckets;

  static Sum constant(const mpq_class& c);
  static Sum term(const Chain& chain, const Monomial& m, const mpq_class& c);
  static Sum guard(const Chain& chain) { return term(chain, {}, 1); }

  void add(const Chain& chain, const Monomial& m, const mpq_class& c);
  Sum& operator+=(const Sum& o);
  Sum scaled(const mpq_class& c) const;
  bool is_zero() const { return buckets.empty(); }
  std::size_t regions() const { return buckets.size(); }
  std::size_t terms() const;
  std::set<int> free_vars() const;  // vars in chains or terms, excluding constants
  int max_alpha(int var) const;
  int max_abs_beta(int var) const;
  std::string str() const;
  bool operator==(const Sum&) const = default;
};

Sum multiply(const Sum& a, const Sum& b, const Budgets& budgets = default_budgets());
// Classical derivative inside each region; guard boundaries add nothing.
Sum differentiate(const Sum& s, int v);
// Integral over v between its chain neighbours (infinite where absent).
// Throws InvariantError when a tail does not vanish.
Sum integrate_out(const Sum& s, int v, const Budgets& budgets = default_budgets());
// v := target (a variable, kZero or kX). When both sit in a chain the bucket
// survives only if v immediately precedes target: the limit from below.
Sum substitute(const Sum& s, int v, int target);
// Splits every chain into full orders over the given elements.
Sum refine(const Sum& s, const std::vector<int>& elements, const Budgets& budgets = default_budgets());
// Drops monomials of total degree above tau; requires every beta = 0.
// The horizon is a constant here and does not count toward the degree.
Sum truncate_total_degree(const Sum& s, int tau);

struct Value {
  double value = 0;
  double radius = 0;
  std::string digits;  // 30 significant digits
};

// Exact rational grouping by exponent, then 256-bit exponentials.
Value evaluate(const Sum& s, const std::map<int, mpq_class>& assignment, const mpq_class& x);

std::string element_name(int e);

}  // namespace stochlp::sym
