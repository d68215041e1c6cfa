#include "stochlp/symbolic.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace stochlp::sym {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].var < b[j].var)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].var < a[i].var) {
      r.push_back(b[j++]);
    } else {
      Factor f{a[i].var, a[i].alpha + b[j].alpha, a[i].beta + b[j].beta};
      if (f.alpha != 0 || f.beta != 0) r.push_back(f);
      ++i, ++j;
    }
  }
  return r;
}

namespace {

bool chain_ok(const Chain& c) {
  auto z = std::find(c.begin(), c.end(), kZero);
  auto x = std::find(c.begin(), c.end(), kX);
  return z == c.end() || x == c.end() || z < x;
}

void check(const Sum& s, const Budgets& b) {
  if (s.regions() > b.max_regions)
    throw BudgetError("symbolic region count " + std::to_string(s.regions()) + " exceeds budget " +
                      std::to_string(b.max_regions));
  if (s.terms() > b.max_terms)
    throw BudgetError("symbolic term count " + std::to_string(s.terms()) + " exceeds budget " +
                      std::to_string(b.max_terms));
}

// Splits m into the factor for v (alpha, beta) and the rest.
Factor take(const Monomial& m, int v, Monomial& rest) {
  Factor f{v, 0, 0};
  rest.clear();
  for (const Factor& g : m) {
    if (g.var == v) f = g;
    else rest.push_back(g);
  }
  return f;
}

// All merges of two chains that respect both orders.
void merge_chains(const Chain& a, const Chain& b, std::vector<Chain>& out) {
  std::vector<int> shared_a, shared_b;
  for (int e : a)
    if (std::find(b.begin(), b.end(), e) != b.end()) shared_a.push_back(e);
  for (int e : b)
    if (std::find(a.begin(), a.end(), e) != a.end()) shared_b.push_back(e);
  if (shared_a != shared_b) return;
  // Segments between consecutive shared elements.
  std::vector<std::vector<int>> seg_a(shared_a.size() + 1), seg_b(shared_a.size() + 1);
  std::size_t k = 0;
  for (int e : a) {
    if (k < shared_a.size() && e == shared_a[k]) ++k;
    else seg_a[k].push_back(e);
  }
  k = 0;
  for (int e : b) {
    if (k < shared_a.size() && e == shared_a[k]) ++k;
    else seg_b[k].push_back(e);
  }
  Chain cur;
  std::function<void(std::size_t)> gap = [&](std::size_t g) {
    if (g == seg_a.size()) {
      if (chain_ok(cur)) out.push_back(cur);
      return;
    }
    std::size_t base = cur.size();
    const auto& sa = seg_a[g];
    const auto& sb = seg_b[g];
    std::function<void(std::size_t, std::size_t)> shuffle = [&](std::size_t i, std::size_t j) {
      if (i == sa.size() && j == sb.size()) {
        std::size_t mark = cur.size();
        if (g < shared_a.size()) cur.push_back(shared_a[g]);
        gap(g + 1);
        cur.resize(mark);
        return;
      }
      if (i < sa.size()) {
        cur.push_back(sa[i]);
        shuffle(i + 1, j);
        cur.pop_back();
      }
      if (j < sb.size()) {
        cur.push_back(sb[j]);
        shuffle(i, j + 1);
        cur.pop_back();
      }
    };
    shuffle(0, 0);
    cur.resize(base);
  };
  gap(0);
}

}  // namespace

Sum Sum::constant(const mpq_class& c) {
  Sum s;
  if (c != 0) s.buckets[{}][{}] = c;
  return s;
}

Sum Sum::term(const Chain& chain, const Monomial& m, const mpq_class& c) {
  Sum s;
  s.add(chain, m, c);
  return s;
}

void Sum::add(const Chain& chain, const Monomial& m, const mpq_class& c) {
  if (c == 0) return;
  auto& terms = buckets[chain];
  auto [it, fresh] = terms.try_emplace(m, c);
  if (fresh) {
    it->second.canonicalize();
  } else {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
  if (terms.empty()) buckets.erase(chain);
}

Sum& Sum::operator+=(const Sum& o) {
  for (const auto& [chain, terms] : o.buckets)
    for (const auto& [m, c] : terms) add(chain, m, c);
  return *this;
}

Sum Sum::scaled(const mpq_class& c) const {
  if (c == 0) return {};
  Sum r = *this;
  for (auto& [chain, terms] : r.buckets)
    for (auto& [m, v] : terms) v *= c;
  return r;
}

std::size_t Sum::terms() const {
  std::size_t n = 0;
  for (const auto& [chain, terms] : buckets) n += terms.size();
  return n;
}

std::set<int> Sum::free_vars() const {
  std::set<int> r;
  for (const auto& [chain, terms] : buckets) {
    for (int e : chain)
      if (e >= 0) r.insert(e);
    for (const auto& [m, c] : terms)
      for (const Factor& f : m)
        if (f.var >= 0) r.insert(f.var);
  }
  return r;
}

int Sum::max_alpha(int var) const {
  int a = 0;
  for (const auto& [chain, terms] : buckets)
    for (const auto& [m, c] : terms)
      for (const Factor& f : m)
        if (f.var == var) a = std::max(a, f.alpha);
  return a;
}

int Sum::max_abs_beta(int var) const {
  int b = 0;
  for (const auto& [chain, terms] : buckets)
    for (const auto& [m, c] : terms)
      for (const Factor& f : m)
        if (f.var == var) b = std::max(b, std::abs(f.beta));
  return b;
}

std::string element_name(int e) {
  if (e == kZero) return "0";
  if (e == kX) return "x";
  return "z" + std::to_string(e);
}

std::string Sum::str() const {
  if (buckets.empty()) return "0\n";
  std::ostringstream os;
  for (const auto& [chain, terms] : buckets) {
    os << '[';
    for (std::size_t k = 0; k < chain.size(); ++k) os << (k ? " < " : "") << element_name(chain[k]);
    os << "]:";
    for (const auto& [m, c] : terms) {
      os << ' ' << (c < 0 ? "- " : "+ ") << mpq_class(abs(c)).get_str();
      for (const Factor& f : m) {
        if (f.alpha) os << '*' << element_name(f.var) << (f.alpha > 1 ? "^" + std::to_string(f.alpha) : "");
        if (f.beta) os << "*exp(" << f.beta << '*' << element_name(f.var) << ')';
      }
    }
    os << '\n';
  }
  return os.str();
}

Sum multiply(const Sum& a, const Sum& b, const Budgets& budgets) {
  Sum r;
  std::vector<Chain> merged;
  for (const auto& [ca, ta] : a.buckets)
    for (const auto& [cb, tb] : b.buckets) {
      merged.clear();
      merge_chains(ca, cb, merged);
      if (merged.empty()) continue;
      Terms prod;
      for (const auto& [ma, qa] : ta)
        for (const auto& [mb, qb] : tb) {
          mpq_class q = qa * qb;
          auto [it, fresh] = prod.try_emplace(mono_mul(ma, mb), q);
          if (!fresh) it->second += q;
        }
      for (const Chain& c : merged) {
        for (const auto& [m, q] : prod) r.add(c, m, q);
        if (r.regions() > budgets.max_regions) check(r, budgets);
      }
    }
  check(r, budgets);
  return r;
}

Sum differentiate(const Sum& s, int v) {
  Sum r;
  Monomial rest;
  for (const auto& [chain, terms] : s.buckets)
    for (const auto& [m, c] : terms) {
      Factor f = take(m, v, rest);
      if (f.alpha > 0) {
        Monomial d = mono_mul(rest, {Factor{v, f.alpha - 1, f.beta}});
        r.add(chain, d, c * f.alpha);
      }
      if (f.beta != 0) r.add(chain, m, c * f.beta);
    }
  return r;
}

Sum integrate_out(const Sum& s, int v, const Budgets& budgets) {
  constexpr int kMinusInf = -100, kPlusInf = -101;
  Sum r;
  Monomial rest;
  for (const auto& [chain, terms] : s.buckets) {
    auto it = std::find(chain.begin(), chain.end(), v);
    if (it == chain.end())
      throw InvariantError("divergent integral: " + element_name(v) + " is unbounded");
    int lo = it == chain.begin() ? kMinusInf : *(it - 1);
    int hi = it + 1 == chain.end() ? kPlusInf : *(it + 1);
    Chain reduced(chain.begin(), it);
    reduced.insert(reduced.end(), it + 1, chain.end());
    for (const auto& [m, c] : terms) {
      Factor f = take(m, v, rest);
      // Antiderivative pieces (alpha', beta, coefficient).
      std::vector<std::tuple<int, int, mpq_class>> pieces;
      if (f.beta == 0) {
        pieces.emplace_back(f.alpha + 1, 0, mpq_class(1, f.alpha + 1));
      } else {
        mpq_class coef(1, 1);
        mpq_class inv_beta(1, f.beta);
        inv_beta.canonicalize();
        coef = inv_beta;
        for (int j = 0; j <= f.alpha; ++j) {
          pieces.emplace_back(f.alpha - j, f.beta, coef);
          coef *= -mpq_class(f.alpha - j) * inv_beta;
        }
      }
      for (const auto& [pa, pb, pc] : pieces) {
        for (int side = 0; side < 2; ++side) {
          int bound = side == 0 ? hi : lo;
          mpq_class sign = side == 0 ? 1 : -1;
          if (bound == kPlusInf) {
            if (pb >= 0) throw InvariantError("divergent integral in " + element_name(v) + " at +inf");
            continue;
          }
          if (bound == kMinusInf) {
            if (pb <= 0) throw InvariantError("divergent integral in " + element_name(v) + " at -inf");
            continue;
          }
          if (bound == kZero) {
            if (pa == 0) r.add(reduced, rest, sign * c * pc);
            continue;
          }
          Monomial at = mono_mul(rest, {Factor{bound, pa, pb}});
          r.add(reduced, at, sign * c * pc);
        }
      }
    }
    if (r.terms() > budgets.max_terms) check(r, budgets);
  }
  check(r, budgets);
  return r;
}

Sum substitute(const Sum& s, int v, int target) {
  if (v == target) return s;
  Sum r;
  Monomial rest;
  for (const auto& [chain, terms] : s.buckets) {
    Chain c = chain;
    auto iv = std::find(c.begin(), c.end(), v);
    auto it = std::find(c.begin(), c.end(), target);
    if (iv != c.end()) {
      if (it == c.end()) {
        *iv = target;
      } else {
        if (iv + 1 != it) continue;
        c.erase(iv);
      }
      if (!chain_ok(c)) continue;
    }
    for (const auto& [m, q] : terms) {
      Factor f = take(m, v, rest);
      if (target == kZero) {
        if (f.alpha > 0) continue;
        r.add(c, rest, q);
      } else if (f.alpha == 0 && f.beta == 0) {
        r.add(c, rest, q);
      } else {
        r.add(c, mono_mul(rest, {Factor{target, f.alpha, f.beta}}), q);
      }
    }
  }
  return r;
}

Sum refine(const Sum& s, const std::vector<int>& elements, const Budgets& budgets) {
  Sum r = s;
  for (int e : elements) r = multiply(r, Sum::guard({e}), budgets);
  return r;
}

Sum truncate_total_degree(const Sum& s, int tau) {
  Sum r;
  for (const auto& [chain, terms] : s.buckets)
    for (const auto& [m, c] : terms) {
      int deg = 0;
      for (const Factor& f : m) {
        if (f.beta != 0) throw InputError("truncate_total_degree needs a polynomial payload");
        if (f.var != kX) deg += f.alpha;
      }
      if (deg <= tau) r.add(chain, m, c);
    }
  return r;
}

Value evaluate(const Sum& s, const std::map<int, mpq_class>& assignment, const mpq_class& x) {
  auto value_of = [&](int e) -> mpq_class {
    if (e == kZero) return 0;
    if (e == kX) return x;
    auto it = assignment.find(e);
    if (it == assignment.end()) throw InputError("evaluate: no value for " + element_name(e));
    return it->second;
  };
  std::map<mpq_class, mpq_class> by_exponent;
  for (const auto& [chain, terms] : s.buckets) {
    bool inside = true;
    for (std::size_t k = 0; k + 1 < chain.size() && inside; ++k)
      inside = value_of(chain[k]) < value_of(chain[k + 1]);
    if (!inside) continue;
    for (const auto& [m, c] : terms) {
      mpq_class coef = c, expo = 0;
      for (const Factor& f : m) {
        mpq_class val = value_of(f.var);
        for (int a = 0; a < f.alpha; ++a) coef *= val;
        expo += f.beta * val;
      }
      by_exponent[expo] += coef;
    }
  }
  mpfr_t acc, term, e, mag;
  mpfr_inits2(256, acc, term, e, mag, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(acc, 1);
  mpfr_set_zero(mag, 1);
  for (const auto& [expo, coef] : by_exponent) {
    if (coef == 0) continue;
    mpfr_set_q(e, expo.get_mpq_t(), MPFR_RNDN);
    mpfr_exp(e, e, MPFR_RNDN);
    mpfr_set_q(term, coef.get_mpq_t(), MPFR_RNDN);
    mpfr_mul(term, term, e, MPFR_RNDN);
    mpfr_add(acc, acc, term, MPFR_RNDN);
    mpfr_abs(term, term, MPFR_RNDN);
    mpfr_add(mag, mag, term, MPFR_RNDN);
  }
  Value v;
  v.value = mpfr_get_d(acc, MPFR_RNDN);
  // Each rounded operation contributes at most a few ulps at 256 bits.
  double scale = mpfr_get_d(mag, MPFR_RNDU);
  v.radius = scale * std::ldexp(1.0, -248) * static_cast<double>(4 * by_exponent.size() + 4) +
             std::fabs(v.value) * std::ldexp(1.0, -53);
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "%.30Rg", acc);
  v.digits = buf;
  mpfr_clears(acc, term, e, mag, static_cast<mpfr_ptr>(nullptr));
  return v;
}

}  // namespace stochlp::sym
