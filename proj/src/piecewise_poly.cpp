#include "stochlp/numeric.hpp"
#include "stochlp/oracles.hpp"

#include <algorithm>

namespace stochlp {

namespace {

using Poly = std::vector<mpq_class>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

mpq_class poly_eval(const Poly& p, const mpq_class& t) {
  mpq_class r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * t + *it;
  return r;
}

// Bounds of the s-integral: c or t - c.
struct Bound {
  bool moving;
  mpq_class c;
  mpq_class at(const mpq_class& t) const { return moving ? t - c : c; }
};

// G(t, s) as rows by power of s, each a polynomial in t.
using Bivariate = std::vector<Poly>;

Poly substitute_bound(const Bivariate& g, const Bound& b) {
  Poly r, power{1};
  const Poly lin = b.moving ? Poly{-b.c, 1} : Poly{b.c};
  for (const Poly& row : g) {
    Poly term = poly_mul(row, power);
    if (term.size() > r.size()) r.resize(term.size());
    for (std::size_t i = 0; i < term.size(); ++i) r[i] += term[i];
    power = poly_mul(power, lin);
  }
  trim(r);
  return r;
}

// Antiderivative in s of p(s) q(t - s).
Bivariate kernel_antiderivative(const Poly& p, const Poly& q) {
  std::size_t deg_s = (p.empty() ? 0 : p.size() - 1) + (q.empty() ? 0 : q.size() - 1);
  Bivariate b(deg_s + 1);
  for (std::size_t k = 0; k < q.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j) {
      // q_k C(k,j) t^{k-j} (-s)^j
      mpq_class c = q[k] * mpq_class(binomial(k, j));
      if (j % 2) c = -c;
      for (std::size_t i = 0; i < p.size(); ++i) {
        Poly& row = b[i + j];
        if (row.size() < k - j + 1) row.resize(k - j + 1);
        row[k - j] += c * p[i];
      }
    }
  Bivariate g(b.size() + 1);
  for (std::size_t j = 0; j < b.size(); ++j) {
    g[j + 1] = b[j];
    for (auto& v : g[j + 1]) v /= static_cast<long>(j + 1);
  }
  return g;
}

}  // namespace

PiecewisePoly PiecewisePoly::uniform_cdf(const mpq_class& a) {
  if (a <= 0) throw InputError("uniform scale must be positive");
  return {{0, a}, {{0, 1 / a}, {1}}};
}

PiecewisePoly PiecewisePoly::step() { return {{0}, {{1}}}; }

mpq_class PiecewisePoly::operator()(const mpq_class& t) const {
  if (t < 0) return 0;
  std::size_t i = std::upper_bound(breaks.begin(), breaks.end(), t) - breaks.begin() - 1;
  return poly_eval(coeffs[i], t);
}

PiecewisePoly PiecewisePoly::derivative() const {
  PiecewisePoly d{breaks, {}};
  for (const Poly& p : coeffs) {
    Poly q;
    for (std::size_t i = 1; i < p.size(); ++i) q.push_back(p[i] * static_cast<long>(i));
    trim(q);
    d.coeffs.push_back(q);
  }
  return d;
}

void PiecewisePoly::simplify() {
  for (auto& p : coeffs) trim(p);
  PiecewisePoly r{{breaks[0]}, {coeffs[0]}};
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (coeffs[i] == r.coeffs.back()) continue;
    r.breaks.push_back(breaks[i]);
    r.coeffs.push_back(coeffs[i]);
  }
  *this = std::move(r);
}

PiecewisePoly pp_product(const PiecewisePoly& a, const PiecewisePoly& b) {
  std::vector<mpq_class> br = a.breaks;
  br.insert(br.end(), b.breaks.begin(), b.breaks.end());
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  PiecewisePoly r{br, {}};
  for (const auto& t : br) {
    auto ia = std::upper_bound(a.breaks.begin(), a.breaks.end(), t) - a.breaks.begin() - 1;
    auto ib = std::upper_bound(b.breaks.begin(), b.breaks.end(), t) - b.breaks.begin() - 1;
    r.coeffs.push_back(poly_mul(a.coeffs[ia], b.coeffs[ib]));
  }
  r.simplify();
  return r;
}

PiecewisePoly pp_convolve(const PiecewisePoly& fa, const PiecewisePoly& fb) {
  PiecewisePoly density = fa;
  density.simplify();
  if (!density.coeffs.back().empty()) throw InvariantError("density does not vanish at infinity");
  std::vector<mpq_class> br;
  for (const auto& x : density.breaks)
    for (const auto& y : fb.breaks) br.push_back(x + y);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());

  PiecewisePoly r{br, {}};
  const std::size_t na = density.breaks.size() - 1;  // finite pieces of the density
  for (std::size_t k = 0; k < br.size(); ++k) {
    mpq_class probe = br[k] + 1;
    if (k + 1 < br.size()) probe = (br[k] + br[k + 1]) / 2;
    Poly acc;
    for (std::size_t i = 0; i < na; ++i) {
      if (density.coeffs[i].empty()) continue;
      for (std::size_t j = 0; j < fb.breaks.size(); ++j) {
        if (fb.coeffs[j].empty()) continue;
        // s in [a_i, a_{i+1}) and t - s in [b_j, b_{j+1}).
        Bound lo{false, density.breaks[i]}, hi{false, density.breaks[i + 1]};
        if (j + 1 < fb.breaks.size() && probe - fb.breaks[j + 1] > lo.c) lo = {true, fb.breaks[j + 1]};
        if (probe - fb.breaks[j] < hi.c) hi = {true, fb.breaks[j]};
        if (lo.at(probe) >= hi.at(probe)) continue;
        Bivariate g = kernel_antiderivative(density.coeffs[i], fb.coeffs[j]);
        Poly up = substitute_bound(g, hi), down = substitute_bound(g, lo);
        if (up.size() > acc.size()) acc.resize(up.size());
        if (down.size() > acc.size()) acc.resize(down.size());
        for (std::size_t q = 0; q < up.size(); ++q) acc[q] += up[q];
        for (std::size_t q = 0; q < down.size(); ++q) acc[q] -= down[q];
      }
    }
    trim(acc);
    r.coeffs.push_back(acc);
  }
  if (r.breaks[0] != 0) {
    r.breaks.insert(r.breaks.begin(), 0);
    r.coeffs.insert(r.coeffs.begin(), Poly{});
  }
  r.simplify();
  return r;
}

mpq_class irwin_hall(int m, const mpq_class& x) {
  if (m < 1) throw InputError("irwin_hall needs m >= 1");
  if (x <= 0) return 0;
  if (x >= m) return 1;
  mpq_class sum = 0;
  for (int k = 0; k <= m && k <= x; ++k) {
    mpq_class d = x - k, p = 1;
    for (int i = 0; i < m; ++i) p *= d;
    mpq_class term = mpq_class(binomial(m, k)) * p;
    sum += k % 2 ? -term : term;
  }
  return sum / mpq_class(factorial(m));
}

}  // namespace stochlp
