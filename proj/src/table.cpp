#include "stochlp/errors.hpp"
#include "stochlp/fptas.hpp"

#include <algorithm>

namespace stochlp {

int StaircaseTable::position(int var) const {
  auto it = std::lower_bound(vars.begin(), vars.end(), var);
  if (it == vars.end() || *it != var) return -1;
  return static_cast<int>(it - vars.begin());
}

std::size_t StaircaseTable::offset(const std::vector<int>& g) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < vars.size(); ++k) off = off * extent[k] + g[k];
  return off;
}

StaircaseTable StaircaseTable::scalar(double v, GridSpec grid) {
  StaircaseTable t;
  t.values = {v};
  t.grid = grid;
  return t;
}

namespace {

std::vector<std::size_t> strides(const StaircaseTable& t) {
  std::vector<std::size_t> s(t.vars.size(), 1);
  for (int k = static_cast<int>(t.vars.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * t.extent[k + 1];
  return s;
}

StaircaseTable without(const StaircaseTable& t, int pos) {
  StaircaseTable r;
  r.grid = t.grid;
  r.cumulative = t.cumulative;
  for (std::size_t k = 0; k < t.vars.size(); ++k) {
    if (static_cast<int>(k) == pos) continue;
    r.vars.push_back(t.vars[k]);
    r.is_source.push_back(t.is_source[k]);
    r.extent.push_back(t.extent[k]);
  }
  return r;
}

}  // namespace

StaircaseTable fix_var(const StaircaseTable& t, int var, int index) {
  int p = t.position(var);
  if (p < 0) return t;
  if (index < 0 || index >= t.extent[p]) throw InvariantError("fixed index outside table extent");
  StaircaseTable r = without(t, p);
  auto st = strides(t);
  std::size_t inner = st[p], outer = t.values.size() / (inner * t.extent[p]);
  r.values.resize(outer * inner);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i)
      r.values[o * inner + i] = t.values[(o * t.extent[p] + index) * inner + i];
  return r;
}

StaircaseTable backward_difference(const StaircaseTable& t, int var) {
  int p = t.position(var);
  if (p < 0) throw InvariantError("difference along a variable the table lacks");
  StaircaseTable r = t;
  r.cumulative = false;
  auto st = strides(t);
  std::size_t inner = st[p], ext = t.extent[p], outer = t.values.size() / (inner * ext);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t g = 1; g < ext; ++g)
      for (std::size_t i = 0; i < inner; ++i) {
        std::size_t at = (o * ext + g) * inner + i;
        r.values[at] = t.values[at] - t.values[at - inner];
      }
  return r;
}

StaircaseTable finite_difference(const StaircaseTable& t, const std::vector<int>& source_vars) {
  StaircaseTable cur = t;
  for (int var : source_vars) {
    int p = cur.position(var);
    if (p < 0) throw InputError("finite_difference: variable not in table");
    if (cur.extent[p] < 2) throw InputError("finite_difference: extent too small");
    auto st = strides(cur);
    std::size_t inner = st[p], ext = cur.extent[p], outer = cur.values.size() / (inner * ext);
    StaircaseTable r = cur;
    r.extent[p] = static_cast<int>(ext - 1);
    r.values.assign(outer * (ext - 1) * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t g = 0; g + 1 < ext; ++g)
        for (std::size_t i = 0; i < inner; ++i)
          r.values[(o * (ext - 1) + g) * inner + i] =
              cur.values[(o * ext + g + 1) * inner + i] - cur.values[(o * ext + g) * inner + i];
    cur = std::move(r);
  }
  cur.cumulative = false;
  return cur;
}

double accumulate(const StaircaseTable& t) {
  double sum = 0;
  std::vector<int> g(t.vars.size(), 0);
  for (std::size_t idx = 0; idx < t.values.size(); ++idx) {
    bool keep = true;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (!t.is_source[k] && g[k] != 0) keep = false;
    if (keep) sum += t.values[idx];
    for (int k = static_cast<int>(g.size()) - 1; k >= 0; --k) {
      if (++g[k] < t.extent[k]) break;
      g[k] = 0;
    }
  }
  return sum;
}

StaircaseTable contract(const std::vector<const StaircaseTable*>& factors,
                        const std::vector<int>& sum_vars, std::uint64_t max_entries,
                        bool parallel) {
  GridSpec grid = factors.empty() ? GridSpec{} : factors[0]->grid;
  std::vector<int> all;
  for (auto* f : factors) all.insert(all.end(), f->vars.begin(), f->vars.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  StaircaseTable out;
  out.grid = grid;
  out.cumulative = true;
  std::vector<int> summed, sum_extent;
  std::vector<int> union_extent(all.size(), 0);
  std::vector<int> role(all.size(), -1);
  for (std::size_t u = 0; u < all.size(); ++u) {
    for (auto* f : factors) {
      int p = f->position(all[u]);
      if (p < 0) continue;
      if (union_extent[u] && union_extent[u] != f->extent[p])
        throw InvariantError("extent mismatch on shared variable");
      union_extent[u] = f->extent[p];
      bool is_sum = std::find(sum_vars.begin(), sum_vars.end(), all[u]) != sum_vars.end();
      if (!is_sum && role[u] >= 0 && role[u] != f->is_source[p])
        throw InvariantError("shared variable with conflicting roles");
      role[u] = f->is_source[p];
    }
  }
  for (int v : sum_vars)
    if (!std::binary_search(all.begin(), all.end(), v))
      throw InvariantError("summed variable absent from every factor");

  // Union layout: output vars first, then summed vars.
  std::vector<int> layout;
  for (std::size_t u = 0; u < all.size(); ++u) {
    bool is_sum = std::find(sum_vars.begin(), sum_vars.end(), all[u]) != sum_vars.end();
    if (is_sum) {
      summed.push_back(static_cast<int>(u));
      sum_extent.push_back(union_extent[u]);
    } else {
      layout.push_back(static_cast<int>(u));
      out.vars.push_back(all[u]);
      out.is_source.push_back(static_cast<char>(role[u]));
      out.extent.push_back(union_extent[u]);
    }
  }
  std::uint64_t out_size = 1, sum_size = 1;
  for (int e : out.extent) {
    out_size *= e;
    if (out_size > max_entries) throw BudgetError("table size exceeds budget");
  }
  for (int e : sum_extent) sum_size *= e;
  if (sum_size > max_entries || out_size * sum_size > max_entries)
    throw BudgetError("merge work exceeds budget (" + std::to_string(out_size) + " x " +
                      std::to_string(sum_size) + ")");

  // stride[f][u]: contribution of union var u to factor f's offset.
  std::size_t nf = factors.size();
  std::vector<std::vector<std::size_t>> stride(nf, std::vector<std::size_t>(all.size(), 0));
  for (std::size_t f = 0; f < nf; ++f) {
    auto st = strides(*factors[f]);
    for (std::size_t u = 0; u < all.size(); ++u) {
      int p = factors[f]->position(all[u]);
      if (p >= 0) stride[f][u] = st[p];
    }
  }
  out.values.assign(out_size, 0.0);
  const std::int64_t total = static_cast<std::int64_t>(out_size);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::vector<std::size_t> base(nf, 0);
    std::uint64_t rest = static_cast<std::uint64_t>(idx);
    for (int k = static_cast<int>(layout.size()) - 1; k >= 0; --k) {
      int g = static_cast<int>(rest % out.extent[k]);
      rest /= out.extent[k];
      for (std::size_t f = 0; f < nf; ++f) base[f] += stride[f][layout[k]] * g;
    }
    double acc = 0;
    std::vector<int> g(summed.size(), 0);
    std::vector<std::size_t> off = base;
    for (std::uint64_t s = 0; s < sum_size; ++s) {
      double prod = 1;
      for (std::size_t f = 0; f < nf; ++f) prod *= factors[f]->values[off[f]];
      acc += prod;
      for (int k = static_cast<int>(summed.size()) - 1; k >= 0; --k) {
        int u = summed[k];
        if (++g[k] < sum_extent[k]) {
          for (std::size_t f = 0; f < nf; ++f) off[f] += stride[f][u];
          break;
        }
        for (std::size_t f = 0; f < nf; ++f) off[f] -= stride[f][u] * (sum_extent[k] - 1);
        g[k] = 0;
      }
    }
    out.values[idx] = acc;
  }
  return out;
}

}  // namespace stochlp
