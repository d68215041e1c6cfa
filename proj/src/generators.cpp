#include "stochlp/generators.hpp"

#include "stochlp/errors.hpp"

#include <algorithm>
#include <random>

namespace stochlp {

DistSpec parse_dist_option(const std::string& text) {
  if (text == "exp") return DistSpec::exponential();
  if (text == "uniform") return DistSpec::uniform(1);
  if (text.rfind("uniform:", 0) == 0) {
    int a = 0;
    try {
      std::size_t used = 0;
      a = std::stoi(text.substr(8), &used);
      if (used != text.size() - 8) a = 0;
    } catch (const std::exception&) {
      a = 0;
    }
    if (a < 1) throw InputError("bad uniform scale in '" + text + "'");
    return DistSpec::uniform(a);
  }
  if (text.rfind("oracle:", 0) == 0 && text.size() > 7) return DistSpec::named(text.substr(7));
  throw InputError("unknown distribution '" + text + "' (uniform, uniform:A, exp, oracle:NAME)");
}

Instance gen_chain(int n, const DistSpec& dist) {
  if (n < 2) throw InputError("chain needs n >= 2");
  std::vector<Edge> edges;
  TreeDecomposition td;
  for (int v = 0; v + 1 < n; ++v) {
    edges.push_back({v, v + 1, dist});
    td.bags.push_back({v, v + 1});
    if (v > 0) td.tree_edges.push_back({v - 1, v});
  }
  return {Dag(n, std::move(edges)), td};
}

Instance gen_diamond_ladder(int diamonds, const DistSpec& dist) {
  if (diamonds < 1) throw InputError("diamond-ladder needs at least one diamond");
  std::vector<Edge> edges;
  TreeDecomposition td;
  for (int d = 0; d < diamonds; ++d) {
    int s = 3 * d, a = s + 1, b = s + 2, t = s + 3;
    edges.push_back({s, a, dist});
    edges.push_back({s, b, dist});
    edges.push_back({a, t, dist});
    edges.push_back({b, t, dist});
    int first = static_cast<int>(td.bags.size());
    td.bags.push_back({s, a, t});
    td.bags.push_back({s, b, t});
    td.tree_edges.push_back({first, first + 1});
    if (d > 0) td.tree_edges.push_back({first - 1, first});
  }
  return {Dag(3 * diamonds + 1, std::move(edges)), td};
}

Instance gen_random_tw(int k, int n, std::uint64_t seed, const DistSpec& dist) {
  if (k < 1) throw InputError("random-tw needs k >= 1");
  if (n < k + 1) throw InputError("random-tw needs n >= k + 1");
  std::mt19937_64 rng(seed);
  auto below = [&](std::uint64_t bound) { return rng() % bound; };
  std::vector<std::pair<int, int>> pairs;
  TreeDecomposition td;
  // Initial clique 0..k; keep its spanning path so nothing is isolated.
  std::vector<int> first(k + 1);
  for (int v = 0; v <= k; ++v) first[v] = v;
  td.bags.push_back(first);
  for (int u = 0; u <= k; ++u)
    for (int v = u + 1; v <= k; ++v)
      if (v == u + 1 || below(2)) pairs.push_back({u, v});
  for (int v = k + 1; v < n; ++v) {
    int host = static_cast<int>(below(td.bags.size()));
    std::vector<int> clique = td.bags[host];
    // Drop one member so that the new bag has k + 1 vertices.
    if (static_cast<int>(clique.size()) == k + 1) clique.erase(clique.begin() + static_cast<long>(below(clique.size())));
    std::vector<int> keep;
    for (int u : clique)
      if (below(2)) keep.push_back(u);
    if (keep.empty()) keep.push_back(clique[below(clique.size())]);
    for (int u : keep) pairs.push_back({u, v});
    clique.push_back(v);
    td.bags.push_back(clique);
    td.tree_edges.push_back({host, static_cast<int>(td.bags.size()) - 1});
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<Edge> edges;
  for (auto [u, v] : pairs) edges.push_back({u, v, dist});
  return {Dag(n, std::move(edges)), td};
}

Instance generate(const std::string& shape, int n, int k, std::uint64_t seed, const DistSpec& dist) {
  if (shape == "chain") return gen_chain(n, dist);
  if (shape == "diamond-ladder") return gen_diamond_ladder(n, dist);
  if (shape == "random-tw") return gen_random_tw(k, n, seed, dist);
  throw InputError("unsupported shape '" + shape + "' (chain, diamond-ladder, random-tw)");
}

}  // namespace stochlp
