#include "stochlp/oracles.hpp"

#include <cmath>

namespace stochlp {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class Sampler { Uniform, Exponential, Zero };

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint64_t edge) {
  std::uint64_t h = splitmix64(splitmix64(seed) ^ splitmix64(sample + 0x632be59bd9b4e019ULL));
  h = splitmix64(h + edge);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

McResult monte_carlo(const Dag& g, double x, std::uint64_t samples, std::uint64_t seed) {
  if (g.m() == 0) throw InputError("graph has no edges");
  if (samples == 0) throw InputError("need at least one sample");
  std::vector<Sampler> kind(g.m());
  std::vector<double> scale(g.m(), 1.0);
  for (int e = 0; e < g.m(); ++e) {
    const DistSpec& d = g.edge(e).dist;
    switch (d.kind) {
      case DistKind::Uniform: kind[e] = Sampler::Uniform; scale[e] = d.a; break;
      case DistKind::Exponential: kind[e] = Sampler::Exponential; break;
      case DistKind::Zero: kind[e] = Sampler::Zero; break;
      case DistKind::Oracle:
        if (d.oracle == "expcdf") kind[e] = Sampler::Exponential;
        else if (d.oracle == "unitslab") kind[e] = Sampler::Uniform;
        else throw InputError("cannot sample oracle '" + d.oracle + "'");
        break;
    }
  }
  std::vector<int> ids(g.m());
  for (int e = 0; e < g.m(); ++e) ids[e] = e;
  std::vector<char> src(g.n(), 0), term(g.n(), 0);
  for (int s : g.sources()) src[s] = 1;
  for (int t : g.terminals()) term[t] = 1;
  const std::vector<double> zeros(g.n(), 0.0);

  std::uint64_t hits = 0;
  const auto total = static_cast<std::int64_t>(samples);
#pragma omp parallel
  {
    std::vector<double> len(g.m());
#pragma omp for reduction(+ : hits) schedule(static)
    for (std::int64_t k = 0; k < total; ++k) {
      for (int e = 0; e < g.m(); ++e) {
        double u = counter_uniform(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(e));
        switch (kind[e]) {
          case Sampler::Uniform: len[e] = scale[e] * u; break;
          case Sampler::Exponential: len[e] = -std::log1p(-u); break;
          case Sampler::Zero: len[e] = 0; break;
        }
      }
      if (static_longest_path(g, ids, len, src, term, zeros, zeros) <= x) ++hits;
    }
  }
  McResult r;
  r.hits = hits;
  r.samples = samples;
  r.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  r.stderr_ = std::sqrt(r.estimate * (1 - r.estimate) / static_cast<double>(samples));
  return r;
}

}  // namespace stochlp
