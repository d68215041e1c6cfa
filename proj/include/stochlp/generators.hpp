#pragma once

#include "stochlp/tree_decomposition.hpp"

#include <cstdint>
#include <string>

namespace stochlp {

struct Instance {
  Dag graph;
  TreeDecomposition td;  // internal ids, valid for graph
};

// "uniform" (a=1), "uniform:A", "exp" or "oracle:NAME".
DistSpec parse_dist_option(const std::string& text);

// Path 1 -> 2 -> ... -> n with a width-1 decomposition.
Instance gen_chain(int n, const DistSpec& dist);

// `diamonds` diamonds glued end to end: 3*diamonds + 1 vertices, width 2.
Instance gen_diamond_ladder(int diamonds, const DistSpec& dist);

// Random partial k-tree on n vertices, oriented from lower to higher index.
// Every vertex after the first keeps at least one edge to an earlier one.
Instance gen_random_tw(int k, int n, std::uint64_t seed, const DistSpec& dist);

// shape: "chain", "diamond-ladder" or "random-tw" (k used only there).
Instance generate(const std::string& shape, int n, int k, std::uint64_t seed, const DistSpec& dist);

}  // namespace stochlp
