#pragma once

#include "stochlp/graph.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stochlp {

// Bags hold 0-based vertex ids. The root is bag `root` (0 unless stated).
struct TreeDecomposition {
  std::vector<std::vector<int>> bags;
  std::vector<std::pair<int, int>> tree_edges;
  int root = 0;
  int declared_width = -1;

  int width() const;
  int size() const { return static_cast<int>(bags.size()); }
  // Children lists when rooted at `root`; throws InputError if not a tree.
  std::vector<std::vector<int>> children() const;
  std::vector<int> parents() const;
};

// PACE .td text. Vertices stay in file numbering minus one; use
// to_internal() to follow a Dag's topological relabelling.
TreeDecomposition parse_td(const std::string& text);
std::string write_td(const TreeDecomposition& td, int n, const Dag* labels_from = nullptr);
TreeDecomposition to_internal(const TreeDecomposition& td, const Dag& g);

struct TdCheck {
  bool ok = true;
  int condition = 0;  // 0 tree shape, 1 cover, 2 edges, 3 connectivity
  std::string message;
  std::vector<int> witness;
};

TdCheck validate_td(const Dag& g, const TreeDecomposition& td);

TreeDecomposition heuristic_td(const Dag& g);

// At most two children per bag, at most 4n bags, same width. Identity on
// input that is already binary and small enough.
TreeDecomposition binarize_td(const TreeDecomposition& td, int n);

struct Separated {
  Dag graph;
  TreeDecomposition td;
  std::vector<int> original;  // separated vertex -> original vertex
  std::vector<int> copy;      // 0 = minus, 1 = star, 2 = plus
  std::vector<int> edge_of;   // original edge -> separated edge
};

inline int minus_copy(int v) { return 3 * v; }
inline int star_copy(int v) { return 3 * v + 1; }
inline int plus_copy(int v) { return 3 * v + 2; }

// Vertex tripling v -> v-, v*, v+ joined by zero-length edges. Incoming
// edges enter v-. An outgoing edge leaves v* when its owning bag (ancestor
// first) is the topmost bag containing v, and v+ otherwise.
Separated separate(const Dag& g, const TreeDecomposition& binary_td);

// Owning bag of every edge: the topmost bag holding both endpoints.
std::vector<int> edge_owners(const Dag& g, const TreeDecomposition& td);

struct DecompositionContext {
  Dag graph;
  TreeDecomposition td;
  std::vector<int> parent;
  std::vector<std::vector<int>> children;
  std::vector<int> postorder;
  std::vector<std::vector<char>> in_bag;  // in_bag[i][v]

  std::vector<std::vector<int>> bag_edges;  // E(G_i)
  std::vector<std::vector<int>> S, T, I;    // of G_i
  std::vector<std::vector<int>> SU, TU, IU; // of U_i
  std::vector<std::vector<int>> SD, TD, ID; // of D_i
  std::vector<std::vector<int>> Sp, Tp, J;  // S'_i, T'_i, J_i
  std::vector<std::vector<int>> frozen_sources, frozen_terminals;
  std::vector<int> subtree_vertices;

  int bags() const { return td.size(); }
  bool in_parent(int i, int v) const { return parent[i] >= 0 && in_bag[parent[i]][v]; }
};

// Derives every per-bag set and checks the structural invariants; throws
// InvariantError listing the first violations.
DecompositionContext build_context(const Dag& g, const TreeDecomposition& binary_td);

// The invariant checks used by build_context, reported rather than thrown.
std::vector<std::string> check_context(const DecompositionContext& ctx);

// Overlaps S_i∩S(U_i), T_i∩T(U_i) of vertices still in the parent bag.
// They are legal here and counted for reporting only.
int shared_boundary_overlaps(const DecompositionContext& ctx);

struct Prepared {
  DecompositionContext ctx;
  int original_width = 0;
  int separated_width = 0;
  int separated_n = 0;
  std::vector<int> original;  // separated vertex -> original vertex
};

// validate -> binarize -> separate -> build_context. A missing td falls
// back to heuristic_td.
Prepared prepare(const Dag& g, const std::optional<TreeDecomposition>& td);

}  // namespace stochlp
