#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace stochlp {

enum class DistKind { Uniform, Exponential, Oracle, Zero };

// Zero is internal only: the zero-length links added by separate().
struct DistSpec {
  DistKind kind = DistKind::Uniform;
  int a = 1;
  std::string oracle;

  static DistSpec uniform(int a) { return {DistKind::Uniform, a, {}}; }
  static DistSpec exponential() { return {DistKind::Exponential, 0, {}}; }
  static DistSpec named(std::string name) { return {DistKind::Oracle, 0, std::move(name)}; }
  static DistSpec zero() { return {DistKind::Zero, 0, {}}; }
  bool operator==(const DistSpec&) const = default;
};

std::string to_string(const DistSpec& d);

struct Edge {
  int u = 0, v = 0;
  DistSpec dist;
};

// Vertices are 0-based and topologically ordered (u < v on every edge).
// label[i] is the 1-based label of internal vertex i in the source file.
class Dag {
 public:
  Dag() = default;
  // Relabels into a topological order; throws InputError on cycles,
  // self loops, duplicate pairs or bad scales. Edges are given 0-based.
  Dag(int n, std::vector<Edge> edges, std::vector<int> labels = {});

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<int>& out(int v) const { return out_[v]; }
  const std::vector<int>& in(int v) const { return in_[v]; }
  int label(int v) const { return labels_[v]; }
  const std::vector<int>& labels() const { return labels_; }
  int find_edge(int u, int v) const;

  std::vector<int> sources() const;
  std::vector<int> terminals() const;
  std::vector<int> isolated() const;
  // The common family of all non-Zero edges; throws InputError if mixed.
  DistKind family() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<int> labels_;
};

Dag parse_graph(const std::string& text);
std::string write_graph(const Dag& g);

constexpr double kNoPath = -std::numeric_limits<double>::infinity();

// Max over source-terminal paths of sum(len) - src_offset[s] + term_offset[t].
// Offsets are indexed by vertex. Returns kNoPath when no such path exists.
double static_longest_path(const Dag& g, const std::vector<double>& len,
                           const std::vector<double>& src_offset,
                           const std::vector<double>& term_offset);

// Same on the subgraph spanned by edge_ids, with the given role flags.
double static_longest_path(const Dag& g, const std::vector<int>& edge_ids,
                           const std::vector<double>& len,
                           const std::vector<char>& is_source,
                           const std::vector<char>& is_terminal,
                           const std::vector<double>& src_offset,
                           const std::vector<double>& term_offset);

struct Classification {
  std::vector<int> sources, terminals, internals;
};

// Local source/terminal rule for the subgraph formed by edge_ids.
Classification classify_subgraph_vertices(const Dag& g, const std::vector<int>& edge_ids);

// All source-terminal paths as vertex sequences, lexicographically sorted.
// Throws InputError once more than `limit` paths exist.
std::vector<std::vector<int>> enumerate_st_paths(const Dag& g, std::size_t limit);

}  // namespace stochlp
