#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lqg {

/// A two-coordinate path given by its step increments (dL, dR).  Lattice
/// walks use unit steps (+-1 in exactly one coordinate); Brownian-motion
/// proxies use real increments.
struct Walk2D {
  std::vector<std::array<double, 2>> steps;

  std::size_t size() const { return steps.size(); }
};

struct WalkError : std::runtime_error {
  std::size_t index;
  WalkError(const std::string& what, std::size_t idx)
      : std::runtime_error(what + " (step " + std::to_string(idx) + ")"), index(idx) {}
};

/// Throws WalkError with the first offending step unless the walk is a
/// quadrant excursion: unit lattice steps, both partial sums nonnegative,
/// both ending at zero, even length.
void validate_quadrant_excursion(const Walk2D& w);

/// Rooted combinatorial planar map stored as a half-edge structure: edge e
/// owns half-edges 2e (at its first endpoint) and 2e+1; each vertex keeps
/// its incident half-edges in rotation order.  Edges may be marked as
/// spanning-tree edges; the root is a distinguished half-edge (-1 when the
/// map has no edges).
class PlanarMapGraph {
 public:
  explicit PlanarMapGraph(int vertices = 1);

  int num_vertices() const { return static_cast<int>(rot_.size()); }
  int num_edges() const { return static_cast<int>(origin_.size() / 2); }
  int root() const { return root_; }
  void set_root(int half_edge);

  static int twin(int h) { return h ^ 1; }
  static int edge_of(int h) { return h >> 1; }
  int origin(int h) const { return origin_[h]; }
  int endpoint(int e) const { return origin_[2 * e]; }      // first endpoint
  int endpoint2(int e) const { return origin_[2 * e + 1]; }
  bool on_tree(int e) const { return tree_[e] != 0; }
  void set_tree(int e, bool t) { tree_[e] = t; }
  const std::vector<int>& rotation(int v) const { return rot_[v]; }
  /// Successor of h in the rotation at its origin.
  int rot_next(int h) const;

  int add_vertex();
  /// Appends a new edge u-v to both rotations; returns the edge index.
  int add_edge(int u, int v, bool tree = false);
  /// Half-open edge construction used by the walk decoder: opens an edge at
  /// u (appending half-edge 2e to u's rotation) whose far side is attached
  /// later by close_edge.
  int open_edge(int u, bool tree);
  void close_edge(int e, int v);

  int degree(int v) const { return static_cast<int>(rot_[v].size()); }
  /// (neighbor, multiplicity) pairs, ascending neighbor index.
  std::vector<std::pair<int, int>> neighbors(int v) const;
  /// Number of distinct unordered adjacent vertex pairs.
  int num_simple_edges() const;
  bool connected() const;
  /// True when the marked edges form a spanning tree.
  bool tree_marks_valid() const;

 private:
  std::vector<int> origin_;
  std::vector<std::vector<int>> rot_;
  std::vector<int> rot_pos_;  // position of each half-edge inside its rotation
  std::vector<std::uint8_t> tree_;
  int root_ = -1;
};

/// Mullin decoding: the tree-decorated rooted map whose tree / dual-tree
/// contour exploration emits the walk; e1 steps traverse tree edges, e2
/// steps cross dual-tree edges, both matched last-in first-out.
PlanarMapGraph mullin_decode(const Walk2D& walk);

/// Inverse direction: contour exploration of the decorated map.
Walk2D mullin_encode(const PlanarMapGraph& map);

/// Uniform quadrant excursion of length 2*nedges: the e1/e2 interleaving is
/// drawn from its exact law and each coordinate's sign sequence is a uniform
/// Dyck path obtained by the cycle-lemma rotation of a uniform bridge.
Walk2D sample_quadrant_excursion(int nedges, std::uint64_t seed);

/// Uniform spanning-tree-decorated rooted planar map with nedges edges.
PlanarMapGraph sample_tree_decorated_map(int nedges, std::uint64_t seed);

/// Per-step correlation of the Brownian proxy: -cos(pi*gamma^2/4).
double walk_step_correlation(double gamma);

/// Gaussian walk with step covariance [[1, rho], [rho, 1]].
Walk2D sample_correlated_walk(int nsteps, double gamma, std::uint64_t seed);

/// All quadrant excursions of length 2*nedges, in lexicographic step order
/// (step order: +e1, -e1, +e2, -e2).  Exponential in nedges; intended for
/// nedges <= 5.
std::vector<Walk2D> enumerate_quadrant_excursions(int nedges);

/// Mated-CRT map on nvertices cells of the walk: i < j are adjacent when
/// either coordinate X satisfies the chord condition
///   max(min(X[i-1], X[i]), min(X[j-1], X[j])) < min over [i, j-1] of X,
/// or when j = i+1 (consecutive cells, by convention, in each coordinate).
/// One graph edge is added per qualifying coordinate, so parallel edges
/// carry the multiplicity.  The strict inequality matters: interpolated
/// walks reach gap infima exactly at cell boundaries, and counting those
/// coincidences as chords crosses the chord diagram and breaks planarity.
PlanarMapGraph mated_crt_map(const Walk2D& walk, int nvertices);

}  // namespace lqg
