#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lqg/grid_field.hpp"

namespace lqg {

struct Vertex {
  int i = 0;
  int j = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Per-vertex weights w(z) = exp(xi * h_eps(z)) with xi = gamma/dgamma.
struct WeightGrid {
  int n = 0;
  double spacing = 0.0;
  double gamma = 0.0;
  double dgamma = 0.0;
  double eps = 0.0;
  std::vector<double> w;

  double at(int i, int j) const { return w[static_cast<std::size_t>(i) * n + j]; }
};

WeightGrid lfpp_weights(const GridField& mollified_field, double gamma, double dgamma);

/// Single-source shortest-path field.  Traversing edge (u,v) costs
/// (w(u)+w(v))/2 * |step| * spacing on the 8-connected grid (|step| is 1 or
/// sqrt(2)).  Distances are exact Dijkstra values; pred links realize them.
struct MetricField {
  int n = 0;
  double spacing = 0.0;
  Vertex source;
  std::vector<double> dist;
  std::vector<std::int32_t> pred;  // flat predecessor index, -1 at source

  double dist_at(int i, int j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
  double max_dist() const;
};

MetricField distance_field(const WeightGrid& weights, Vertex source);

/// mask[z] = dist(z) <= r, row-major n*n.
std::vector<std::uint8_t> metric_ball(const MetricField& mf, double r);

/// Predecessor chain from target back to the source, returned source-first.
std::vector<Vertex> geodesic(const MetricField& mf, Vertex target);

struct GeodesicTree {
  /// Distinct predecessor edges (child flat index, parent flat index).
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  std::vector<double> shell_radii;
  /// Number of distinct tree edges (u=parent, v=child) with
  /// dist(u) <= r < dist(v), per shell radius.
  std::vector<int> shell_crossings;
};

GeodesicTree geodesic_tree(const MetricField& mf, std::span<const Vertex> targets,
                           std::span<const double> shell_radii);

}  // namespace lqg
