#include "lqg/lfpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace lqg {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;

void check_vertex(int n, Vertex v, const char* who) {
  if (v.i < 0 || v.i >= n || v.j < 0 || v.j >= n)
    throw std::out_of_range(std::string(who) + ": vertex outside grid");
}

}  // namespace

WeightGrid lfpp_weights(const GridField& field, double gamma, double dgamma) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::invalid_argument("lfpp_weights: gamma must lie in (0,2)");
  if (!(dgamma > 2.0))
    throw std::invalid_argument("lfpp_weights: dgamma must be > 2");
  if (field.kind != GridField::Kind::mollified)
    throw std::invalid_argument("lfpp_weights: field must be mollified");
  WeightGrid wg;
  wg.n = field.n;
  wg.spacing = field.spacing;
  wg.gamma = gamma;
  wg.dgamma = dgamma;
  wg.eps = field.eps;
  wg.w.resize(field.values.size());
  const double xi = gamma / dgamma;
  for (std::size_t k = 0; k < field.values.size(); ++k)
    wg.w[k] = std::exp(xi * field.values[k]);
  return wg;
}

double MetricField::max_dist() const {
  double m = 0.0;
  for (double d : dist) m = std::max(m, d);
  return m;
}

MetricField distance_field(const WeightGrid& weights, Vertex source) {
  const int n = weights.n;
  check_vertex(n, source, "distance_field");
  MetricField mf;
  mf.n = n;
  mf.spacing = weights.spacing;
  mf.source = source;
  const std::size_t N = static_cast<std::size_t>(n) * n;
  mf.dist.assign(N, std::numeric_limits<double>::infinity());
  mf.pred.assign(N, -1);

  using Item = std::pair<double, std::int32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  std::vector<std::uint8_t> done(N, 0);
  const std::int32_t s = source.i * n + source.j;
  mf.dist[s] = 0.0;
  heap.push({0.0, s});
  static constexpr int di[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static constexpr int dj[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static constexpr double len[8] = {kSqrt2, 1, kSqrt2, 1, 1, kSqrt2, 1, kSqrt2};
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    const int ui = u / n, uj = u % n;
    const double wu = weights.w[u];
    for (int k = 0; k < 8; ++k) {
      const int vi = ui + di[k], vj = uj + dj[k];
      if (vi < 0 || vi >= n || vj < 0 || vj >= n) continue;
      const std::int32_t v = vi * n + vj;
      if (done[v]) continue;
      const double nd =
          d + 0.5 * (wu + weights.w[v]) * len[k] * weights.spacing;
      if (nd < mf.dist[v]) {
        mf.dist[v] = nd;
        mf.pred[v] = u;
        heap.push({nd, v});
      }
    }
  }
  return mf;
}

std::vector<std::uint8_t> metric_ball(const MetricField& mf, double r) {
  if (r < 0.0) throw std::invalid_argument("metric_ball: r must be >= 0");
  std::vector<std::uint8_t> mask(mf.dist.size(), 0);
  for (std::size_t k = 0; k < mf.dist.size(); ++k) mask[k] = mf.dist[k] <= r;
  return mask;
}

std::vector<Vertex> geodesic(const MetricField& mf, Vertex target) {
  check_vertex(mf.n, target, "geodesic");
  std::int32_t v = target.i * mf.n + target.j;
  if (!std::isfinite(mf.dist[v]))
    throw std::runtime_error("geodesic: target not reached from source");
  std::vector<Vertex> path;
  while (v >= 0) {
    path.push_back({v / mf.n, v % mf.n});
    v = mf.pred[v];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

GeodesicTree geodesic_tree(const MetricField& mf, std::span<const Vertex> targets,
                           std::span<const double> shell_radii) {
  GeodesicTree tree;
  tree.shell_radii.assign(shell_radii.begin(), shell_radii.end());
  tree.shell_crossings.assign(shell_radii.size(), 0);
  std::vector<std::uint8_t> in_tree(mf.dist.size(), 0);
  for (const Vertex& t : targets) {
    check_vertex(mf.n, t, "geodesic_tree");
    std::int32_t v = t.i * mf.n + t.j;
    if (!std::isfinite(mf.dist[v]))
      throw std::runtime_error("geodesic_tree: target not reached from source");
    // Walk toward the source, stopping at the first vertex already in the
    // tree; predecessor links are unique so the union stays a tree.
    while (v >= 0 && !in_tree[v]) {
      in_tree[v] = 1;
      const std::int32_t p = mf.pred[v];
      if (p >= 0) {
        tree.edges.push_back({v, p});
        for (std::size_t k = 0; k < shell_radii.size(); ++k)
          if (mf.dist[p] <= shell_radii[k] && shell_radii[k] < mf.dist[v])
            ++tree.shell_crossings[k];
      }
      v = p;
    }
  }
  return tree;
}

}  // namespace lqg
