#include "lqg/maps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "lqg/rng.hpp"

namespace lqg {

void validate_quadrant_excursion(const Walk2D& w) {
  long l = 0, r = 0;
  for (std::size_t t = 0; t < w.steps.size(); ++t) {
    const double dl = w.steps[t][0], dr = w.steps[t][1];
    const bool unit_l = (dl == 1.0 || dl == -1.0) && dr == 0.0;
    const bool unit_r = (dr == 1.0 || dr == -1.0) && dl == 0.0;
    if (!unit_l && !unit_r)
      throw WalkError("malformed walk: step is not a unit lattice step", t);
    l += static_cast<long>(dl);
    r += static_cast<long>(dr);
    if (l < 0 || r < 0)
      throw WalkError("malformed walk: leaves the nonnegative quadrant", t);
  }
  if (w.steps.size() % 2 != 0)
    throw WalkError("malformed walk: odd length", w.steps.size());
  if (l != 0 || r != 0)
    throw WalkError("malformed walk: endpoint is not the origin", w.steps.size());
}

PlanarMapGraph::PlanarMapGraph(int vertices) {
  if (vertices < 1)
    throw std::invalid_argument("PlanarMapGraph: need at least one vertex");
  rot_.resize(vertices);
}

void PlanarMapGraph::set_root(int half_edge) {
  if (half_edge < -1 || half_edge >= static_cast<int>(origin_.size()))
    throw std::out_of_range("PlanarMapGraph::set_root: no such half-edge");
  root_ = half_edge;
}

int PlanarMapGraph::rot_next(int h) const {
  const auto& r = rot_[origin_[h]];
  const std::size_t p = rot_pos_[h] + 1;
  return r[p == r.size() ? 0 : p];
}

int PlanarMapGraph::add_vertex() {
  rot_.emplace_back();
  return static_cast<int>(rot_.size()) - 1;
}

int PlanarMapGraph::open_edge(int u, bool tree) {
  const int e = num_edges();
  origin_.push_back(u);
  origin_.push_back(-1);
  tree_.push_back(tree ? 1 : 0);
  rot_pos_.push_back(static_cast<int>(rot_[u].size()));
  rot_pos_.push_back(-1);
  rot_[u].push_back(2 * e);
  return e;
}

void PlanarMapGraph::close_edge(int e, int v) {
  const int h = 2 * e + 1;
  if (origin_[h] != -1)
    throw std::logic_error("PlanarMapGraph::close_edge: edge already closed");
  origin_[h] = v;
  rot_pos_[h] = static_cast<int>(rot_[v].size());
  rot_[v].push_back(h);
}

int PlanarMapGraph::add_edge(int u, int v, bool tree) {
  const int e = open_edge(u, tree);
  close_edge(e, v);
  return e;
}

std::vector<std::pair<int, int>> PlanarMapGraph::neighbors(int v) const {
  std::map<int, int> mult;
  for (int h : rot_[v]) ++mult[origin_[twin(h)]];
  return {mult.begin(), mult.end()};
}

int PlanarMapGraph::num_simple_edges() const {
  std::map<std::pair<int, int>, int> seen;
  for (int e = 0; e < num_edges(); ++e) {
    const int a = endpoint(e), b = endpoint2(e);
    ++seen[{std::min(a, b), std::max(a, b)}];
  }
  return static_cast<int>(seen.size());
}

bool PlanarMapGraph::connected() const {
  const int nv = num_vertices();
  std::vector<std::uint8_t> vis(nv, 0);
  std::vector<int> stack{0};
  vis[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int h : rot_[v]) {
      const int u = origin_[twin(h)];
      if (!vis[u]) {
        vis[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == nv;
}

bool PlanarMapGraph::tree_marks_valid() const {
  const int nv = num_vertices();
  int marked = 0;
  for (int e = 0; e < num_edges(); ++e)
    if (on_tree(e)) ++marked;
  if (marked != nv - 1) return false;
  // Acyclic + right count + spanning <=> connected on tree edges.
  std::vector<std::uint8_t> vis(nv, 0);
  std::vector<int> stack{0};
  vis[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int h : rot_[v]) {
      if (!on_tree(edge_of(h))) continue;
      const int u = origin_[twin(h)];
      if (!vis[u]) {
        vis[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == nv;
}

PlanarMapGraph mullin_decode(const Walk2D& walk) {
  validate_quadrant_excursion(walk);
  PlanarMapGraph m(1);
  int cur = 0;
  std::vector<std::pair<int, int>> tree_stack;  // (parent vertex, edge)
  std::vector<int> open_stack;                  // dual-tree edges, LIFO
  for (std::size_t t = 0; t < walk.steps.size(); ++t) {
    const int dl = static_cast<int>(walk.steps[t][0]);
    const int dr = static_cast<int>(walk.steps[t][1]);
    if (dl == 1) {
      const int e = m.open_edge(cur, true);
      const int w = m.add_vertex();
      m.close_edge(e, w);
      tree_stack.push_back({cur, e});
      cur = w;
    } else if (dl == -1) {
      cur = tree_stack.back().first;
      tree_stack.pop_back();
    } else if (dr == 1) {
      open_stack.push_back(m.open_edge(cur, false));
    } else {
      m.close_edge(open_stack.back(), cur);
      open_stack.pop_back();
    }
  }
  if (m.num_edges() > 0) m.set_root(0);
  return m;
}

Walk2D mullin_encode(const PlanarMapGraph& map) {
  const int ne = map.num_edges();
  Walk2D w;
  if (ne == 0) return w;
  if (!map.tree_marks_valid())
    throw std::invalid_argument("mullin_encode: marked edges are not a spanning tree");
  if (map.root() < 0)
    throw std::invalid_argument("mullin_encode: map has no root half-edge");
  w.steps.reserve(2 * ne);
  std::vector<std::uint8_t> seen(ne, 0);
  int h = map.root();
  for (int step = 0; step < 2 * ne; ++step) {
    const int e = PlanarMapGraph::edge_of(h);
    const bool first = !seen[e];
    seen[e] = 1;
    if (map.on_tree(e)) {
      w.steps.push_back({first ? 1.0 : -1.0, 0.0});
      h = map.rot_next(PlanarMapGraph::twin(h));
    } else {
      w.steps.push_back({0.0, first ? 1.0 : -1.0});
      h = map.rot_next(h);
    }
  }
  if (h != map.root())
    throw std::invalid_argument("mullin_encode: exploration did not close up");
  return w;
}

namespace {

// log(Catalan(k))
double log_catalan(int k) {
  return std::lgamma(2.0 * k + 1) - std::lgamma(k + 1.0) - std::lgamma(k + 2.0);
}

// Uniform Dyck path of length 2k (k up-steps), via the cycle lemma: shuffle
// k up-steps and k+1 down-steps, rotate to start after the first prefix-sum
// minimum, drop the trailing down-step.
std::vector<int> uniform_dyck(int k, Rng& rng) {
  if (k == 0) return {};
  std::vector<int> s(2 * k + 1, -1);
  for (int t = 0; t < k; ++t) s[t] = 1;
  for (int t = 2 * k; t > 0; --t)
    std::swap(s[t], s[rng.below(static_cast<std::uint64_t>(t) + 1)]);
  int sum = 0, best = 1, best_at = -1;
  for (int t = 0; t < 2 * k + 1; ++t) {
    sum += s[t];
    if (sum < best) {
      best = sum;
      best_at = t;
    }
  }
  std::vector<int> out(2 * k);
  for (int t = 0; t < 2 * k; ++t) out[t] = s[(best_at + 1 + t) % (2 * k + 1)];
  return out;
}

}  // namespace

Walk2D sample_quadrant_excursion(int nedges, std::uint64_t seed) {
  if (nedges < 0) throw std::invalid_argument("sample_quadrant_excursion: nedges >= 0");
  Walk2D w;
  if (nedges == 0) return w;
  const int n = nedges;
  Rng rng(seed);
  // P(2k e1-steps) proportional to C(2n, 2k) Cat(k) Cat(n-k).
  std::vector<double> logw(n + 1);
  double mx = -1e300;
  for (int k = 0; k <= n; ++k) {
    logw[k] = std::lgamma(2.0 * n + 1) - std::lgamma(2.0 * k + 1) -
              std::lgamma(2.0 * (n - k) + 1) + log_catalan(k) + log_catalan(n - k);
    mx = std::max(mx, logw[k]);
  }
  double total = 0.0;
  std::vector<double> cum(n + 1);
  for (int k = 0; k <= n; ++k) {
    total += std::exp(logw[k] - mx);
    cum[k] = total;
  }
  const double u = rng.uniform() * total;
  int k = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
  if (k > n) k = n;

  // Uniform interleaving of 2k e1-labels among 2n positions.
  std::vector<std::uint8_t> is_l(2 * n, 0);
  for (int t = 0; t < 2 * k; ++t) is_l[t] = 1;
  for (int t = 2 * n - 1; t > 0; --t)
    std::swap(is_l[t], is_l[rng.below(static_cast<std::uint64_t>(t) + 1)]);

  const std::vector<int> ldyck = uniform_dyck(k, rng);
  const std::vector<int> rdyck = uniform_dyck(n - k, rng);
  w.steps.resize(2 * n);
  std::size_t li = 0, ri = 0;
  for (int t = 0; t < 2 * n; ++t) {
    if (is_l[t])
      w.steps[t] = {static_cast<double>(ldyck[li++]), 0.0};
    else
      w.steps[t] = {0.0, static_cast<double>(rdyck[ri++])};
  }
  return w;
}

PlanarMapGraph sample_tree_decorated_map(int nedges, std::uint64_t seed) {
  if (nedges < 1) throw std::invalid_argument("sample_tree_decorated_map: nedges >= 1");
  return mullin_decode(sample_quadrant_excursion(nedges, seed));
}

double walk_step_correlation(double gamma) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::invalid_argument("walk_step_correlation: gamma must lie in (0,2)");
  return -std::cos(std::numbers::pi * gamma * gamma / 4.0);
}

Walk2D sample_correlated_walk(int nsteps, double gamma, std::uint64_t seed) {
  const double rho = walk_step_correlation(gamma);
  const double comp = std::sqrt(1.0 - rho * rho);
  Rng rng(seed);
  Walk2D w;
  w.steps.resize(nsteps);
  for (int t = 0; t < nsteps; ++t) {
    const double z1 = rng.gaussian();
    const double z2 = rng.gaussian();
    w.steps[t] = {z1, rho * z1 + comp * z2};
  }
  return w;
}

std::vector<Walk2D> enumerate_quadrant_excursions(int nedges) {
  if (nedges < 0 || nedges > 5)
    throw std::invalid_argument("enumerate_quadrant_excursions: nedges in [0,5]");
  static constexpr std::array<std::array<double, 2>, 4> kSteps = {
      {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}};
  std::vector<Walk2D> out;
  Walk2D w;
  const int len = 2 * nedges;
  auto rec = [&](auto&& self, int l, int r, int t) -> void {
    if (t == len) {
      if (l == 0 && r == 0) out.push_back(w);
      return;
    }
    // Prune: remaining steps must be able to return to the origin.
    if (l + r > len - t) return;
    for (const auto& s : kSteps) {
      const int nl = l + static_cast<int>(s[0]);
      const int nr = r + static_cast<int>(s[1]);
      if (nl < 0 || nr < 0) continue;
      w.steps.push_back(s);
      self(self, nl, nr, t + 1);
      w.steps.pop_back();
    }
  };
  rec(rec, 0, 0, 0);
  return out;
}

PlanarMapGraph mated_crt_map(const Walk2D& walk, int nvertices) {
  if (nvertices < 1) throw std::invalid_argument("mated_crt_map: nvertices >= 1");
  if (walk.size() < static_cast<std::size_t>(nvertices))
    throw std::invalid_argument("mated_crt_map: walk shorter than nvertices");
  const int n = nvertices;
  // X[t] = coordinate value at integer time t, X[0] = 0.
  std::vector<double> xl(n + 1, 0.0), xr(n + 1, 0.0);
  for (int t = 0; t < n; ++t) {
    xl[t + 1] = xl[t] + walk.steps[t][0];
    xr[t + 1] = xr[t] + walk.steps[t][1];
  }
  PlanarMapGraph m(n);
  // Cells are 1-based intervals [i-1, i]; vertex index i-1.  Non-consecutive
  // chords require the strict inequality: the interpolated walk attains gap
  // infima exactly at cell boundaries, and accepting those coincidences
  // attaches each descending-ladder point twice, which crosses chords and
  // breaks the planarity bound.  Brownian paths hit the boundary case with
  // probability zero, so the strict form is the faithful discretization.
  auto scan = [&](const std::vector<double>& x, std::vector<std::vector<int>>& adj) {
    for (int j = 2; j <= n; ++j) {
      adj[j - 1].push_back(j - 2);  // consecutive cells, by convention
      const double mj = std::min(x[j - 1], x[j]);
      double running = x[j - 1];  // min over [i, j-1] while scanning i down
      for (int i = j - 2; i >= 1; --i) {
        running = std::min(running, x[i]);
        if (running <= mj) break;
        const double mi = std::min(x[i - 1], x[i]);
        if (running > mi) adj[j - 1].push_back(i - 1);
      }
    }
  };
  std::vector<std::vector<int>> adj_l(n), adj_r(n);
  scan(xl, adj_l);
  scan(xr, adj_r);
  for (int v = 1; v < n; ++v) {
    // Deterministic edge order: by higher endpoint, then lower, L before R.
    std::sort(adj_l[v].begin(), adj_l[v].end(), std::greater<int>());
    std::sort(adj_r[v].begin(), adj_r[v].end(), std::greater<int>());
    for (int u : adj_l[v]) m.add_edge(u, v);
    for (int u : adj_r[v]) m.add_edge(u, v);
  }
  if (m.num_edges() > 0) m.set_root(0);
  return m;
}

}  // namespace lqg
