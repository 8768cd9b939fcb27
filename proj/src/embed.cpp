#include "lqg/embed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lqg {

namespace {

struct InteriorSystem {
  // Interior Laplacian in CSR-like arrays plus the boundary load.
  int ni = 0;                       // number of interior vertices
  std::vector<int> index;           // vertex -> interior index or -1
  std::vector<int> interior;        // interior index -> vertex
  std::vector<double> diag;         // total degree (with multiplicity)
  std::vector<int> row_start;
  std::vector<int> col;             // interior neighbor, repeated per multiplicity? compressed
  std::vector<double> val;          // multiplicity
  std::vector<double> bx, by;       // boundary contribution to each row
};

InteriorSystem build_system(const PlanarMapGraph& map, std::span<const int> boundary,
                            std::span<const Point> positions) {
  const int nv = map.num_vertices();
  if (boundary.size() < 3)
    throw std::invalid_argument("tutte_embed: boundary cycle needs >= 3 vertices");
  if (positions.size() != boundary.size())
    throw std::invalid_argument("tutte_embed: one position per boundary vertex required");
  std::vector<std::uint8_t> is_bdry(nv, 0);
  for (int v : boundary) {
    if (v < 0 || v >= nv) throw std::out_of_range("tutte_embed: boundary vertex out of range");
    if (is_bdry[v]) throw std::invalid_argument("tutte_embed: repeated boundary vertex");
    is_bdry[v] = 1;
  }
  // The boundary must be a cycle in the map.
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    const int a = boundary[k];
    const int b = boundary[(k + 1) % boundary.size()];
    bool adjacent = false;
    for (int h : map.rotation(a))
      if (map.origin(PlanarMapGraph::twin(h)) == b) {
        adjacent = true;
        break;
      }
    if (!adjacent)
      throw std::invalid_argument("tutte_embed: boundary vertices do not form a cycle");
  }
  if (!map.connected()) throw std::invalid_argument("tutte_embed: map must be connected");

  InteriorSystem sys;
  sys.index.assign(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (!is_bdry[v]) {
      sys.index[v] = static_cast<int>(sys.interior.size());
      sys.interior.push_back(v);
    }
  sys.ni = static_cast<int>(sys.interior.size());
  std::vector<double> px(nv, 0.0), py(nv, 0.0);
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    px[boundary[k]] = positions[k].x;
    py[boundary[k]] = positions[k].y;
  }
  sys.diag.assign(sys.ni, 0.0);
  sys.bx.assign(sys.ni, 0.0);
  sys.by.assign(sys.ni, 0.0);
  sys.row_start.assign(sys.ni + 1, 0);
  for (int r = 0; r < sys.ni; ++r) {
    const int v = sys.interior[r];
    if (map.degree(v) == 0)
      throw std::invalid_argument("tutte_embed: isolated interior vertex");
    for (auto [u, mult] : map.neighbors(v)) {
      sys.diag[r] += mult;
      if (sys.index[u] >= 0) {
        sys.col.push_back(sys.index[u]);
        sys.val.push_back(mult);
      } else {
        sys.bx[r] += mult * px[u];
        sys.by[r] += mult * py[u];
      }
    }
    sys.row_start[r + 1] = static_cast<int>(sys.col.size());
  }
  return sys;
}

// Interior vertices with no path to the boundary make the harmonic system
// underdetermined.
void check_boundary_reach(const InteriorSystem& sys) {
  std::vector<std::uint8_t> reached(sys.ni, 0);
  std::vector<int> stack;
  // A row touches the boundary iff its off-diagonal interior weights do not
  // exhaust its degree.
  for (int r = 0; r < sys.ni; ++r) {
    double interior_weight = 0.0;
    for (int k = sys.row_start[r]; k < sys.row_start[r + 1]; ++k)
      interior_weight += sys.val[k];
    if (interior_weight < sys.diag[r]) {
      reached[r] = 1;
      stack.push_back(r);
    }
  }
  while (!stack.empty()) {
    const int r = stack.back();
    stack.pop_back();
    for (int k = sys.row_start[r]; k < sys.row_start[r + 1]; ++k)
      if (!reached[sys.col[k]]) {
        reached[sys.col[k]] = 1;
        stack.push_back(sys.col[k]);
      }
  }
  for (int r = 0; r < sys.ni; ++r)
    if (!reached[r])
      throw std::invalid_argument(
          "tutte_embed: interior component with no boundary contact (underdetermined)");
}

// Jacobi-preconditioned CG on (D - A) x = b; stops once the harmonic
// residual bound max |r_i| / diag_i < tol holds.
void solve_cg(const InteriorSystem& sys, const std::vector<double>& b,
              std::vector<double>& x, double tol, int max_iters) {
  const int ni = sys.ni;
  if (ni == 0) return;
  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (int r = 0; r < ni; ++r) {
      double s = sys.diag[r] * in[r];
      for (int k = sys.row_start[r]; k < sys.row_start[r + 1]; ++k)
        s -= sys.val[k] * in[sys.col[k]];
      out[r] = s;
    }
  };
  std::vector<double> r(ni), z(ni), p(ni), ap(ni);
  apply(x, r);
  for (int i = 0; i < ni; ++i) r[i] = b[i] - r[i];
  auto converged = [&]() {
    for (int i = 0; i < ni; ++i)
      if (std::abs(r[i]) >= tol * sys.diag[i]) return false;
    return true;
  };
  if (converged()) return;
  for (int i = 0; i < ni; ++i) z[i] = r[i] / sys.diag[i];
  p = z;
  double rz = 0.0;
  for (int i = 0; i < ni; ++i) rz += r[i] * z[i];
  for (int it = 0; it < max_iters; ++it) {
    apply(p, ap);
    double pap = 0.0;
    for (int i = 0; i < ni; ++i) pap += p[i] * ap[i];
    if (pap <= 0.0) break;
    const double alpha = rz / pap;
    for (int i = 0; i < ni; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    if (converged()) return;
    double rz_new = 0.0;
    for (int i = 0; i < ni; ++i) {
      z[i] = r[i] / sys.diag[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < ni; ++i) p[i] = z[i] + beta * p[i];
  }
  if (!converged())
    throw std::runtime_error("tutte_embed: solver did not reach tolerance");
}

}  // namespace

Embedding tutte_embed_at(const PlanarMapGraph& map, std::span<const int> boundary,
                         std::span<const Point> positions, double tol, int max_iters) {
  if (!(tol > 0.0)) throw std::invalid_argument("tutte_embed: tol must be > 0");
  InteriorSystem sys = build_system(map, boundary, positions);
  check_boundary_reach(sys);
  if (max_iters <= 0)
    max_iters = std::max(40 * static_cast<int>(std::sqrt(sys.ni) + 1), 20000);
  std::vector<double> sx(sys.ni, 0.0), sy(sys.ni, 0.0);
  solve_cg(sys, sys.bx, sx, tol, max_iters);
  solve_cg(sys, sys.by, sy, tol, max_iters);
  Embedding emb;
  emb.x.assign(map.num_vertices(), 0.0);
  emb.y.assign(map.num_vertices(), 0.0);
  emb.boundary.assign(boundary.begin(), boundary.end());
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    emb.x[boundary[k]] = positions[k].x;
    emb.y[boundary[k]] = positions[k].y;
  }
  for (int r = 0; r < sys.ni; ++r) {
    emb.x[sys.interior[r]] = sx[r];
    emb.y[sys.interior[r]] = sy[r];
  }
  return emb;
}

Embedding tutte_embed(const PlanarMapGraph& map, std::span<const int> boundary,
                      double tol, int max_iters) {
  std::vector<Point> pos(boundary.size());
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / boundary.size();
    pos[k] = {std::cos(a), std::sin(a)};
  }
  return tutte_embed_at(map, boundary, pos, tol, max_iters);
}

double harmonic_residual(const PlanarMapGraph& map, const Embedding& emb) {
  std::vector<std::uint8_t> is_bdry(map.num_vertices(), 0);
  for (int v : emb.boundary) is_bdry[v] = 1;
  double worst = 0.0;
  for (int v = 0; v < map.num_vertices(); ++v) {
    if (is_bdry[v]) continue;
    double sx = 0.0, sy = 0.0, deg = 0.0;
    for (auto [u, mult] : map.neighbors(v)) {
      sx += mult * emb.x[u];
      sy += mult * emb.y[u];
      deg += mult;
    }
    if (deg == 0.0) continue;
    const double ex = emb.x[v] - sx / deg;
    const double ey = emb.y[v] - sy / deg;
    worst = std::max(worst, std::hypot(ex, ey));
  }
  return worst;
}

MassGrid vertex_density(const Embedding& emb, int resolution) {
  if (resolution < 1) throw std::invalid_argument("vertex_density: resolution >= 1");
  MassGrid grid;
  grid.n = resolution;
  grid.spacing = 2.0 / resolution;
  grid.gamma = 0.0;
  grid.eps = 0.0;
  grid.masses.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);
  const int nv = emb.num_vertices();
  if (nv == 0) throw std::invalid_argument("vertex_density: empty embedding");
  for (int v = 0; v < nv; ++v) {
    const double px = emb.x[v], py = emb.y[v];
    if (px < -1.0 || px > 1.0 || py < -1.0 || py > 1.0)
      throw std::out_of_range("vertex_density: position outside [-1,1]^2 frame");
    int j = static_cast<int>((px + 1.0) / 2.0 * resolution);
    int i = static_cast<int>((py + 1.0) / 2.0 * resolution);
    j = std::min(j, resolution - 1);
    i = std::min(i, resolution - 1);
    grid.at(i, j) += 1.0;
  }
  for (double& m : grid.masses) m /= nv;
  return grid;
}

std::vector<int> mated_crt_boundary(const Walk2D& walk, int nvertices) {
  if (nvertices < 3)
    throw std::invalid_argument("mated_crt_boundary: need at least 3 vertices");
  if (walk.size() < static_cast<std::size_t>(nvertices))
    throw std::invalid_argument("mated_crt_boundary: walk shorter than nvertices");
  const int n = nvertices;
  std::vector<double> x(n + 1, 0.0);
  for (int t = 0; t < n; ++t) x[t + 1] = x[t] + walk.steps[t][0];
  // Cell minima m_c = inf of L over [c-1, c].  Records of the running
  // minimum of m_c come in twin pairs: when a record value sits at the time
  // point shared by two cells, both cells carry it.  Walking from cell 1 and
  // keeping each record together with its twin, successive selections are
  // either integer-consecutive (adjacent by convention) or separated by a
  // gap lying strictly above the older record (adjacent by the strict chord
  // condition).  The mirrored ladder from cell n meets it at the global
  // record, giving a simple path of adjacent cells from first to last index.
  std::vector<double> m(n + 1, 0.0);
  for (int c = 1; c <= n; ++c) m[c] = std::min(x[c - 1], x[c]);
  std::vector<int> left{1};
  double run = m[1];
  for (int c = 2; c <= n; ++c) {
    if (m[c] < run) {
      run = m[c];
      left.push_back(c);
    } else if (m[c] == run && left.back() == c - 1) {
      left.push_back(c);  // twin cell sharing the record point
    }
  }
  std::vector<int> right{n};
  run = m[n];
  for (int c = n - 1; c >= 1; --c) {
    if (m[c] < run) {
      run = m[c];
      right.push_back(c);
    } else if (m[c] == run && right.back() == c + 1) {
      right.push_back(c);
    }
  }
  std::vector<int> cells = left;
  {
    std::vector<std::uint8_t> in_left(n + 1, 0);
    for (int c : left) in_left[c] = 1;
    // The legs share exactly the global-record pair; skip that prefix of the
    // reversed right leg, then append the rest.
    std::size_t k = right.size();
    while (k > 0 && in_left[right[k - 1]]) --k;
    for (std::size_t t = k; t-- > 0;) cells.push_back(right[t]);
  }
  if (cells.size() < 3)
    throw std::domain_error("mated_crt_boundary: degenerate walk, boundary shorter than 3");
  std::vector<int> verts;
  verts.reserve(cells.size());
  for (int c : cells) verts.push_back(c - 1);
  return verts;
}

}  // namespace lqg
