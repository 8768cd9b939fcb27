#pragma once

#include <span>
#include <vector>

#include "lqg/gmc.hpp"
#include "lqg/grid_field.hpp"
#include "lqg/maps.hpp"

namespace lqg {

struct Embedding {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<int> boundary;  // pinned vertices, in pinning order

  int num_vertices() const { return static_cast<int>(x.size()); }
  Point position(int v) const { return {x[v], y[v]}; }
};

/// Harmonic embedding with the boundary cycle pinned at explicit positions.
/// Interior vertices solve pos(v) = multiplicity-weighted mean of neighbor
/// positions, via Jacobi-preconditioned conjugate gradients, iterated until
/// max interior |pos - neighbor mean| < tol.  max_iters <= 0 picks a budget
/// of max(40 * sqrt(interior), 20000) iterations per coordinate.
Embedding tutte_embed_at(const PlanarMapGraph& map, std::span<const int> boundary,
                         std::span<const Point> positions, double tol,
                         int max_iters = 0);

/// Boundary pinned on the unit circle at equal angles in the given cyclic
/// order, starting at angle 0.
Embedding tutte_embed(const PlanarMapGraph& map, std::span<const int> boundary,
                      double tol, int max_iters = 0);

/// Max over interior vertices of |pos(v) - neighbor mean| (Euclidean norm).
double harmonic_residual(const PlanarMapGraph& map, const Embedding& emb);

/// resolution x resolution histogram of vertex positions over the frame
/// [-1,1]^2, normalized to total mass one.  Positions outside the frame are
/// a range error.
MassGrid vertex_density(const Embedding& emb, int resolution);

/// Boundary convention for embedding a mated-CRT map: the running-minimum
/// records of the L cell minima, walking from the first cell down to the
/// global record and back up to the last cell.  Consecutive vertices in the
/// list are always adjacent in the map; the list is closed into a cycle by
/// one auxiliary last-to-first edge, which the caller must add (and should
/// flag in any output).
std::vector<int> mated_crt_boundary(const Walk2D& walk, int nvertices);

}  // namespace lqg
