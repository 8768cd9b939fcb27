#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lqg/grid_field.hpp"

namespace lqg {

/// Per-cell masses of the regularized area measure at a fixed mollification
/// scale: masses[i][j] = eps^(gamma^2/2) * exp(gamma * h_eps(z_ij)) * spacing^2
/// for the cell of side `spacing` centered at vertex (i,j).
struct MassGrid {
  int n = 0;
  double spacing = 0.0;
  double gamma = 0.0;
  double eps = 0.0;
  std::vector<double> masses;

  double& at(int i, int j) { return masses[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return masses[static_cast<std::size_t>(i) * n + j]; }
  double total() const;
};

MassGrid gmc_masses(const GridField& mollified_field, double gamma);

/// One leaf of the quadtree over the unit square: the square
/// [j,j+1]x[i,i+1] / 2^level (x = column index j, y = row index i).
struct DyadicSquare {
  int level = 0;
  int i = 0;
  int j = 0;
  double mass = 0.0;
};

/// Splits the unit square into quadrants until each leaf's mass is at most
/// threshold, stopping at single-cell resolution.  n must be a power of two
/// so dyadic lines never cut a cell.  Leaves partition the square.
std::vector<DyadicSquare> dyadic_decompose(const MassGrid& mass, double threshold);

/// A cell center sampled with probability proportional to cell mass.
Point sample_mu_point(const MassGrid& mass, std::uint64_t seed);
std::vector<Point> sample_mu_points(const MassGrid& mass, int count, std::uint64_t seed);

/// Least-squares slope of circle_average(field, z, eps) against log(1/eps)
/// over the given scales (decreasing, each >= 2*spacing, at least 3).
double thickness(const GridField& raw_field, Point z, std::span<const double> scales);

/// Coordinate-change coefficient Q = 2/gamma + gamma/2.
double coord_change_q(double gamma);

struct CoordChangeResult {
  double mean_ratio = 0.0;
  double q = 0.0;
  std::vector<double> ratios;
};

/// Checks the pure-scaling coordinate-change identity mu_h(phi(A)) =
/// mu_{h'}(A) for phi(z) = a*z, h' = h(phi(.)) + Q log a.  Per replica the
/// field is sampled on a lattice refined by 1/a, the test square A (the
/// centered square of side 1/4) is measured under the exact lattice pullback
/// at scale eps/a, and phi(A) is measured under the fine field at scale eps;
/// eps = eps_mult * fine spacing.  q_override substitutes a wrong exponent
/// for control runs.
CoordChangeResult coord_change_check(double gamma, double a, int replicas,
                                     std::uint64_t seed, int n, double eps_mult,
                                     std::optional<double> q_override = std::nullopt,
                                     int threads = 0);

}  // namespace lqg
