#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lqg/grid_field.hpp"

namespace lqg {

/// Discrete Dirichlet energy on the zero-boundary grid,
///   E(f,g) = (1/2pi) * sum over nearest-neighbor pairs (including pairs to
///   the zero frame) of (f(u)-f(v))(g(u)-g(v)).
/// The difference-quotient and cell-area factors cancel in two dimensions,
/// so the sum is spacing-free.  Symmetric and positive definite.
struct EnergyForm {
  int n;

  explicit EnergyForm(int n_);
  double operator()(const GridField& f, const GridField& g) const;
  /// Dense matrix of the form, row-major n^2 x n^2.  Guarded to n <= 64.
  std::vector<double> dense() const;
};

double dirichlet_inner(const GridField& f, const GridField& g);

/// i.i.d. standard Gaussian mode coefficients for (n, seed), row-major over
/// the (j,k) sine-mode indices.  Exposed so tests can substitute coefficient
/// arrays (e.g. all zeros) through gff_from_coefficients.
std::vector<double> gff_coefficients(int n, std::uint64_t seed);

/// Spectral synthesis h = sum alpha_jk * f_jk over the discrete-Laplacian
/// sine modes normalized to unit Dirichlet energy (1/2pi convention); the
/// resulting covariance is 2pi * (5-point Laplacian)^{-1}.  Fast sine
/// transform path.
GridField gff_from_coefficients(int n, std::span<const double> alpha);

/// Direct O(n^4) double-sum synthesis of the same field; reference path for
/// cross-validating the transform.  Guarded to n <= 64.
GridField gff_from_coefficients_direct(int n, std::span<const double> alpha);

/// One zero-boundary GFF sample.  Deterministic in (n, seed).
GridField sample_gff(int n, std::uint64_t seed);

/// Independent oracle sampler: draws the same law through a dense Cholesky
/// factor of the covariance 2pi L^{-1}.  Construction is O(n^6); n <= 64.
class CholeskyGffSampler {
 public:
  explicit CholeskyGffSampler(int n);
  GridField sample(std::uint64_t seed) const;
  /// Lower-triangular factor F with F F^T = covariance, row-major n^2 x n^2.
  const std::vector<double>& factor() const { return factor_; }

 private:
  int n_;
  std::vector<double> factor_;
};

GridField sample_gff_cholesky(int n, std::uint64_t seed);

/// Truncated, per-point renormalized heat-kernel smoothing at scale eps
/// (domain units).  Kernel weights exp(-|z-w|^2/eps^2) truncated at 4*eps
/// per axis and renormalized to total mass one over in-grid points, so
/// constants are preserved exactly.  Requires a raw field and eps >= spacing.
GridField mollify(const GridField& field, double eps);

/// Mean of bilinearly interpolated values over 64*ceil(r/spacing) equispaced
/// points on the circle of radius r about center.  The closed disk must lie
/// inside the unit square and r >= 2*spacing.
double circle_average(const GridField& field, Point center, double r);

}  // namespace lqg
