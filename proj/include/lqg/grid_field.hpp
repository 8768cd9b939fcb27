#pragma once

#include <cstddef>
#include <vector>

namespace lqg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// An n-by-n real lattice function on the interior vertex grid of the unit
/// square.  Vertex (row i, col j) sits at ((j+1)*spacing, (i+1)*spacing) with
/// spacing = 1/(n+1).  A raw field is implicitly zero on the frame of
/// vertices surrounding the stored block.
struct GridField {
  enum class Kind { raw, mollified };

  int n = 0;
  double spacing = 0.0;
  Kind kind = Kind::raw;
  double eps = 0.0;  // mollification scale in domain units; 0 when raw
  std::vector<double> values;

  GridField() = default;
  GridField(int n_, Kind kind_ = Kind::raw, double eps_ = 0.0);

  static GridField constant(int n, double c);

  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }

  double x_of(int j) const { return (j + 1) * spacing; }
  double y_of(int i) const { return (i + 1) * spacing; }

  bool all_finite() const;
  /// Bilinear interpolation at a domain point, using the zero boundary frame
  /// outside the stored block.  p must lie in the closed unit square.
  double interpolate(Point p) const;
};

}  // namespace lqg
