#include "lqg/grid_field.hpp"

#include <cmath>
#include <stdexcept>

namespace lqg {

GridField::GridField(int n_, Kind kind_, double eps_)
    : n(n_), spacing(1.0 / (n_ + 1)), kind(kind_), eps(eps_),
      values(static_cast<std::size_t>(n_) * n_, 0.0) {
  if (n_ < 1) throw std::invalid_argument("GridField: n must be >= 1");
}

GridField GridField::constant(int n, double c) {
  GridField f(n);
  for (double& v : f.values) v = c;
  return f;
}

bool GridField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

double GridField::interpolate(Point p) const {
  if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0)
    throw std::out_of_range("GridField::interpolate: point outside unit square");
  // Work on the (n+2)^2 extended grid whose frame is zero.
  const double gx = p.x / spacing;  // in [0, n+1]
  const double gy = p.y / spacing;
  int j0 = static_cast<int>(std::floor(gx));
  int i0 = static_cast<int>(std::floor(gy));
  if (j0 > n) j0 = n;
  if (i0 > n) i0 = n;
  const double fx = gx - j0;
  const double fy = gy - i0;
  auto ext = [&](int ie, int je) -> double {
    // Extended-grid index (0..n+1); frame value is 0.
    if (ie < 1 || ie > n || je < 1 || je > n) return 0.0;
    return at(ie - 1, je - 1);
  };
  const double v00 = ext(i0, j0), v01 = ext(i0, j0 + 1);
  const double v10 = ext(i0 + 1, j0), v11 = ext(i0 + 1, j0 + 1);
  return (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
}

}  // namespace lqg
