#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lqg/gmc.hpp"
#include "lqg/lfpp.hpp"

namespace lqg {

/// (radius, ball mass) pairs from one field sample, plus run metadata.
struct GrowthSamples {
  double gamma = 0.0;
  int n = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> radii;
  std::vector<double> masses;
};

/// Total measure mass of metric_ball(mf, r) for each radius.  Radii must be
/// strictly increasing and stay at or below half the maximum distance so the
/// balls are not truncated by the grid boundary.
GrowthSamples ball_growth(const MassGrid& mass, const MetricField& mf,
                          std::span<const double> radii);

struct DimensionEstimate {
  double d = 0.0;
  double half_width = 0.0;  // standard error of the log-log slope
};

/// Least-squares slope of log(mass) against log(r).  Requires at least five
/// points spanning at least two dyadic scales.
DimensionEstimate estimate_dimension(const GrowthSamples& gs);

struct DgammaReference {
  enum class Kind { exact, bounds, unknown };
  Kind kind = Kind::unknown;
  double value = 0.0;  // set when exact
  double lower = 0.0;  // set when bounds
  double upper = 0.0;
};

/// Known value d=4 at gamma=sqrt(8/3), the rigorous window at gamma=sqrt(2),
/// unknown otherwise (the user must supply a value).
DgammaReference dgamma_reference(double gamma);

/// Geometric radius ladder between the given distance-field percentiles
/// (defaults follow the sampling design: 10th to 50th).
std::vector<double> growth_radii(const MetricField& mf, int count,
                                 double lo_pct = 0.10, double hi_pct = 0.50);

}  // namespace lqg
