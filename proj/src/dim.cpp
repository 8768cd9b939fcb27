#include "lqg/dim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lqg {

GrowthSamples ball_growth(const MassGrid& mass, const MetricField& mf,
                          std::span<const double> radii) {
  if (mass.n != mf.n)
    throw std::invalid_argument("ball_growth: mass and metric grids differ");
  const double dmax = mf.max_dist();
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] > 0.5 * dmax)
      throw std::out_of_range("ball_growth: radius beyond half the max distance");
    if (k > 0 && !(radii[k] > radii[k - 1]))
      throw std::invalid_argument("ball_growth: radii must be strictly increasing");
  }
  // Sort cells by distance once, prefix-sum their masses, then answer each
  // radius by binary search.
  const std::size_t N = mf.dist.size();
  std::vector<std::uint32_t> order(N);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return mf.dist[a] < mf.dist[b];
  });
  std::vector<double> sorted_dist(N), prefix(N);
  double acc = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    sorted_dist[k] = mf.dist[order[k]];
    acc += mass.masses[order[k]];
    prefix[k] = acc;
  }
  GrowthSamples gs;
  gs.gamma = mass.gamma;
  gs.n = mass.n;
  gs.eps = mass.eps;
  gs.radii.assign(radii.begin(), radii.end());
  gs.masses.reserve(radii.size());
  for (double r : radii) {
    const auto it = std::upper_bound(sorted_dist.begin(), sorted_dist.end(), r);
    const std::size_t cnt = it - sorted_dist.begin();
    gs.masses.push_back(cnt == 0 ? 0.0 : prefix[cnt - 1]);
  }
  return gs;
}

DimensionEstimate estimate_dimension(const GrowthSamples& gs) {
  const std::size_t m = gs.radii.size();
  if (m < 5)
    throw std::invalid_argument("estimate_dimension: need at least 5 samples");
  const double span = gs.radii.back() / gs.radii.front();
  if (!(span >= 4.0))
    throw std::invalid_argument("estimate_dimension: radii must span >= 2 dyadic scales");
  std::vector<double> x(m), y(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!(gs.masses[k] > 0.0))
      throw std::domain_error("estimate_dimension: nonpositive ball mass");
    x[k] = std::log(gs.radii[k]);
    y[k] = std::log(gs.masses[k]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double e = y[k] - intercept - slope * x[k];
    rss += e * e;
  }
  DimensionEstimate est;
  est.d = slope;
  est.half_width = m > 2 ? std::sqrt(rss / (m - 2) / sxx) : 0.0;
  return est;
}

DgammaReference dgamma_reference(double gamma) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::invalid_argument("dgamma_reference: gamma must lie in (0,2)");
  DgammaReference ref;
  const double sqrt83 = std::sqrt(8.0 / 3.0);
  const double sqrt2 = std::sqrt(2.0);
  if (std::abs(gamma - sqrt83) < 1e-12) {
    ref.kind = DgammaReference::Kind::exact;
    ref.value = 4.0;
  } else if (std::abs(gamma - sqrt2) < 1e-12) {
    ref.kind = DgammaReference::Kind::bounds;
    ref.lower = 3.550408;
    ref.upper = 3.63299;
  } else {
    ref.kind = DgammaReference::Kind::unknown;
  }
  return ref;
}

std::vector<double> growth_radii(const MetricField& mf, int count, double lo_pct,
                                 double hi_pct) {
  if (count < 2) throw std::invalid_argument("growth_radii: count >= 2");
  std::vector<double> d = mf.dist;
  std::sort(d.begin(), d.end());
  auto pct = [&](double p) {
    const std::size_t k = static_cast<std::size_t>(p * (d.size() - 1));
    return d[k];
  };
  // Margin keeps the top rung strictly inside the ball_growth range guard
  // after the pow/exp round trip.
  double hi = std::min(pct(hi_pct), 0.5 * d.back() * (1.0 - 1e-9));
  // The percentile window can be narrower than the two dyadic scales the
  // regression needs (ball mass grows steeply in r); extend the lower anchor
  // downward until the ladder spans a factor > 4.
  const double lo = std::min(pct(lo_pct), hi / 4.05);
  if (!(lo > 0.0) || !(hi > lo))
    throw std::domain_error("growth_radii: degenerate distance distribution");
  std::vector<double> radii(count);
  const double ratio = hi / lo;
  for (int k = 0; k < count; ++k)
    radii[k] = lo * std::pow(ratio, static_cast<double>(k) / (count - 1));
  return radii;
}

}  // namespace lqg
