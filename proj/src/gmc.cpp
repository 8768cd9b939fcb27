#include "lqg/gmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lqg/gff.hpp"
#include "lqg/parallel.hpp"
#include "lqg/rng.hpp"

namespace lqg {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double ols_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = x.size();
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
  return sxy / sxx;
}

}  // namespace

double MassGrid::total() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

MassGrid gmc_masses(const GridField& field, double gamma) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::invalid_argument("gmc_masses: gamma must lie in (0,2)");
  if (field.kind != GridField::Kind::mollified)
    throw std::invalid_argument("gmc_masses: field must be mollified");
  MassGrid m;
  m.n = field.n;
  m.spacing = field.spacing;
  m.gamma = gamma;
  m.eps = field.eps;
  m.masses.resize(field.values.size());
  const double pref = std::pow(field.eps, gamma * gamma / 2.0) * field.spacing * field.spacing;
  for (std::size_t k = 0; k < field.values.size(); ++k)
    m.masses[k] = pref * std::exp(gamma * field.values[k]);
  return m;
}

std::vector<DyadicSquare> dyadic_decompose(const MassGrid& mass, double threshold) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("dyadic_decompose: threshold must be > 0");
  if (!is_power_of_two(mass.n))
    throw std::invalid_argument("dyadic_decompose: n must be a power of two");
  const int n = mass.n;
  // Summed-area table; sat(i,j) = mass of cells [0,i) x [0,j).
  std::vector<double> sat(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sat[static_cast<std::size_t>(i + 1) * (n + 1) + (j + 1)] =
          mass.at(i, j) + sat[static_cast<std::size_t>(i) * (n + 1) + (j + 1)] +
          sat[static_cast<std::size_t>(i + 1) * (n + 1) + j] -
          sat[static_cast<std::size_t>(i) * (n + 1) + j];
  auto block_mass = [&](int r0, int r1, int c0, int c1) {
    return sat[static_cast<std::size_t>(r1) * (n + 1) + c1] -
           sat[static_cast<std::size_t>(r0) * (n + 1) + c1] -
           sat[static_cast<std::size_t>(r1) * (n + 1) + c0] +
           sat[static_cast<std::size_t>(r0) * (n + 1) + c0];
  };
  int max_level = 0;
  while ((1 << max_level) < n) ++max_level;

  std::vector<DyadicSquare> leaves;
  // Depth-first in quadrant order; a square at (level, i, j) owns cell rows
  // [i, i+1) * n/2^level and the analogous columns.
  struct Node {
    int level, i, j;
  };
  std::vector<Node> stack{{0, 0, 0}};
  while (!stack.empty()) {
    const Node nd = stack.back();
    stack.pop_back();
    const int side = n >> nd.level;
    const int r0 = nd.i * side, c0 = nd.j * side;
    const double m = block_mass(r0, r0 + side, c0, c0 + side);
    if (m <= threshold || nd.level == max_level) {
      leaves.push_back({nd.level, nd.i, nd.j, m});
      continue;
    }
    // Push in reverse so children pop in (2i,2j),(2i,2j+1),(2i+1,2j),(2i+1,2j+1) order.
    stack.push_back({nd.level + 1, 2 * nd.i + 1, 2 * nd.j + 1});
    stack.push_back({nd.level + 1, 2 * nd.i + 1, 2 * nd.j});
    stack.push_back({nd.level + 1, 2 * nd.i, 2 * nd.j + 1});
    stack.push_back({nd.level + 1, 2 * nd.i, 2 * nd.j});
  }
  return leaves;
}

std::vector<Point> sample_mu_points(const MassGrid& mass, int count, std::uint64_t seed) {
  const std::size_t N = mass.masses.size();
  std::vector<double> cum(N);
  double acc = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    acc += mass.masses[k];
    cum[k] = acc;
  }
  if (!(acc > 0.0)) throw std::domain_error("sample_mu_point: total mass is zero");
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  for (int t = 0; t < count; ++t) {
    const double u = rng.uniform() * acc;
    const std::size_t k =
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
    const std::size_t kk = std::min(k, N - 1);
    const int i = static_cast<int>(kk) / mass.n;
    const int j = static_cast<int>(kk) % mass.n;
    pts.push_back({(j + 1) * mass.spacing, (i + 1) * mass.spacing});
  }
  return pts;
}

Point sample_mu_point(const MassGrid& mass, std::uint64_t seed) {
  return sample_mu_points(mass, 1, seed)[0];
}

double thickness(const GridField& field, Point z, std::span<const double> scales) {
  if (scales.size() < 3)
    throw std::invalid_argument("thickness: need at least 3 scales");
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (scales[k] < 2.0 * field.spacing)
      throw std::invalid_argument("thickness: scale below 2*spacing");
    if (k > 0 && !(scales[k] < scales[k - 1]))
      throw std::invalid_argument("thickness: scales must be strictly decreasing");
  }
  std::vector<double> x(scales.size()), y(scales.size());
  for (std::size_t k = 0; k < scales.size(); ++k) {
    x[k] = std::log(1.0 / scales[k]);
    y[k] = circle_average(field, z, scales[k]);
  }
  return ols_slope(x, y);
}

double coord_change_q(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("coord_change_q: gamma must be > 0");
  return 2.0 / gamma + gamma / 2.0;
}

CoordChangeResult coord_change_check(double gamma, double a, int replicas,
                                     std::uint64_t seed, int n, double eps_mult,
                                     std::optional<double> q_override, int threads) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::invalid_argument("coord_change_check: gamma must lie in (0,2)");
  int inv_a = 0;
  if (a == 0.5) inv_a = 2;
  else if (a == 0.25) inv_a = 4;
  else throw std::invalid_argument("coord_change_check: a must be 1/2 or 1/4");
  if (replicas < 1) throw std::invalid_argument("coord_change_check: replicas >= 1");
  if (eps_mult < 1.0)
    throw std::invalid_argument("coord_change_check: eps_mult >= 1 required");

  const int nf = inv_a * (n + 1) - 1;      // refined lattice side
  const double sf = 1.0 / (nf + 1);        // = a * coarse spacing, exactly
  const double eps = eps_mult * sf;
  const double q = q_override.value_or(coord_change_q(gamma));
  const double shift = q * std::log(a);

  // Test square A = centered square of side 1/4; phi(A) = a*A.
  auto square_mass = [](const MassGrid& m, double x0, double x1) {
    double s = 0.0;
    for (int i = 0; i < m.n; ++i) {
      const double y = (i + 1) * m.spacing;
      if (y < x0 || y > x1) continue;
      for (int j = 0; j < m.n; ++j) {
        const double x = (j + 1) * m.spacing;
        if (x < x0 || x > x1) continue;
        s += m.at(i, j);
      }
    }
    return s;
  };

  std::vector<double> ratios(replicas, 0.0);
  parallel_for(replicas, threads, [&](int r) {
    const std::uint64_t rs = derive_seed(seed, static_cast<std::uint64_t>(r));
    const GridField fine = sample_gff(nf, rs);
    const GridField fine_mol = mollify(fine, eps);
    const MassGrid fine_mass = gmc_masses(fine_mol, gamma);
    const double mass_phi_a = square_mass(fine_mass, 3.0 * a / 8.0, 5.0 * a / 8.0);

    // Exact lattice pullback: coarse vertex (i,j) sits at a * (its position),
    // which is fine vertex (i,j).
    GridField coarse(n, GridField::Kind::raw);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) coarse.at(i, j) = fine.at(i, j);
    GridField coarse_mol = mollify(coarse, eps / a);
    for (double& v : coarse_mol.values) v += shift;
    const MassGrid coarse_mass = gmc_masses(coarse_mol, gamma);
    const double mass_a = square_mass(coarse_mass, 3.0 / 8.0, 5.0 / 8.0);

    ratios[r] = mass_a / mass_phi_a;
  });

  CoordChangeResult res;
  res.q = q;
  res.ratios = std::move(ratios);
  double s = 0.0;
  for (double v : res.ratios) s += v;
  res.mean_ratio = s / replicas;
  return res;
}

}  // namespace lqg
