#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lqg/gff.hpp"
#include "lqg/rng.hpp"
#include "support/oracles.hpp"
#include "support/stats.hpp"

using namespace lqg;
using namespace lqg::testsupport;

TEST_CASE("sample_gff rejects degenerate sizes") {
  CHECK_THROWS_AS(sample_gff(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_gff(0, 0), std::invalid_argument);
}

TEST_CASE("zero coefficients give the zero field") {
  const std::vector<double> zeros(4, 0.0);
  const GridField f = gff_from_coefficients(2, zeros);
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("same seed reproduces identical bits") {
  const GridField a = sample_gff(8, 12345);
  const GridField b = sample_gff(8, 12345);
  CHECK(a.values == b.values);
  const GridField c = sample_gff(8, 12346);
  CHECK(a.values != c.values);
}

TEST_CASE("fast sine transform path matches the direct double sum") {
  for (int n : {2, 3, 8, 17}) {
    const auto alpha = gff_coefficients(n, 77 + n);
    const GridField fast = gff_from_coefficients(n, alpha);
    const GridField direct = gff_from_coefficients_direct(n, alpha);
    for (std::size_t k = 0; k < fast.values.size(); ++k)
      CHECK(fast.values[k] == doctest::Approx(direct.values[k]).epsilon(1e-10));
  }
}

TEST_CASE("n=2 cholesky factor squares to the inverse energy form") {
  const int n = 2, N = 4;
  const Eigen::MatrixXd cov = dense_covariance(n);
  CholeskyGffSampler sampler(n);
  const auto& f = sampler.factor();
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      double s = 0.0;
      for (int k = 0; k < N; ++k)
        s += f[static_cast<std::size_t>(r) * N + k] * f[static_cast<std::size_t>(c) * N + k];
      CHECK(s == doctest::Approx(cov(r, c)).epsilon(1e-10));
    }
  CHECK_THROWS_AS(sample_gff_cholesky(65, 1), std::length_error);
}

TEST_CASE("cholesky sampler is deterministic in the seed") {
  const GridField a = sample_gff_cholesky(4, 9);
  const GridField b = sample_gff_cholesky(4, 9);
  CHECK(a.values == b.values);
}

TEST_CASE("spectral and cholesky samplers agree in law (KS at 1%)") {
  // Pointwise marginal at the center vertex of an 8x8 grid, 20000 draws each.
  const int n = 8, draws = 20000;
  CholeskyGffSampler sampler(n);
  std::vector<double> a, b;
  a.reserve(draws);
  b.reserve(draws);
  for (int s = 0; s < draws; ++s) {
    a.push_back(sample_gff(n, derive_seed(21, s)).at(3, 3));
    b.push_back(sampler.sample(derive_seed(22, s)).at(3, 3));
  }
  const double ks = ks_two_sample(a, b);
  CHECK(ks < ks_crit_1pct_two(draws, draws));
}

TEST_CASE("a fixed linear functional of the field is standard normal (KS at 1%)") {
  // Functional: field value at (1,2) scaled by its oracle standard deviation.
  const int n = 8, draws = 8000;
  const Eigen::MatrixXd cov = dense_covariance(n);
  const int idx = 1 * n + 2;
  const double sd = std::sqrt(cov(idx, idx));
  std::vector<double> z;
  z.reserve(draws);
  for (int s = 0; s < draws; ++s)
    z.push_back(sample_gff(n, derive_seed(31, s)).values[idx] / sd);
  CHECK(ks_vs_std_normal(z) < ks_crit_1pct_one(draws));
}

TEST_CASE("dirichlet inner product basics") {
  const GridField zero(4);
  CHECK(dirichlet_inner(zero, zero) == 0.0);
  const GridField a = sample_gff(4, 1);
  const GridField b = sample_gff(4, 2);
  CHECK(dirichlet_inner(a, b) == doctest::Approx(dirichlet_inner(b, a)).epsilon(1e-14));
  CHECK_THROWS_AS(dirichlet_inner(a, sample_gff(5, 1)), std::invalid_argument);
}

TEST_CASE("first sine eigenmode has energy lambda_1 |f|^2 / 2pi") {
  const int n = 4;
  GridField f(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      f.at(i, j) = std::sin(std::numbers::pi * (i + 1) / (n + 1)) *
                   std::sin(std::numbers::pi * (j + 1) / (n + 1));
  // Independent spectral oracle: smallest eigenvalue of the dense form.
  const Eigen::MatrixXd E = dense_energy(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(E);
  const double lambda1_over_2pi = eig.eigenvalues()(0);
  double norm2 = 0.0;
  for (double v : f.values) norm2 += v * v;
  CHECK(dirichlet_inner(f, f) == doctest::Approx(lambda1_over_2pi * norm2).epsilon(1e-10));
}

TEST_CASE("mollify preserves constants exactly and is linear") {
  const int n = 32;
  const GridField c = GridField::constant(n, 2.5);
  const GridField cm = mollify(c, 4.0 * c.spacing);
  CHECK(cm.kind == GridField::Kind::mollified);
  CHECK(cm.eps == doctest::Approx(4.0 * c.spacing));
  for (double v : cm.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-13));

  const GridField a = sample_gff(n, 5);
  const GridField b = sample_gff(n, 6);
  GridField sum(n);
  for (std::size_t k = 0; k < sum.values.size(); ++k)
    sum.values[k] = 2.0 * a.values[k] - 3.0 * b.values[k];
  const GridField ma = mollify(a, 3.0 * a.spacing);
  const GridField mb = mollify(b, 3.0 * a.spacing);
  const GridField ms = mollify(sum, 3.0 * a.spacing);
  for (std::size_t k = 0; k < sum.values.size(); ++k)
    CHECK(ms.values[k] ==
          doctest::Approx(2.0 * ma.values[k] - 3.0 * mb.values[k]).epsilon(1e-11));
}

TEST_CASE("mollify rejects mollified input and sub-lattice scales") {
  const GridField a = sample_gff(8, 3);
  const GridField m = mollify(a, 2.0 * a.spacing);
  CHECK_THROWS_AS(mollify(m, 2.0 * a.spacing), std::invalid_argument);
  CHECK_THROWS_AS(mollify(a, 0.5 * a.spacing), std::invalid_argument);
}

TEST_CASE("mollified delta matches direct kernel summation") {
  const int n = 33;
  GridField delta(n);
  delta.at(16, 16) = 1.0;
  const double eps = 3.0 * delta.spacing;
  const GridField m = mollify(delta, eps);
  // Direct two-dimensional renormalized sum, independent of the separable
  // two-pass implementation.
  const int w = static_cast<int>(std::ceil(4.0 * eps / delta.spacing));
  for (int i = 10; i <= 22; ++i)
    for (int j = 10; j <= 22; ++j) {
      double num = 0.0, den = 0.0;
      for (int di = -w; di <= w; ++di)
        for (int dj = -w; dj <= w; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
          const double dx = di * delta.spacing / eps;
          const double dy = dj * delta.spacing / eps;
          const double k = std::exp(-(dx * dx + dy * dy));
          den += k;
          num += k * delta.at(ii, jj);
        }
      CHECK(m.at(i, j) == doctest::Approx(num / den).epsilon(1e-12));
    }
}

TEST_CASE("domain-size bandwidth flattens the field") {
  const GridField a = sample_gff(32, 8);
  const GridField m = mollify(a, 1.0);  // eps = domain diameter scale
  auto range = [](const GridField& f) {
    double lo = f.values[0], hi = f.values[0];
    for (double v : f.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi - lo;
  };
  CHECK(range(m) < 0.1 * range(a));
}

TEST_CASE("circle average of constants and linear fields") {
  const int n = 64;
  const GridField c = GridField::constant(n, 1.75);
  CHECK(circle_average(c, {0.5, 0.5}, 0.25) == doctest::Approx(1.75).epsilon(1e-12));
  GridField lin(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lin.at(i, j) = 3.0 * lin.x_of(j);
  // Mean-value property: the average of a function linear in x over a circle
  // is its center value; bilinear interpolation is exact on it.
  CHECK(circle_average(lin, {0.5, 0.5}, 0.2) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK_THROWS_AS(circle_average(c, {0.1, 0.5}, 0.25), std::out_of_range);
  CHECK_THROWS_AS(circle_average(c, {0.5, 0.5}, 0.5 * c.spacing), std::invalid_argument);
}

TEST_CASE("circle-average variance increment is log 2 (Monte Carlo)") {
  // Var of circle_average(h, z, r) minus the same at r/2 targets log 2 for
  // the 2pi-normalized field.  n = 512, 5000 samples, 10% tolerance.
  const int n = 512, draws = 5000;
  const Point z{0.5, 0.5};
  const double r = 0.125;
  std::vector<double> big(draws), small(draws);
  for (int s = 0; s < draws; ++s) {
    const GridField h = sample_gff(n, derive_seed(41, s));
    big[s] = circle_average(h, z, r);
    small[s] = circle_average(h, z, r / 2);
  }
  const double vb = sd_of(big) * sd_of(big);
  const double vs = sd_of(small) * sd_of(small);
  CHECK(vs - vb == doctest::Approx(std::log(2.0)).epsilon(0.10));
}
