#include "lqg/gff.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "lqg/rng.hpp"

namespace lqg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe; execution of a plan on its own arrays is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

double mode_eigenvalue(int n, int j, int k) {
  // 5-point Laplacian eigenvalue for sine mode (j,k), 1-based.
  const double sj = std::sin(0.5 * std::numbers::pi * j / (n + 1));
  const double sk = std::sin(0.5 * std::numbers::pi * k / (n + 1));
  return 4.0 * (sj * sj + sk * sk);
}

// Coefficient scaling turning unit Gaussians into unit-energy mode weights:
// the mode matrix has squared l2 norm ((n+1)/2)^2 and energy lambda/(2pi)
// per unit of that, so the sampled field is
//   h = (2/(n+1)) * sum alpha_jk sqrt(2pi/lambda_jk) sin(..)sin(..).
double mode_scale(int n, int j, int k) {
  return 2.0 / (n + 1) * std::sqrt(kTwoPi / mode_eigenvalue(n, j, k));
}

}  // namespace

EnergyForm::EnergyForm(int n_) : n(n_) {
  if (n_ < 1) throw std::invalid_argument("EnergyForm: n must be >= 1");
}

double EnergyForm::operator()(const GridField& f, const GridField& g) const {
  return dirichlet_inner(f, g);
}

std::vector<double> EnergyForm::dense() const {
  if (n > 64) throw std::length_error("EnergyForm::dense: n > 64");
  const int N = n * n;
  std::vector<double> m(static_cast<std::size_t>(N) * N, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int v = i * n + j;
      m[static_cast<std::size_t>(v) * N + v] = 4.0 / kTwoPi;
      const int di[4] = {0, 0, 1, -1};
      const int dj[4] = {1, -1, 0, 0};
      for (int d = 0; d < 4; ++d) {
        const int ii = i + di[d], jj = j + dj[d];
        if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
        m[static_cast<std::size_t>(v) * N + ii * n + jj] = -1.0 / kTwoPi;
      }
    }
  return m;
}

double dirichlet_inner(const GridField& f, const GridField& g) {
  if (f.n != g.n)
    throw std::invalid_argument("dirichlet_inner: size mismatch");
  const int n = f.n;
  auto fv = [&](int i, int j) -> double {
    return (i < 0 || i >= n || j < 0 || j >= n) ? 0.0 : f.at(i, j);
  };
  auto gv = [&](int i, int j) -> double {
    return (i < 0 || i >= n || j < 0 || j >= n) ? 0.0 : g.at(i, j);
  };
  double s = 0.0;
  // Each nearest-neighbor pair once: rightward and downward edges on the
  // extended grid, which covers every interior-interior and interior-frame
  // pair with a nonzero contribution.
  for (int i = -1; i <= n; ++i)
    for (int j = -1; j <= n; ++j) {
      if (i >= 0 && i < n)  // horizontal edge (i,j)-(i,j+1)
        s += (fv(i, j) - fv(i, j + 1)) * (gv(i, j) - gv(i, j + 1));
      if (j >= 0 && j < n)  // vertical edge (i,j)-(i+1,j)
        s += (fv(i, j) - fv(i + 1, j)) * (gv(i, j) - gv(i + 1, j));
    }
  return s / kTwoPi;
}

std::vector<double> gff_coefficients(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gff_coefficients: n must be >= 2");
  Rng rng(seed);
  std::vector<double> alpha(static_cast<std::size_t>(n) * n);
  for (double& a : alpha) a = rng.gaussian();
  return alpha;
}

GridField gff_from_coefficients(int n, std::span<const double> alpha) {
  if (n < 2) throw std::invalid_argument("gff_from_coefficients: n must be >= 2");
  if (alpha.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("gff_from_coefficients: coefficient count != n^2");
  const std::size_t N = static_cast<std::size_t>(n) * n;
  double* buf = fftw_alloc_real(N);
  // 2D RODFT00 multiplies each mode by 4; fold that into the scaling.
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k)
      buf[static_cast<std::size_t>(j - 1) * n + (k - 1)] =
          0.25 * mode_scale(n, j, k) * alpha[static_cast<std::size_t>(j - 1) * n + (k - 1)];
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_r2r_2d(n, n, buf, buf, FFTW_RODFT00, FFTW_RODFT00,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  GridField f(n, GridField::Kind::raw);
  for (std::size_t i = 0; i < N; ++i) f.values[i] = buf[i];
  fftw_free(buf);
  return f;
}

GridField gff_from_coefficients_direct(int n, std::span<const double> alpha) {
  if (n > 64) throw std::length_error("gff_from_coefficients_direct: n > 64");
  if (alpha.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("gff_from_coefficients_direct: coefficient count != n^2");
  GridField f(n, GridField::Kind::raw);
  const double w = std::numbers::pi / (n + 1);
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q) {
      double s = 0.0;
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
          s += mode_scale(n, j, k) * alpha[static_cast<std::size_t>(j - 1) * n + (k - 1)] *
               std::sin(w * j * p) * std::sin(w * k * q);
      f.at(p - 1, q - 1) = s;
    }
  return f;
}

GridField sample_gff(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_gff: n must be >= 2");
  return gff_from_coefficients(n, gff_coefficients(n, seed));
}

CholeskyGffSampler::CholeskyGffSampler(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("CholeskyGffSampler: n must be >= 1");
  if (n > 64) throw std::length_error("CholeskyGffSampler: n > 64");
  const int N = n * n;
  EnergyForm form(n);
  const std::vector<double> e = form.dense();
  Eigen::MatrixXd E(N, N);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) E(r, c) = e[static_cast<std::size_t>(r) * N + c];
  const Eigen::MatrixXd cov = E.llt().solve(Eigen::MatrixXd::Identity(N, N));
  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();
  factor_.assign(static_cast<std::size_t>(N) * N, 0.0);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c <= r; ++c) factor_[static_cast<std::size_t>(r) * N + c] = L(r, c);
}

GridField CholeskyGffSampler::sample(std::uint64_t seed) const {
  const int N = n_ * n_;
  Rng rng(seed);
  std::vector<double> z(N);
  for (double& v : z) v = rng.gaussian();
  GridField f(n_, GridField::Kind::raw);
  for (int r = 0; r < N; ++r) {
    double s = 0.0;
    const double* row = factor_.data() + static_cast<std::size_t>(r) * N;
    for (int c = 0; c <= r; ++c) s += row[c] * z[c];
    f.values[r] = s;
  }
  return f;
}

GridField sample_gff_cholesky(int n, std::uint64_t seed) {
  CholeskyGffSampler sampler(n);
  return sampler.sample(seed);
}

GridField mollify(const GridField& field, double eps) {
  if (field.kind != GridField::Kind::raw)
    throw std::invalid_argument("mollify: field must be raw");
  if (eps < field.spacing)
    throw std::invalid_argument("mollify: eps below lattice spacing");
  const int n = field.n;
  const double s = field.spacing;
  const int w = static_cast<int>(std::ceil(4.0 * eps / s));
  std::vector<double> taps(2 * w + 1);
  for (int d = -w; d <= w; ++d) {
    const double t = d * s / eps;
    taps[d + w] = std::exp(-t * t);
  }
  // Separable two-pass convolution; the per-point normalizer is the product
  // of the clipped per-axis tap masses, so constants pass through exactly.
  std::vector<double> rowpass(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> rowmass(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double m = 0.0;
    for (int d = -w; d <= w; ++d)
      if (j + d >= 0 && j + d < n) m += taps[d + w];
    rowmass[j] = m;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      const int lo = std::max(-w, -j), hi = std::min(w, n - 1 - j);
      for (int d = lo; d <= hi; ++d) acc += taps[d + w] * field.at(i, j + d);
      rowpass[static_cast<std::size_t>(i) * n + j] = acc;
    }
  GridField out(n, GridField::Kind::mollified, eps);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      const int lo = std::max(-w, -i), hi = std::min(w, n - 1 - i);
      for (int d = lo; d <= hi; ++d)
        acc += taps[d + w] * rowpass[static_cast<std::size_t>(i + d) * n + j];
      out.at(i, j) = acc / (rowmass[i] * rowmass[j]);
    }
  return out;
}

double circle_average(const GridField& field, Point center, double r) {
  if (r < 2.0 * field.spacing)
    throw std::invalid_argument("circle_average: r below 2*spacing");
  if (center.x - r < 0.0 || center.x + r > 1.0 || center.y - r < 0.0 ||
      center.y + r > 1.0)
    throw std::out_of_range("circle_average: circle exits the unit square");
  const int m = 64 * static_cast<int>(std::ceil(r / field.spacing));
  double s = 0.0;
  for (int t = 0; t < m; ++t) {
    const double a = kTwoPi * t / m;
    s += field.interpolate({center.x + r * std::cos(a), center.y + r * std::sin(a)});
  }
  return s / m;
}

}  // namespace lqg
