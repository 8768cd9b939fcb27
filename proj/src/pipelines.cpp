#include "lqg/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "lqg/embed.hpp"
#include "lqg/gff.hpp"
#include "lqg/io.hpp"
#include "lqg/parallel.hpp"
#include "lqg/render.hpp"
#include "lqg/rng.hpp"

namespace lqg {

namespace {

namespace fs = std::filesystem;

// Sub-stream tag for seed streams independent of the field draw.
constexpr std::uint64_t kPointStream = 0x502;

std::string path_in(const ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

GridField mollified_field(const ExperimentConfig& cfg, std::uint64_t seed) {
  const GridField raw = pipeline_field(cfg, seed);
  return mollify(raw, cfg.eps_mult * raw.spacing);
}

double median_finite(const std::vector<double>& v) {
  std::vector<double> d = v;
  std::sort(d.begin(), d.end());
  return d[d.size() / 2];
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["gamma"] = cfg.gamma;
  j["n"] = cfg.n;
  j["eps_mult"] = cfg.eps_mult;
  if (cfg.dgamma) j["dgamma"] = *cfg.dgamma;
  j["seed"] = cfg.seed;
  j["replicas"] = cfg.replicas;
  j["out"] = cfg.out_dir;
  j["flat"] = cfg.flat;
  j["dyadic_threshold_frac"] = cfg.dyadic_threshold_frac;
  j["ball_radius_frac"] = cfg.ball_radius_frac;
  j["radii_count"] = cfg.radii_count;
  j["fp_iters"] = cfg.fp_iters;
  j["grid_targets"] = cfg.grid_targets;
  j["coord_a"] = cfg.coord_a;
  j["map_size"] = cfg.map_size;
  j["points"] = cfg.points;
  j["density_res"] = cfg.density_res;
  j["tutte_tol"] = cfg.tutte_tol;
  j["roundtrip"] = cfg.roundtrip;
  j["max_n"] = cfg.max_n;
  return j;
}

void write_manifest(const std::string& subcommand, const ExperimentConfig& cfg,
                    RunResult& res) {
  nlohmann::json m;
  m["subcommand"] = subcommand;
  m["config"] = config_json(cfg);
  m["seed_rule"] = "replica k uses derive_seed(seed, k) (splitmix64 mix)";
  m["artifacts"] = res.artifacts;
  m["summary"] = res.summary;
  const std::string path = path_in(cfg, "manifest.json");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write manifest: " + path);
  os << m.dump(2) << "\n";
  res.artifacts.push_back(path);
}

}  // namespace

double parse_gamma(const std::string& text) {
  if (text == "sqrt2") return std::sqrt(2.0);
  if (text == "sqrt3") return std::sqrt(3.0);
  if (text == "sqrt83") return std::sqrt(8.0 / 3.0);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse gamma: " + text);
  }
  if (used != text.size())
    throw std::invalid_argument("cannot parse gamma: " + text);
  return v;
}

double resolve_dgamma(const ExperimentConfig& cfg) {
  if (cfg.dgamma) {
    if (!(*cfg.dgamma > 2.0))
      throw std::invalid_argument("dgamma must be > 2");
    return *cfg.dgamma;
  }
  const DgammaReference ref = dgamma_reference(cfg.gamma);
  switch (ref.kind) {
    case DgammaReference::Kind::exact:
      return ref.value;
    case DgammaReference::Kind::bounds:
      return 0.5 * (ref.lower + ref.upper);
    default:
      throw std::invalid_argument(
          "d_gamma is unknown for this gamma; pass --dgamma explicitly");
  }
}

GridField pipeline_field(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.flat) return GridField(cfg.n);
  return sample_gff(cfg.n, seed);
}

namespace {

// Fixed interior source lattice: a k-by-k grid at fractions 1/(k+1) ..
// k/(k+1) of the side.  Measure-sampled sources sit inside thick lumps of
// the mass field and depress the finite-size growth exponent; fixed sources
// target the same limit exponent with far less bias at these grid sizes.
std::vector<Vertex> dim_sources(int n, int k) {
  std::vector<Vertex> out;
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= k; ++b) out.push_back({a * n / (k + 1), b * n / (k + 1)});
  return out;
}

std::vector<GrowthSamples> dim_field_sources(const ExperimentConfig& cfg,
                                             double dgamma, std::uint64_t seed) {
  const GridField hm = mollified_field(cfg, seed);
  const MassGrid masses = gmc_masses(hm, cfg.gamma);
  const WeightGrid weights = lfpp_weights(hm, cfg.gamma, dgamma);
  const auto sources = dim_sources(cfg.n, std::max(1, cfg.sources));
  std::vector<GrowthSamples> out(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const MetricField mf = distance_field(weights, sources[s]);
    const std::vector<double> radii = growth_radii(mf, cfg.radii_count);
    out[s] = ball_growth(masses, mf, radii);
    out[s].seed = seed;
  }
  return out;
}

}  // namespace

GrowthSamples dim_replica(const ExperimentConfig& cfg, double dgamma,
                          std::uint64_t seed) {
  ExperimentConfig one = cfg;
  one.sources = 1;
  return dim_field_sources(one, dgamma, seed)[0];
}

DimRunResult dim_ensemble(const ExperimentConfig& cfg) {
  DimRunResult out;
  double d = resolve_dgamma(cfg);
  const int iters = std::max(1, cfg.fp_iters);
  for (int it = 0; it < iters; ++it) {
    std::vector<std::vector<GrowthSamples>> per_field(cfg.replicas);
    const double d_used = d;
    parallel_for(cfg.replicas, cfg.threads, [&](int k) {
      per_field[k] = dim_field_sources(cfg, d_used,
                                       derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    });
    out.growth.clear();
    out.estimates.clear();
    for (auto& fs : per_field)
      for (auto& gs : fs) {
        out.estimates.push_back(estimate_dimension(gs));
        out.growth.push_back(std::move(gs));
      }
    double mean = 0.0;
    for (const auto& e : out.estimates) mean += e.d;
    mean /= out.estimates.size();
    double var = 0.0;
    for (const auto& e : out.estimates) var += (e.d - mean) * (e.d - mean);
    out.sd_d = out.estimates.size() > 1 ? std::sqrt(var / (out.estimates.size() - 1)) : 0.0;
    out.iterate_means.push_back(mean);
    out.mean_d = mean;
    out.dgamma_used = d_used;
    d = std::max(2.0 + 1e-6, mean);  // next iterate exponent
  }
  return out;
}

RunResult run_gff(const ExperimentConfig& cfg) {
  RunResult res;
  std::vector<GridField> fields(cfg.replicas);
  parallel_for(cfg.replicas, cfg.threads, [&](int k) {
    fields[k] = pipeline_field(cfg, derive_seed(cfg.seed, k));
  });
  for (int k = 0; k < cfg.replicas; ++k) {
    const std::string base = "field_" + std::to_string(k);
    write_lqgf(fields[k], path_in(cfg, base + ".lqgf"));
    write_ppm(render_field(fields[k], Colormap::rainbow), path_in(cfg, base + ".ppm"));
    res.artifacts.push_back(path_in(cfg, base + ".lqgf"));
    res.artifacts.push_back(path_in(cfg, base + ".ppm"));
  }
  res.summary["replicas"] = cfg.replicas;
  return res;
}

RunResult run_gmc(const ExperimentConfig& cfg) {
  RunResult res;
  std::vector<MassGrid> grids(cfg.replicas);
  parallel_for(cfg.replicas, cfg.threads, [&](int k) {
    grids[k] = gmc_masses(mollified_field(cfg, derive_seed(cfg.seed, k)), cfg.gamma);
  });
  double mean_total = 0.0;
  for (int k = 0; k < cfg.replicas; ++k) {
    const std::string base = "mass_" + std::to_string(k);
    write_lqgm(grids[k], path_in(cfg, base + ".lqgm"));
    // Masses span many orders of magnitude; render their logs.
    std::vector<double> logm(grids[k].masses.size());
    for (std::size_t t = 0; t < logm.size(); ++t) logm[t] = std::log(grids[k].masses[t]);
    write_ppm(render_field(logm, grids[k].n, Colormap::rainbow),
              path_in(cfg, base + ".ppm"));
    res.artifacts.push_back(path_in(cfg, base + ".lqgm"));
    res.artifacts.push_back(path_in(cfg, base + ".ppm"));
    mean_total += grids[k].total();
  }
  res.summary["mean_total_mass"] = mean_total / cfg.replicas;
  return res;
}

RunResult run_dyadic(const ExperimentConfig& cfg) {
  RunResult res;
  nlohmann::json spans = nlohmann::json::array();
  for (int k = 0; k < cfg.replicas; ++k) {
    const MassGrid mass = gmc_masses(mollified_field(cfg, derive_seed(cfg.seed, k)), cfg.gamma);
    const auto leaves = dyadic_decompose(mass, cfg.dyadic_threshold_frac * mass.total());
    const std::string base = "dyadic_" + std::to_string(k);
    write_dyadic_csv(leaves, path_in(cfg, base + ".csv"));
    write_ppm(render_dyadic(leaves, cfg.n), path_in(cfg, base + ".ppm"));
    res.artifacts.push_back(path_in(cfg, base + ".csv"));
    res.artifacts.push_back(path_in(cfg, base + ".ppm"));
    int lo = leaves.front().level, hi = leaves.front().level;
    for (const auto& l : leaves) {
      lo = std::min(lo, l.level);
      hi = std::max(hi, l.level);
    }
    spans.push_back(hi - lo);
  }
  res.summary["level_spans"] = spans;
  return res;
}

RunResult run_metric(const ExperimentConfig& cfg) {
  RunResult res;
  const double dgamma = resolve_dgamma(cfg);
  for (int k = 0; k < cfg.replicas; ++k) {
    const GridField hm = mollified_field(cfg, derive_seed(cfg.seed, k));
    const WeightGrid w = lfpp_weights(hm, cfg.gamma, dgamma);
    const MetricField mf = distance_field(w, {cfg.n / 2, cfg.n / 2});
    const std::string base = "dist_" + std::to_string(k);
    write_distance_field(mf, path_in(cfg, base + ".lqgf"));
    write_ppm(render_field(mf.dist, mf.n, Colormap::rainbow), path_in(cfg, base + ".ppm"));
    res.artifacts.push_back(path_in(cfg, base + ".lqgf"));
    res.artifacts.push_back(path_in(cfg, base + ".ppm"));
  }
  res.summary["dgamma"] = dgamma;
  return res;
}

RunResult run_ball(const ExperimentConfig& cfg) {
  RunResult res;
  const double dgamma = resolve_dgamma(cfg);
  const GridField hm = mollified_field(cfg, cfg.seed);
  const WeightGrid w = lfpp_weights(hm, cfg.gamma, dgamma);
  const MetricField mf = distance_field(w, {cfg.n / 2, cfg.n / 2});
  const double r = cfg.ball_radius_frac * median_finite(mf.dist);
  const auto mask = metric_ball(mf, r);
  // Geodesics from a regular grid of targets back to the center.
  std::vector<Vertex> targets;
  const int g = cfg.grid_targets;
  for (int a = 1; a <= g; ++a)
    for (int b = 1; b <= g; ++b)
      targets.push_back({a * cfg.n / (g + 1), b * cfg.n / (g + 1)});
  const std::vector<double> shells{0.25 * r, 0.5 * r, 0.75 * r, r};
  const GeodesicTree tree = geodesic_tree(mf, targets, shells);
  write_ppm(render_ball_tree(mf, mask, tree), path_in(cfg, "ball.ppm"));
  write_tree_csv(tree, mf.n, mf.spacing, path_in(cfg, "tree.csv"));
  write_distance_field(mf, path_in(cfg, "dist.lqgf"));
  res.artifacts = {path_in(cfg, "ball.ppm"), path_in(cfg, "tree.csv"),
                   path_in(cfg, "dist.lqgf")};
  res.summary["radius"] = r;
  res.summary["shell_crossings"] = tree.shell_crossings;
  return res;
}

RunResult run_dim(const ExperimentConfig& cfg) {
  RunResult res;
  const DimRunResult dr = dim_ensemble(cfg);
  const double count = static_cast<double>(dr.estimates.size());
  DimensionEstimate ensemble{dr.mean_d, count > 1 ? dr.sd_d / std::sqrt(count) : 0.0};
  write_growth_csv(dr.growth, ensemble, path_in(cfg, "growth.csv"));
  res.artifacts.push_back(path_in(cfg, "growth.csv"));
  res.summary["d_hat"] = dr.mean_d;
  res.summary["half_width"] = ensemble.half_width;
  res.summary["dgamma_used"] = dr.dgamma_used;
  res.summary["iterate_means"] = dr.iterate_means;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& e : dr.estimates) per.push_back(e.d);
  res.summary["replica_estimates"] = per;
  return res;
}

RunResult run_coordcheck(const ExperimentConfig& cfg) {
  RunResult res;
  const CoordChangeResult main = coord_change_check(
      cfg.gamma, cfg.coord_a, cfg.replicas, cfg.seed, cfg.n, cfg.eps_mult,
      std::nullopt, cfg.threads);
  const CoordChangeResult control = coord_change_check(
      cfg.gamma, cfg.coord_a, cfg.replicas, cfg.seed, cfg.n, cfg.eps_mult,
      2.0 / cfg.gamma, cfg.threads);
  std::ofstream os(path_in(cfg, "ratios.csv"));
  os << "replica,ratio,control_ratio\n";
  os.precision(17);
  for (int k = 0; k < cfg.replicas; ++k)
    os << k << "," << main.ratios[k] << "," << control.ratios[k] << "\n";
  res.artifacts.push_back(path_in(cfg, "ratios.csv"));
  res.summary["mean_ratio"] = main.mean_ratio;
  res.summary["q"] = main.q;
  res.summary["control_mean_ratio"] = control.mean_ratio;
  res.summary["control_q"] = control.q;
  return res;
}

RunResult run_mullin(const ExperimentConfig& cfg) {
  RunResult res;
  if (cfg.roundtrip) {
    nlohmann::json counts = nlohmann::json::array();
    for (int n = 1; n <= cfg.max_n; ++n) {
      const auto walks = enumerate_quadrant_excursions(n);
      std::size_t roundtrips_ok = 0;
      for (const auto& w : walks) {
        const Walk2D back = mullin_encode(mullin_decode(w));
        if (back.steps == w.steps) ++roundtrips_ok;
      }
      counts.push_back({{"n", n},
                        {"excursions", walks.size()},
                        {"roundtrip_identities", roundtrips_ok}});
      if (roundtrips_ok != walks.size())
        throw std::runtime_error("mullin round-trip failed at n=" + std::to_string(n));
    }
    res.summary["enumeration"] = counts;
  }
  const int ne = std::max(1, cfg.map_size);
  const Walk2D walk = sample_quadrant_excursion(ne, cfg.seed);
  const PlanarMapGraph map = mullin_decode(walk);
  write_walk_csv(walk, path_in(cfg, "walk.csv"));
  write_map_edges(map, path_in(cfg, "map.txt"));
  res.artifacts = {path_in(cfg, "walk.csv"), path_in(cfg, "map.txt")};
  res.summary["edges"] = map.num_edges();
  res.summary["vertices"] = map.num_vertices();
  return res;
}

RunResult run_matedcrt(const ExperimentConfig& cfg) {
  RunResult res;
  const Walk2D walk = sample_correlated_walk(cfg.map_size, cfg.gamma, cfg.seed);
  const PlanarMapGraph map = mated_crt_map(walk, cfg.map_size);
  write_walk_csv(walk, path_in(cfg, "walk.csv"));
  write_map_edges(map, path_in(cfg, "map.txt"));
  res.artifacts = {path_in(cfg, "walk.csv"), path_in(cfg, "map.txt")};
  int max_deg = 0;
  for (int v = 0; v < map.num_vertices(); ++v) max_deg = std::max(max_deg, map.degree(v));
  res.summary["vertices"] = map.num_vertices();
  res.summary["edges"] = map.num_edges();
  res.summary["simple_edges"] = map.num_simple_edges();
  res.summary["max_degree"] = max_deg;
  res.summary["connected"] = map.connected();
  return res;
}

RunResult run_tutte(const ExperimentConfig& cfg) {
  RunResult res;
  const Walk2D walk = sample_correlated_walk(cfg.map_size, cfg.gamma, cfg.seed);
  PlanarMapGraph map = mated_crt_map(walk, cfg.map_size);
  const std::vector<int> boundary = mated_crt_boundary(walk, cfg.map_size);
  // Close the boundary path into a cycle; the auxiliary edge is flagged in
  // the summary and the manifest.
  map.add_edge(boundary.back(), boundary.front());
  const Embedding emb = tutte_embed(map, boundary, cfg.tutte_tol);
  write_embedding_csv(emb, map, path_in(cfg, "embedding.csv"));
  const MassGrid density = vertex_density(emb, cfg.density_res);
  write_lqgm(density, path_in(cfg, "density.lqgm"));
  std::vector<double> logd(density.masses.size());
  for (std::size_t t = 0; t < logd.size(); ++t)
    logd[t] = std::log1p(density.masses[t] * density.masses.size());
  write_ppm(render_field(logd, density.n, Colormap::grayscale),
            path_in(cfg, "density.ppm"));
  res.artifacts = {path_in(cfg, "embedding.csv"), path_in(cfg, "density.lqgm"),
                   path_in(cfg, "density.ppm")};
  res.summary["residual"] = harmonic_residual(map, emb);
  res.summary["boundary_size"] = boundary.size();
  res.summary["auxiliary_closing_edge"] = {boundary.back(), boundary.front()};
  return res;
}

RunResult run_thickpoints(const ExperimentConfig& cfg) {
  RunResult res;
  if (cfg.n < 256)
    throw std::invalid_argument("thickpoints: n must be >= 256 for a usable scale ladder");
  const GridField raw = pipeline_field(cfg, cfg.seed);
  const GridField hm = mollify(raw, cfg.eps_mult * raw.spacing);
  const MassGrid masses = gmc_masses(hm, cfg.gamma);
  const double r_max = 0.125;
  const double r_min = std::max(16.0 * raw.spacing, r_max / 32.0);
  const int K = 8;
  std::vector<double> scales(K);
  for (int k = 0; k < K; ++k)
    scales[k] = r_max * std::pow(r_min / r_max, static_cast<double>(k) / (K - 1));
  // Measure-typical points, kept only where the largest circle fits.
  const int want = cfg.points;
  const auto cand = sample_mu_points(masses, 8 * want + 64,
                                     derive_seed(cfg.seed, kPointStream));
  std::vector<Point> pts;
  for (const Point& p : cand) {
    if (static_cast<int>(pts.size()) == want) break;
    const double margin = std::min(std::min(p.x, 1.0 - p.x), std::min(p.y, 1.0 - p.y));
    if (margin > r_max) pts.push_back(p);
  }
  if (static_cast<int>(pts.size()) < want)
    throw std::runtime_error("thickpoints: not enough interior measure samples");
  std::vector<double> slopes(pts.size());
  parallel_for(static_cast<int>(pts.size()), cfg.threads, [&](int k) {
    slopes[k] = thickness(raw, pts[k], scales);
  });
  std::ofstream os(path_in(cfg, "thickness.csv"));
  os << "x,y,thickness\n";
  os.precision(17);
  for (std::size_t k = 0; k < pts.size(); ++k)
    os << pts[k].x << "," << pts[k].y << "," << slopes[k] << "\n";
  res.artifacts.push_back(path_in(cfg, "thickness.csv"));
  double mean = 0.0;
  for (double s : slopes) mean += s;
  mean /= slopes.size();
  res.summary["mean_thickness"] = mean;
  res.summary["points"] = pts.size();
  res.summary["scales"] = scales;
  return res;
}

RunResult run_pipeline(const std::string& subcommand, const ExperimentConfig& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.gamma < 2.0))
    throw std::invalid_argument("gamma must lie in (0,2)");
  if (cfg.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  // Fail flag validation before touching the output directory.
  static const char* known[] = {"gff", "gmc", "dyadic", "metric", "ball", "dim",
                                "coordcheck", "mullin", "matedcrt", "tutte",
                                "thickpoints"};
  if (std::find_if(std::begin(known), std::end(known), [&](const char* s) {
        return subcommand == s;
      }) == std::end(known))
    throw std::invalid_argument("unknown subcommand: " + subcommand);
  if (subcommand == "metric" || subcommand == "ball" || subcommand == "dim")
    (void)resolve_dgamma(cfg);
  fs::create_directories(cfg.out_dir);
  RunResult res;
  if (subcommand == "gff") res = run_gff(cfg);
  else if (subcommand == "gmc") res = run_gmc(cfg);
  else if (subcommand == "dyadic") res = run_dyadic(cfg);
  else if (subcommand == "metric") res = run_metric(cfg);
  else if (subcommand == "ball") res = run_ball(cfg);
  else if (subcommand == "dim") res = run_dim(cfg);
  else if (subcommand == "coordcheck") res = run_coordcheck(cfg);
  else if (subcommand == "mullin") res = run_mullin(cfg);
  else if (subcommand == "matedcrt") res = run_matedcrt(cfg);
  else if (subcommand == "tutte") res = run_tutte(cfg);
  else if (subcommand == "thickpoints") res = run_thickpoints(cfg);
  else throw std::invalid_argument("unknown subcommand: " + subcommand);
  write_manifest(subcommand, cfg, res);
  return res;
}

}  // namespace lqg
