#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lqg/dim.hpp"

namespace lqg {

/// Parses "sqrt2", "sqrt3", "sqrt83" (= sqrt(8/3)) or a decimal literal.
double parse_gamma(const std::string& text);

struct ExperimentConfig {
  double gamma = 1.0;
  int n = 512;
  double eps_mult = 8.0;  // mollification scale as a multiple of spacing
  std::optional<double> dgamma;
  std::uint64_t seed = 1;
  int replicas = 1;
  std::string out_dir = "out";
  int threads = 0;  // 0: LQG_THREADS env or 1
  bool flat = false;  // control runs: replace the field by h == 0

  // Subcommand-specific knobs (defaults match the figure pipelines).
  double dyadic_threshold_frac = 1.0 / 1024.0;  // threshold = frac * total mass
  double ball_radius_frac = 0.5;   // ball radius = frac * median distance
  int radii_count = 12;            // dimension fit: radii per replica
  int sources = 3;                 // dimension fit: side of the fixed source grid
  int fp_iters = 1;                // dimension fit: fixed-point iterations
  int grid_targets = 12;           // geodesic-tree targets per axis (ball runs)
  double coord_a = 0.5;            // coordinate-change scale factor
  int map_size = 5000;             // mated-CRT vertex count
  int points = 100;                // thick-point sample count
  int density_res = 128;           // vertex-density histogram resolution
  double tutte_tol = 1e-9;
  bool roundtrip = false;          // mullin: run the enumeration/round-trip report
  int max_n = 3;                   // mullin: enumeration size cap
};

/// Resolved d_gamma for a run: the explicit value when given, 4 at
/// gamma = sqrt(8/3), the midpoint of the rigorous window at gamma = sqrt(2),
/// otherwise an error instructing the user to pass one.
double resolve_dgamma(const ExperimentConfig& cfg);

struct RunResult {
  nlohmann::json summary;
  std::vector<std::string> artifacts;
};

RunResult run_gff(const ExperimentConfig& cfg);
RunResult run_gmc(const ExperimentConfig& cfg);
RunResult run_dyadic(const ExperimentConfig& cfg);
RunResult run_metric(const ExperimentConfig& cfg);
RunResult run_ball(const ExperimentConfig& cfg);
RunResult run_dim(const ExperimentConfig& cfg);
RunResult run_coordcheck(const ExperimentConfig& cfg);
RunResult run_mullin(const ExperimentConfig& cfg);
RunResult run_matedcrt(const ExperimentConfig& cfg);
RunResult run_tutte(const ExperimentConfig& cfg);
RunResult run_thickpoints(const ExperimentConfig& cfg);

/// Dispatch by subcommand name; writes <out>/manifest.json recording the
/// full configuration, seeds and artifact list.
RunResult run_pipeline(const std::string& subcommand, const ExperimentConfig& cfg);

/// The field a pipeline starts from: zeros when cfg.flat, else the sampled
/// GFF for (n, seed).
GridField pipeline_field(const ExperimentConfig& cfg, std::uint64_t seed);

/// One dimension-estimation sample: on the given field, run the metric with
/// xi = gamma/dgamma from the center vertex and collect ball masses over a
/// geometric radius ladder anchored at the distance percentiles (10th to
/// 50th, lower anchor extended to keep a >= 2 dyadic-scale span).
GrowthSamples dim_replica(const ExperimentConfig& cfg, double dgamma,
                          std::uint64_t seed);

struct DimRunResult {
  std::vector<GrowthSamples> growth;           // per source, last iterate
  std::vector<DimensionEstimate> estimates;    // per source, last iterate
  std::vector<double> iterate_means;           // ensemble mean per iterate
  double mean_d = 0.0;
  double sd_d = 0.0;                           // across sources
  double dgamma_used = 0.0;                    // exponent used in the last iterate
};

/// Ensemble dimension estimate: cfg.replicas independent fields, each probed
/// from a fixed cfg.sources x cfg.sources interior source grid; d_hat is the
/// mean of the per-source log-log slopes.  Starts at the exponent from
/// resolve_dgamma and optionally iterates d(k+1) = estimate(xi = gamma/d(k))
/// fp_iters times.
DimRunResult dim_ensemble(const ExperimentConfig& cfg);

}  // namespace lqg
