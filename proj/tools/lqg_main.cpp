#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lqg/pipelines.hpp"

namespace {

struct CliOptions {
  std::string gamma_text = "1.0";
  std::string dgamma_text;
  std::string config_path;
  lqg::ExperimentConfig cfg;
};

void add_common_flags(CLI::App* sub, CliOptions& opt) {
  sub->add_option("--gamma", opt.gamma_text,
                  "gamma in (0,2); accepts sqrt2, sqrt3, sqrt83 or a decimal");
  sub->add_option("--n", opt.cfg.n, "grid side length");
  sub->add_option("--eps-mult", opt.cfg.eps_mult,
                  "mollification scale as a multiple of the lattice spacing");
  sub->add_option("--dgamma", opt.dgamma_text,
                  "metric-dimension exponent d_gamma (default: known value when one exists)");
  sub->add_option("--seed", opt.cfg.seed, "root RNG seed");
  sub->add_option("--replicas", opt.cfg.replicas, "independent replicas");
  sub->add_option("--out", opt.cfg.out_dir, "output directory");
  sub->add_flag("--flat", opt.cfg.flat, "replace the sampled field by h == 0 (control)");
  sub->add_option("--config", opt.config_path,
                  "file of key = value lines (flag names without dashes); "
                  "command-line flags win");
}

// Expands "--config FILE" into synthesized low-precedence flags placed right
// after the subcommand name; explicit flags come later and take precedence
// (every option uses a take-last policy).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  std::size_t at = 0;
  for (std::size_t k = 1; k + 1 < args.size(); ++k)
    if (args[k] == "--config") {
      path = args[k + 1];
      at = k;
      break;
    }
  if (path.empty() || at < 2) return args;
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "flat") {  // boolean flag takes no value
      if (value == "true" || value == "1") injected.push_back("--flat");
      continue;
    }
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  // args[1] is the subcommand; insert after it.
  std::vector<std::string> out(args.begin(), args.begin() + 2);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lqg: sampling and measurement pipelines for random-surface simulations\n"
      "Thread count is taken from the LQG_THREADS environment variable."};
  app.require_subcommand(1);
  CliOptions opt;

  CLI::App* gff = app.add_subcommand("gff", "sample fields, write LQGF + PPM");
  CLI::App* gmc = app.add_subcommand("gmc", "area-measure cell masses, LQGM + PPM");
  CLI::App* dyadic = app.add_subcommand("dyadic", "equal-mass dyadic decomposition");
  CLI::App* metric = app.add_subcommand("metric", "shortest-path distance field from the center");
  CLI::App* ball = app.add_subcommand("ball", "metric ball and geodesic tree image");
  CLI::App* dim = app.add_subcommand("dim", "ball-growth dimension estimate");
  CLI::App* coordcheck = app.add_subcommand("coordcheck", "scaling coordinate-change ratio");
  CLI::App* mullin = app.add_subcommand("mullin", "tree-decorated map codec and sampler");
  CLI::App* matedcrt = app.add_subcommand("matedcrt", "mated-CRT map from a correlated walk");
  CLI::App* tutte = app.add_subcommand("tutte", "harmonic embedding and vertex density");
  CLI::App* thickpoints = app.add_subcommand("thickpoints", "thickness at measure-typical points");
  for (CLI::App* sub : {gff, gmc, dyadic, metric, ball, dim, coordcheck, mullin,
                        matedcrt, tutte, thickpoints})
    add_common_flags(sub, opt);

  dyadic->add_option("--threshold-frac", opt.cfg.dyadic_threshold_frac,
                     "leaf mass threshold as a fraction of total mass");
  ball->add_option("--radius-frac", opt.cfg.ball_radius_frac,
                   "ball radius as a fraction of the median distance");
  ball->add_option("--grid-targets", opt.cfg.grid_targets, "targets per axis");
  dim->add_option("--radii", opt.cfg.radii_count, "radii per replica");
  dim->add_option("--sources", opt.cfg.sources, "side of the fixed source grid per field");
  dim->add_option("--fp-iters", opt.cfg.fp_iters,
                  "fixed-point iterations of the exponent bootstrap");
  coordcheck->add_option("--a", opt.cfg.coord_a, "scale factor (1/2 or 1/4)");
  mullin->add_flag("--roundtrip", opt.cfg.roundtrip,
                   "enumerate small walks and verify the codec round trip");
  mullin->add_option("--max-n", opt.cfg.max_n, "largest enumeration size");
  mullin->add_option("--edges", opt.cfg.map_size, "edge count of the sampled map");
  matedcrt->add_option("--vertices", opt.cfg.map_size, "vertex count");
  tutte->add_option("--vertices", opt.cfg.map_size, "vertex count");
  tutte->add_option("--density-res", opt.cfg.density_res, "density histogram resolution");
  tutte->add_option("--tol", opt.cfg.tutte_tol, "harmonic residual tolerance");
  thickpoints->add_option("--points", opt.cfg.points, "number of sampled points");

  // Config-file values are injected before explicit flags; the take-last
  // policy makes the explicit flags win.
  for (CLI::App* sub : app.get_subcommands({}))
    for (CLI::Option* o : sub->get_options())
      if (o->get_expected_min() > 0)
        o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    args.erase(args.begin());
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    opt.cfg.gamma = lqg::parse_gamma(opt.gamma_text);
    if (!opt.dgamma_text.empty()) opt.cfg.dgamma = lqg::parse_gamma(opt.dgamma_text);
    CLI::App* chosen = app.get_subcommands().front();
    const std::string sub = chosen->get_name();
    // Metric pipelines default to lattice-scale mollification; measure
    // pipelines keep the smoother default.
    if ((sub == "dim" || sub == "metric" || sub == "ball") &&
        chosen->count("--eps-mult") == 0)
      opt.cfg.eps_mult = 1.0;
    const lqg::RunResult res = lqg::run_pipeline(sub, opt.cfg);
    std::cout << res.summary.dump(2) << "\n";
    for (const std::string& a : res.artifacts) std::cout << "wrote " << a << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
