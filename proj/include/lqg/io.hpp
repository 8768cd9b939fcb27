#pragma once

#include <string>
#include <vector>

#include "lqg/dim.hpp"
#include "lqg/embed.hpp"
#include "lqg/gmc.hpp"
#include "lqg/grid_field.hpp"
#include "lqg/lfpp.hpp"
#include "lqg/maps.hpp"

namespace lqg {

/// LQGF field file: magic "LQGF", u16 version = 1, u32 n, f64 spacing,
/// u8 kind (0 raw, 1 mollified), f64 eps when mollified, then n*n
/// little-endian f64 values row-major.
void write_lqgf(const GridField& field, const std::string& path);
GridField read_lqgf(const std::string& path);

/// LQGM mass file: magic "LQGM", u16 version = 1, u32 n, f64 spacing,
/// f64 gamma, f64 eps, then n*n little-endian f64 masses row-major.
void write_lqgm(const MassGrid& mass, const std::string& path);
MassGrid read_lqgm(const std::string& path);

/// Distance fields reuse the LQGF container with kind raw.
void write_distance_field(const MetricField& mf, const std::string& path);

/// CSV "level,i,j,mass".
void write_dyadic_csv(const std::vector<DyadicSquare>& leaves, const std::string& path);

/// CSV "dl,dr" per step.
void write_walk_csv(const Walk2D& walk, const std::string& path);

/// Edge-list text: header "LQGMAP <vertices> <edges>", then one "u v tree"
/// line per edge with the root edge first (oriented from its root side).
void write_map_edges(const PlanarMapGraph& map, const std::string& path);
PlanarMapGraph read_map_edges(const std::string& path);

/// CSV "x1,y1,x2,y2" per tree edge, in grid coordinates scaled by spacing.
void write_tree_csv(const GeodesicTree& tree, int n, double spacing,
                    const std::string& path);

/// CSV "vertex,x,y" then an "edges" section "u,v".
void write_embedding_csv(const Embedding& emb, const PlanarMapGraph& map,
                         const std::string& path);

/// CSV "gamma,n,eps,seed,r,mass" rows followed by one summary row
/// "d_hat,<d>,<half_width>".
void write_growth_csv(const std::vector<GrowthSamples>& samples,
                      const DimensionEstimate& est, const std::string& path);

}  // namespace lqg
