#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lqg/gmc.hpp"
#include "lqg/lfpp.hpp"

namespace lqg {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  std::uint8_t* pixel(int i, int j) {
    return rgb.data() + 3 * (static_cast<std::size_t>(i) * width + j);
  }
};

enum class Colormap { grayscale, rainbow };

/// Maps a value already normalized to [0,1] through the table.  The rainbow
/// table is piecewise linear with anchors blue, cyan, green, yellow, red at
/// 0, 1/4, 1/2, 3/4, 1.
void colormap_rgb(Colormap cmap, double t, std::uint8_t out[3]);

/// Min-max normalizes the square value grid and maps it through the table.
/// An all-equal grid renders the mid-table color.
Image render_field(std::span<const double> values, int n, Colormap cmap);
Image render_field(const GridField& field, Colormap cmap);
Image render_field(const MassGrid& mass, Colormap cmap);

/// Dyadic leaves filled by Euclidean-size rank color (small to large through
/// the table) with a black outline, on an image_size x image_size canvas.
Image render_dyadic(const std::vector<DyadicSquare>& leaves, int image_size,
                    Colormap cmap = Colormap::rainbow);

/// Distance field colored through the table, cells outside the ball mask
/// dimmed, geodesic tree edges drawn in black.
Image render_ball_tree(const MetricField& mf, std::span<const std::uint8_t> mask,
                       const GeodesicTree& tree, Colormap cmap = Colormap::rainbow);

/// PPM (P6) bytes: "P6\n<w> <h>\n255\n" then raw RGB.
std::vector<std::uint8_t> encode_ppm(const Image& img);
void write_ppm(const Image& img, const std::string& path);

}  // namespace lqg
