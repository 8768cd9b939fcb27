#include "lqg/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace lqg {

namespace {

void minmax(std::span<const double> v, double& lo, double& hi) {
  lo = v[0];
  hi = v[0];
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("render: non-finite value");
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
}

void draw_line(Image& img, int i0, int j0, int i1, int j1) {
  // Bresenham, black.
  const int di = std::abs(i1 - i0), dj = std::abs(j1 - j0);
  const int si = i0 < i1 ? 1 : -1, sj = j0 < j1 ? 1 : -1;
  int err = dj - di;
  for (;;) {
    if (i0 >= 0 && i0 < img.height && j0 >= 0 && j0 < img.width) {
      std::uint8_t* p = img.pixel(i0, j0);
      p[0] = p[1] = p[2] = 0;
    }
    if (i0 == i1 && j0 == j1) break;
    const int e2 = 2 * err;
    if (e2 > -di) {
      err -= di;
      j0 += sj;
    }
    if (e2 < dj) {
      err += dj;
      i0 += si;
    }
  }
}

}  // namespace

void colormap_rgb(Colormap cmap, double t, std::uint8_t out[3]) {
  t = std::clamp(t, 0.0, 1.0);
  if (cmap == Colormap::grayscale) {
    const auto g = static_cast<std::uint8_t>(std::lround(255.0 * t));
    out[0] = out[1] = out[2] = g;
    return;
  }
  static constexpr double anchors[5][3] = {
      {0, 0, 255}, {0, 255, 255}, {0, 255, 0}, {255, 255, 0}, {255, 0, 0}};
  const double s = t * 4.0;
  const int k = std::min(static_cast<int>(s), 3);
  const double f = s - k;
  for (int c = 0; c < 3; ++c)
    out[c] = static_cast<std::uint8_t>(
        std::lround(anchors[k][c] + f * (anchors[k + 1][c] - anchors[k][c])));
}

Image render_field(std::span<const double> values, int n, Colormap cmap) {
  if (n < 1 || values.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("render_field: value count != n^2");
  double lo, hi;
  minmax(values, lo, hi);
  Image img;
  img.width = n;
  img.height = n;
  img.rgb.resize(3 * values.size());
  const bool flat = hi == lo;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double t = flat ? 0.5 : (values[k] - lo) / (hi - lo);
    colormap_rgb(cmap, t, &img.rgb[3 * k]);
  }
  return img;
}

Image render_field(const GridField& field, Colormap cmap) {
  return render_field(field.values, field.n, cmap);
}

Image render_field(const MassGrid& mass, Colormap cmap) {
  return render_field(mass.masses, mass.n, cmap);
}

Image render_dyadic(const std::vector<DyadicSquare>& leaves, int image_size,
                    Colormap cmap) {
  if (leaves.empty()) throw std::invalid_argument("render_dyadic: no leaves");
  if (image_size < 1) throw std::invalid_argument("render_dyadic: image_size >= 1");
  int max_level = 0;
  for (const auto& l : leaves) max_level = std::max(max_level, l.level);
  Image img;
  img.width = image_size;
  img.height = image_size;
  img.rgb.assign(3 * static_cast<std::size_t>(image_size) * image_size, 0);
  for (const auto& l : leaves) {
    // Rank color by Euclidean size: deepest (smallest) level at the bottom
    // of the table, the root at the top.
    const double t = max_level == 0 ? 1.0 : 1.0 - static_cast<double>(l.level) / max_level;
    std::uint8_t rgb[3];
    colormap_rgb(cmap, t, rgb);
    const double side = static_cast<double>(image_size) / (1 << l.level);
    const int r0 = static_cast<int>(std::floor(l.i * side));
    const int c0 = static_cast<int>(std::floor(l.j * side));
    const int r1 = std::min(image_size, static_cast<int>(std::floor((l.i + 1) * side)));
    const int c1 = std::min(image_size, static_cast<int>(std::floor((l.j + 1) * side)));
    for (int i = r0; i < r1; ++i)
      for (int j = c0; j < c1; ++j) {
        std::uint8_t* p = img.pixel(i, j);
        const bool outline = i == r0 || i == r1 - 1 || j == c0 || j == c1 - 1;
        if (outline) {
          p[0] = p[1] = p[2] = 0;
        } else {
          p[0] = rgb[0];
          p[1] = rgb[1];
          p[2] = rgb[2];
        }
      }
  }
  return img;
}

Image render_ball_tree(const MetricField& mf, std::span<const std::uint8_t> mask,
                       const GeodesicTree& tree, Colormap cmap) {
  if (!mask.empty() && mask.size() != mf.dist.size())
    throw std::invalid_argument("render_ball_tree: mask size mismatch");
  Image img = render_field(mf.dist, mf.n, cmap);
  if (!mask.empty())
    for (std::size_t k = 0; k < mask.size(); ++k)
      if (!mask[k]) {
        std::uint8_t* p = &img.rgb[3 * k];
        p[0] = static_cast<std::uint8_t>(p[0] * 2 / 5);
        p[1] = static_cast<std::uint8_t>(p[1] * 2 / 5);
        p[2] = static_cast<std::uint8_t>(p[2] * 2 / 5);
      }
  for (const auto& [child, parent] : tree.edges)
    draw_line(img, child / mf.n, child % mf.n, parent / mf.n, parent % mf.n);
  return img;
}

std::vector<std::uint8_t> encode_ppm(const Image& img) {
  if (img.width < 1 || img.height < 1 ||
      img.rgb.size() != 3 * static_cast<std::size_t>(img.width) * img.height)
    throw std::invalid_argument("encode_ppm: malformed image");
  const std::string header = "P6\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.rgb.begin(), img.rgb.end());
  return out;
}

void write_ppm(const Image& img, const std::string& path) {
  const std::vector<std::uint8_t> bytes = encode_ppm(img);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_ppm: cannot open " + path);
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write_ppm: short write to " + path);
}

}  // namespace lqg
