#include "lqg/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lqg {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field formats are little-endian; byte swapping not implemented");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("field file truncated");
  return v;
}

std::ofstream open_out(const std::string& path, bool binary = true) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path, bool binary = true) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

void check_magic(std::istream& is, const char expect[4], const std::string& path) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, expect, 4) != 0)
    throw std::runtime_error("bad magic in " + path);
}

}  // namespace

void write_lqgf(const GridField& field, const std::string& path) {
  auto os = open_out(path);
  os.write("LQGF", 4);
  put<std::uint16_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(field.n));
  put<double>(os, field.spacing);
  put<std::uint8_t>(os, field.kind == GridField::Kind::mollified ? 1 : 0);
  if (field.kind == GridField::Kind::mollified) put<double>(os, field.eps);
  os.write(reinterpret_cast<const char*>(field.values.data()),
           static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!os) throw std::runtime_error("short write to " + path);
}

GridField read_lqgf(const std::string& path) {
  auto is = open_in(path);
  check_magic(is, "LQGF", path);
  const auto version = get<std::uint16_t>(is);
  if (version != 1) throw std::runtime_error("unsupported LQGF version in " + path);
  const auto n = get<std::uint32_t>(is);
  GridField f(static_cast<int>(n));
  f.spacing = get<double>(is);
  const auto kind = get<std::uint8_t>(is);
  if (kind == 1) {
    f.kind = GridField::Kind::mollified;
    f.eps = get<double>(is);
  }
  is.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("field file truncated: " + path);
  return f;
}

void write_lqgm(const MassGrid& mass, const std::string& path) {
  auto os = open_out(path);
  os.write("LQGM", 4);
  put<std::uint16_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(mass.n));
  put<double>(os, mass.spacing);
  put<double>(os, mass.gamma);
  put<double>(os, mass.eps);
  os.write(reinterpret_cast<const char*>(mass.masses.data()),
           static_cast<std::streamsize>(mass.masses.size() * sizeof(double)));
  if (!os) throw std::runtime_error("short write to " + path);
}

MassGrid read_lqgm(const std::string& path) {
  auto is = open_in(path);
  check_magic(is, "LQGM", path);
  const auto version = get<std::uint16_t>(is);
  if (version != 1) throw std::runtime_error("unsupported LQGM version in " + path);
  MassGrid m;
  m.n = static_cast<int>(get<std::uint32_t>(is));
  m.spacing = get<double>(is);
  m.gamma = get<double>(is);
  m.eps = get<double>(is);
  m.masses.resize(static_cast<std::size_t>(m.n) * m.n);
  is.read(reinterpret_cast<char*>(m.masses.data()),
          static_cast<std::streamsize>(m.masses.size() * sizeof(double)));
  if (!is) throw std::runtime_error("mass file truncated: " + path);
  return m;
}

void write_distance_field(const MetricField& mf, const std::string& path) {
  GridField f(mf.n);
  f.spacing = mf.spacing;
  f.values = mf.dist;
  write_lqgf(f, path);
}

void write_dyadic_csv(const std::vector<DyadicSquare>& leaves, const std::string& path) {
  auto os = open_out(path, false);
  os << "level,i,j,mass\n";
  os.precision(17);
  for (const auto& l : leaves)
    os << l.level << "," << l.i << "," << l.j << "," << l.mass << "\n";
}

void write_walk_csv(const Walk2D& walk, const std::string& path) {
  auto os = open_out(path, false);
  os << "dl,dr\n";
  os.precision(17);
  for (const auto& s : walk.steps) os << s[0] << "," << s[1] << "\n";
}

void write_map_edges(const PlanarMapGraph& map, const std::string& path) {
  auto os = open_out(path, false);
  os << "LQGMAP " << map.num_vertices() << " " << map.num_edges() << "\n";
  const int ne = map.num_edges();
  const int root_edge = map.root() >= 0 ? PlanarMapGraph::edge_of(map.root()) : -1;
  auto emit = [&](int e) {
    int u = map.endpoint(e), v = map.endpoint2(e);
    if (2 * e + 1 == map.root()) std::swap(u, v);
    os << u << " " << v << " " << (map.on_tree(e) ? 1 : 0) << "\n";
  };
  if (root_edge >= 0) emit(root_edge);
  for (int e = 0; e < ne; ++e)
    if (e != root_edge) emit(e);
}

PlanarMapGraph read_map_edges(const std::string& path) {
  auto is = open_in(path, false);
  std::string magic;
  int nv = 0, ne = 0;
  is >> magic >> nv >> ne;
  if (!is || magic != "LQGMAP") throw std::runtime_error("bad map file: " + path);
  PlanarMapGraph m(nv);
  for (int e = 0; e < ne; ++e) {
    int u, v, t;
    is >> u >> v >> t;
    if (!is) throw std::runtime_error("map file truncated: " + path);
    m.add_edge(u, v, t != 0);
  }
  if (ne > 0) m.set_root(0);
  return m;
}

void write_tree_csv(const GeodesicTree& tree, int n, double spacing,
                    const std::string& path) {
  auto os = open_out(path, false);
  os << "x1,y1,x2,y2\n";
  os.precision(17);
  for (const auto& [child, parent] : tree.edges) {
    const double x1 = (child % n + 1) * spacing, y1 = (child / n + 1) * spacing;
    const double x2 = (parent % n + 1) * spacing, y2 = (parent / n + 1) * spacing;
    os << x1 << "," << y1 << "," << x2 << "," << y2 << "\n";
  }
}

void write_embedding_csv(const Embedding& emb, const PlanarMapGraph& map,
                         const std::string& path) {
  auto os = open_out(path, false);
  os << "vertex,x,y\n";
  os.precision(17);
  for (int v = 0; v < emb.num_vertices(); ++v)
    os << v << "," << emb.x[v] << "," << emb.y[v] << "\n";
  os << "edges\n";
  for (int e = 0; e < map.num_edges(); ++e)
    os << map.endpoint(e) << "," << map.endpoint2(e) << "\n";
}

void write_growth_csv(const std::vector<GrowthSamples>& samples,
                      const DimensionEstimate& est, const std::string& path) {
  auto os = open_out(path, false);
  os << "gamma,n,eps,seed,r,mass\n";
  os.precision(17);
  for (const auto& gs : samples)
    for (std::size_t k = 0; k < gs.radii.size(); ++k)
      os << gs.gamma << "," << gs.n << "," << gs.eps << "," << gs.seed << ","
         << gs.radii[k] << "," << gs.masses[k] << "\n";
  os << "d_hat," << est.d << "," << est.half_width << "\n";
}

}  // namespace lqg
