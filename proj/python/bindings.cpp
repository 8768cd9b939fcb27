#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

#include "lqg/dim.hpp"
#include "lqg/embed.hpp"
#include "lqg/gff.hpp"
#include "lqg/gmc.hpp"
#include "lqg/io.hpp"
#include "lqg/lfpp.hpp"
#include "lqg/maps.hpp"
#include "lqg/render.hpp"
#include "lqg/rng.hpp"

namespace py = pybind11;
using namespace lqg;

namespace {

py::array_t<double> square_array(const std::vector<double>& v, int n) {
  py::array_t<double> out({n, n});
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
  return out;
}

std::vector<double> vector_from(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  return {a.data(), a.data() + a.size()};
}

Walk2D walk_from(py::array_t<double, py::array::c_style | py::array::forcecast> steps) {
  if (steps.ndim() != 2 || steps.shape(1) != 2)
    throw std::invalid_argument("walk steps must be an (n, 2) array");
  Walk2D w;
  w.steps.resize(steps.shape(0));
  for (py::ssize_t t = 0; t < steps.shape(0); ++t)
    w.steps[t] = {steps.at(t, 0), steps.at(t, 1)};
  return w;
}

py::array_t<double> walk_to(const Walk2D& w) {
  py::array_t<double> out({static_cast<py::ssize_t>(w.steps.size()), py::ssize_t(2)});
  auto r = out.mutable_unchecked<2>();
  for (std::size_t t = 0; t < w.steps.size(); ++t) {
    r(t, 0) = w.steps[t][0];
    r(t, 1) = w.steps[t][1];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(pylqg, m) {
  m.doc() = "Random-surface simulation toolkit: field sampling, area measure, "
            "first-passage metric, decorated maps and harmonic embedding";

  py::class_<GridField>(m, "GridField")
      .def_readonly("n", &GridField::n)
      .def_readonly("spacing", &GridField::spacing)
      .def_readonly("eps", &GridField::eps)
      .def_property_readonly(
          "kind",
          [](const GridField& f) {
            return f.kind == GridField::Kind::raw ? "raw" : "mollified";
          })
      .def_property_readonly(
          "values", [](const GridField& f) { return square_array(f.values, f.n); })
      .def("interpolate",
           [](const GridField& f, double x, double y) { return f.interpolate({x, y}); })
      .def_static(
          "from_values",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> v,
             bool mollified, double eps) {
            if (v.ndim() != 2 || v.shape(0) != v.shape(1))
              throw std::invalid_argument("values must be a square matrix");
            GridField f(static_cast<int>(v.shape(0)),
                        mollified ? GridField::Kind::mollified : GridField::Kind::raw,
                        eps);
            f.values = vector_from(v);
            return f;
          },
          py::arg("values"), py::arg("mollified") = false, py::arg("eps") = 0.0);

  py::class_<MassGrid>(m, "MassGrid")
      .def_readonly("n", &MassGrid::n)
      .def_readonly("spacing", &MassGrid::spacing)
      .def_readonly("gamma", &MassGrid::gamma)
      .def_readonly("eps", &MassGrid::eps)
      .def("total", &MassGrid::total)
      .def_property_readonly(
          "masses", [](const MassGrid& g) { return square_array(g.masses, g.n); });

  py::class_<WeightGrid>(m, "WeightGrid")
      .def_readonly("n", &WeightGrid::n)
      .def_readonly("gamma", &WeightGrid::gamma)
      .def_readonly("dgamma", &WeightGrid::dgamma)
      .def_property_readonly(
          "weights", [](const WeightGrid& g) { return square_array(g.w, g.n); });

  py::class_<MetricField>(m, "MetricField")
      .def_readonly("n", &MetricField::n)
      .def_readonly("spacing", &MetricField::spacing)
      .def_property_readonly("source",
                             [](const MetricField& f) {
                               return py::make_tuple(f.source.i, f.source.j);
                             })
      .def("max_dist", &MetricField::max_dist)
      .def_property_readonly(
          "dist", [](const MetricField& f) { return square_array(f.dist, f.n); })
      .def_property_readonly("pred", [](const MetricField& f) {
        py::array_t<std::int32_t> out({f.n, f.n});
        std::memcpy(out.mutable_data(), f.pred.data(),
                    f.pred.size() * sizeof(std::int32_t));
        return out;
      });

  py::class_<DyadicSquare>(m, "DyadicSquare")
      .def_readonly("level", &DyadicSquare::level)
      .def_readonly("i", &DyadicSquare::i)
      .def_readonly("j", &DyadicSquare::j)
      .def_readonly("mass", &DyadicSquare::mass)
      .def("__repr__", [](const DyadicSquare& s) {
        return "DyadicSquare(level=" + std::to_string(s.level) + ", i=" +
               std::to_string(s.i) + ", j=" + std::to_string(s.j) + ")";
      });

  py::class_<PlanarMapGraph>(m, "PlanarMapGraph")
      .def_property_readonly("num_vertices", &PlanarMapGraph::num_vertices)
      .def_property_readonly("num_edges", &PlanarMapGraph::num_edges)
      .def_property_readonly("num_simple_edges", &PlanarMapGraph::num_simple_edges)
      .def("connected", &PlanarMapGraph::connected)
      .def("degree", &PlanarMapGraph::degree)
      .def("neighbors", &PlanarMapGraph::neighbors)
      .def("on_tree", &PlanarMapGraph::on_tree)
      .def("edges", [](const PlanarMapGraph& g) {
        std::vector<std::tuple<int, int, bool>> out;
        out.reserve(g.num_edges());
        for (int e = 0; e < g.num_edges(); ++e)
          out.emplace_back(g.endpoint(e), g.endpoint2(e), g.on_tree(e));
        return out;
      });

  py::class_<Embedding>(m, "Embedding")
      .def_property_readonly("positions",
                             [](const Embedding& e) {
                               py::array_t<double> out(
                                   {static_cast<py::ssize_t>(e.x.size()), py::ssize_t(2)});
                               auto r = out.mutable_unchecked<2>();
                               for (std::size_t v = 0; v < e.x.size(); ++v) {
                                 r(v, 0) = e.x[v];
                                 r(v, 1) = e.y[v];
                               }
                               return out;
                             })
      .def_readonly("boundary", &Embedding::boundary);

  py::class_<GrowthSamples>(m, "GrowthSamples")
      .def_readonly("radii", &GrowthSamples::radii)
      .def_readonly("masses", &GrowthSamples::masses);

  py::class_<DimensionEstimate>(m, "DimensionEstimate")
      .def_readonly("d", &DimensionEstimate::d)
      .def_readonly("half_width", &DimensionEstimate::half_width);

  // Field sampling and calculus.
  m.def("sample_gff", &sample_gff, py::arg("n"), py::arg("seed"));
  m.def("sample_gff_cholesky", &sample_gff_cholesky, py::arg("n"), py::arg("seed"));
  m.def("mollify", &mollify, py::arg("field"), py::arg("eps"));
  m.def("dirichlet_inner", &dirichlet_inner, py::arg("f"), py::arg("g"));
  m.def(
      "circle_average",
      [](const GridField& f, double x, double y, double r) {
        return circle_average(f, {x, y}, r);
      },
      py::arg("field"), py::arg("x"), py::arg("y"), py::arg("r"));

  // Area measure.
  m.def("gmc_masses", &gmc_masses, py::arg("field"), py::arg("gamma"));
  m.def("dyadic_decompose", &dyadic_decompose, py::arg("mass"), py::arg("threshold"));
  m.def(
      "sample_mu_point",
      [](const MassGrid& g, std::uint64_t seed) {
        const Point p = sample_mu_point(g, seed);
        return py::make_tuple(p.x, p.y);
      },
      py::arg("mass"), py::arg("seed"));
  m.def(
      "thickness",
      [](const GridField& f, double x, double y, const std::vector<double>& scales) {
        return thickness(f, {x, y}, scales);
      },
      py::arg("field"), py::arg("x"), py::arg("y"), py::arg("scales"));
  m.def("coord_change_q", &coord_change_q, py::arg("gamma"));
  m.def(
      "coord_change_check",
      [](double gamma, double a, int replicas, std::uint64_t seed, int n,
         double eps_mult, std::optional<double> q_override) {
        const CoordChangeResult r =
            coord_change_check(gamma, a, replicas, seed, n, eps_mult, q_override);
        return py::make_tuple(r.mean_ratio, r.q);
      },
      py::arg("gamma"), py::arg("a"), py::arg("replicas"), py::arg("seed"),
      py::arg("n"), py::arg("eps_mult") = 8.0, py::arg("q_override") = std::nullopt);

  // First-passage metric.
  m.def("lfpp_weights", &lfpp_weights, py::arg("field"), py::arg("gamma"),
        py::arg("dgamma"));
  m.def(
      "distance_field",
      [](const WeightGrid& w, int i, int j) { return distance_field(w, {i, j}); },
      py::arg("weights"), py::arg("i"), py::arg("j"));
  m.def(
      "metric_ball",
      [](const MetricField& mf, double r) {
        const auto mask = metric_ball(mf, r);
        py::array_t<bool> out({mf.n, mf.n});
        auto w = out.mutable_unchecked<2>();
        for (int i = 0; i < mf.n; ++i)
          for (int j = 0; j < mf.n; ++j)
            w(i, j) = mask[static_cast<std::size_t>(i) * mf.n + j] != 0;
        return out;
      },
      py::arg("mf"), py::arg("r"));
  m.def(
      "geodesic",
      [](const MetricField& mf, int i, int j) {
        std::vector<std::pair<int, int>> out;
        for (const Vertex& v : geodesic(mf, {i, j})) out.emplace_back(v.i, v.j);
        return out;
      },
      py::arg("mf"), py::arg("i"), py::arg("j"));
  m.def(
      "geodesic_tree",
      [](const MetricField& mf, const std::vector<std::pair<int, int>>& targets,
         const std::vector<double>& shells) {
        std::vector<Vertex> t;
        for (auto [i, j] : targets) t.push_back({i, j});
        const GeodesicTree tree = geodesic_tree(mf, t, shells);
        return py::make_tuple(tree.edges, tree.shell_crossings);
      },
      py::arg("mf"), py::arg("targets"), py::arg("shells"));

  // Dimension estimation.
  m.def(
      "ball_growth",
      [](const MassGrid& mass, const MetricField& mf, const std::vector<double>& radii) {
        return ball_growth(mass, mf, radii);
      },
      py::arg("mass"), py::arg("mf"), py::arg("radii"));
  m.def("estimate_dimension", &estimate_dimension, py::arg("growth"));
  m.def("growth_radii", &growth_radii, py::arg("mf"), py::arg("count"),
        py::arg("lo_pct") = 0.10, py::arg("hi_pct") = 0.50);
  m.def(
      "dgamma_reference",
      [](double gamma) -> py::object {
        const DgammaReference ref = dgamma_reference(gamma);
        switch (ref.kind) {
          case DgammaReference::Kind::exact:
            return py::float_(ref.value);
          case DgammaReference::Kind::bounds:
            return py::make_tuple(ref.lower, ref.upper);
          default:
            return py::none();
        }
      },
      py::arg("gamma"),
      "4.0 at gamma=sqrt(8/3), the rigorous (lower, upper) window at "
      "gamma=sqrt(2), None when unknown");

  // Decorated maps.
  m.def("walk_step_correlation", &walk_step_correlation, py::arg("gamma"));
  m.def(
      "sample_correlated_walk",
      [](int n, double gamma, std::uint64_t seed) {
        return walk_to(sample_correlated_walk(n, gamma, seed));
      },
      py::arg("n"), py::arg("gamma"), py::arg("seed"));
  m.def(
      "sample_quadrant_excursion",
      [](int n, std::uint64_t seed) { return walk_to(sample_quadrant_excursion(n, seed)); },
      py::arg("n"), py::arg("seed"));
  m.def("sample_tree_decorated_map", &sample_tree_decorated_map, py::arg("nedges"),
        py::arg("seed"));
  m.def(
      "mullin_decode",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> steps) {
        return mullin_decode(walk_from(steps));
      },
      py::arg("walk"));
  m.def("mullin_encode",
        [](const PlanarMapGraph& g) { return walk_to(mullin_encode(g)); },
        py::arg("map"));
  m.def(
      "mated_crt_map",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> steps, int n) {
        return mated_crt_map(walk_from(steps), n);
      },
      py::arg("walk"), py::arg("nvertices"));
  m.def(
      "mated_crt_boundary",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> steps, int n) {
        return mated_crt_boundary(walk_from(steps), n);
      },
      py::arg("walk"), py::arg("nvertices"));

  // Harmonic embedding.
  m.def(
      "tutte_embed",
      [](const PlanarMapGraph& g, const std::vector<int>& boundary, double tol) {
        return tutte_embed(g, boundary, tol);
      },
      py::arg("map"), py::arg("boundary"), py::arg("tol") = 1e-9);
  m.def("harmonic_residual", &harmonic_residual, py::arg("map"), py::arg("embedding"));
  m.def("vertex_density", &vertex_density, py::arg("embedding"), py::arg("resolution"));
  m.def(
      "add_edge",
      [](PlanarMapGraph& g, int u, int v) { g.add_edge(u, v); },
      py::arg("map"), py::arg("u"), py::arg("v"),
      "append one (auxiliary) edge, e.g. to close a boundary cycle");

  // Rendering and file formats.
  m.def(
      "render_field_ppm",
      [](const GridField& f, const std::string& cmap) {
        const Image img = render_field(
            f, cmap == "grayscale" ? Colormap::grayscale : Colormap::rainbow);
        const auto bytes = encode_ppm(img);
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      },
      py::arg("field"), py::arg("colormap") = "rainbow");
  m.def("write_lqgf", &write_lqgf, py::arg("field"), py::arg("path"));
  m.def("read_lqgf", &read_lqgf, py::arg("path"));
  m.def("write_lqgm", &write_lqgm, py::arg("mass"), py::arg("path"));
  m.def("read_lqgm", &read_lqgm, py::arg("path"));

  m.def("derive_seed", &derive_seed, py::arg("root"), py::arg("k"),
        "replica seed-splitting rule used by the pipelines");
}
