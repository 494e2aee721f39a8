#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semba/io.hpp"
#include "semba/metrics.hpp"
#include "semba/runner.hpp"

namespace py = pybind11;
using namespace semba;

namespace {

using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Raster raster_from_array(const ByteArray& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw std::invalid_argument("expected an HxW or HxWxC array");
  const int h = static_cast<int>(a.shape(0));
  const int w = static_cast<int>(a.shape(1));
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  std::vector<std::uint8_t> samples(a.data(), a.data() + a.size());
  return Raster(h, w, c, std::move(samples));
}

ByteArray raster_to_array(const Raster& r) {
  std::vector<py::ssize_t> shape{r.height(), r.width()};
  if (r.channels() > 1) shape.push_back(r.channels());
  ByteArray out(shape);
  std::copy(r.samples().begin(), r.samples().end(), out.mutable_data());
  return out;
}

py::dict frame_dict(const LayerFrame& f) {
  py::dict d;
  d["n"] = f.index;
  d["side"] = f.side;
  d["top_left"] = py::make_tuple(f.top_left.x, f.top_left.y);
  d["bottom_right"] = py::make_tuple(f.bottom_right.x, f.bottom_right.y);
  d["scale"] = f.scale;
  return d;
}

FixSequence seq(const std::vector<std::string>& tokens) { return FixSequence{tokens}; }

std::vector<Scanpath> parse_paths(const std::vector<std::string>& docs) {
  std::vector<Scanpath> out;
  for (const auto& d : docs) out.push_back(scanpath_from_json(Json::parse(d)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-scale fovea, Dirichlet belief fusion and scanpath metrics";

  py::register_exception<OutOfBoundsError>(m, "OutOfBoundsError", PyExc_IndexError);
  py::register_exception<SearchExhausted>(m, "SearchExhausted");
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  // fovea
  py::class_<FoveaConfig>(m, "FoveaConfig")
      .def(py::init([](int levels, int base_side, int image_height, int image_width) {
             FoveaConfig c{levels, base_side, image_height, image_width};
             c.validate();
             return c;
           }),
           py::arg("levels"), py::arg("base_side"), py::arg("image_height"),
           py::arg("image_width"))
      .def_readonly("levels", &FoveaConfig::levels)
      .def_readonly("base_side", &FoveaConfig::base_side)
      .def_readonly("image_height", &FoveaConfig::image_height)
      .def_readonly("image_width", &FoveaConfig::image_width)
      .def_property_readonly("padding", &FoveaConfig::padding);

  m.def("layer_side", [](int n, std::int64_t l1) {
    if (n < 1 || l1 < 1) throw std::invalid_argument("n and l1 must be positive");
    return layer_side(n, l1);
  }, py::arg("n"), py::arg("base_side"));

  m.def("pixel_cost", [](const FoveaConfig& cfg) {
    const auto c = pixel_cost(cfg);
    return py::make_tuple(c.pixels, c.percent);
  }, py::arg("cfg"), "(pixels, percent of the full image)");

  m.def("layer_frames", [](std::pair<int, int> focal, const FoveaConfig& cfg) {
    py::list out;
    for (const auto& f : layer_frames({focal.first, focal.second}, cfg)) out.append(frame_dict(f));
    return out;
  }, py::arg("focal"), py::arg("cfg"));

  m.def("build_pyramid", [](const ByteArray& image, std::pair<int, int> focal,
                            const FoveaConfig& cfg) {
    const auto layers = build_pyramid(raster_from_array(image), {focal.first, focal.second}, cfg);
    py::list out;
    for (const auto& l : layers) out.append(py::make_tuple(frame_dict(l.frame), raster_to_array(l.raster)));
    return out;
  }, py::arg("image"), py::arg("focal"), py::arg("cfg"),
        "List of (frame dict, l1 x l1 uint8 array), innermost first.");

  m.def("remap_bbox", [](std::tuple<double, double, double, double> box, std::pair<int, int> focal,
                         int n, int base_side, int image_height, int image_width) {
    const auto [x0, y0, x1, y1] = box;
    const auto r = remap_bbox({x0, y0, x1, y1, Frame::layer(n)}, {focal.first, focal.second}, n,
                              base_side, image_height, image_width);
    return py::make_tuple(py::make_tuple(r.box.x0, r.box.y0, r.box.x1, r.box.y1), r.clipped);
  }, py::arg("box"), py::arg("focal"), py::arg("n"), py::arg("base_side"),
        py::arg("image_height"), py::arg("image_width"));

  // semantics
  m.def("kaplan_update", [](const std::vector<double>& beta, const std::vector<double>& scores) {
    return kaplan_update(beta, scores);
  }, py::arg("beta"), py::arg("scores"));

  py::class_<GridGeometry>(m, "GridGeometry")
      .def(py::init([](int rows, int cols, int image_height, int image_width) {
             GridGeometry g{rows, cols, image_height, image_width};
             g.validate();
             return g;
           }),
           py::arg("rows") = 20, py::arg("cols") = 32, py::arg("image_height") = 1050,
           py::arg("image_width") = 1680)
      .def_readonly("rows", &GridGeometry::rows)
      .def_readonly("cols", &GridGeometry::cols)
      .def("cell_center", [](const GridGeometry& g, std::pair<int, int> c) {
        const auto p = cell_center({c.first, c.second}, g);
        return py::make_tuple(p.x, p.y);
      });

  py::class_<BeliefGrid>(m, "BeliefGrid")
      .def(py::init<int, int, int>(), py::arg("rows"), py::arg("cols"), py::arg("classes"))
      .def_property_readonly("rows", &BeliefGrid::rows)
      .def_property_readonly("cols", &BeliefGrid::cols)
      .def_property_readonly("classes", &BeliefGrid::classes)
      .def("beta", [](const BeliefGrid& g, std::pair<int, int> c) {
        const auto b = g.beta({c.first, c.second});
        return std::vector<double>(b.begin(), b.end());
      })
      .def("inhibited", [](const BeliefGrid& g, std::pair<int, int> c) {
        return g.inhibited({c.first, c.second});
      })
      .def("expectation", [](const BeliefGrid& g, std::pair<int, int> c, int k) {
        return expectation(g, {c.first, c.second}, k);
      })
      .def("deposit", [](BeliefGrid& g, std::tuple<double, double, double, double> box,
                         const std::vector<double>& scores, const GridGeometry& geom,
                         double min_fraction) {
        const auto [x0, y0, x1, y1] = box;
        return deposit_detection(g, {x0, y0, x1, y1, Frame::image()}, scores, geom, min_fraction);
      }, py::arg("box"), py::arg("scores"), py::arg("geom"), py::arg("min_fraction") = 0.0)
      .def("select_gaze", [](const BeliefGrid& g, int k) {
        const auto c = select_gaze(g, k);
        return py::make_tuple(c.x, c.y);
      })
      .def("apply_ior", [](BeliefGrid& g, std::pair<int, int> c) {
        apply_ior(g, {c.first, c.second});
      })
      .def("snapshot", [](const BeliefGrid& g) { return belief_snapshot(g).dump(); },
           "JSON snapshot {Y, X, K, beta, ior}");

  m.def("coco_classes", [] { return ClassSet::coco().labels(); });

  // simulation
  m.def("generate_scene", [](std::uint64_t seed, int index) {
    return scene_to_json(generate_scene(seed, index, ClassSet::coco())).dump();
  }, py::arg("seed"), py::arg("index"), "Synthetic scene as a JSON string.");

  m.def("run_episode", [](const std::string& scene_json, int levels, int base_side, int rows,
                          int cols, int max_fixations, double threshold, std::uint64_t seed) {
    const SceneSpec scene = scene_from_json(Json::parse(scene_json));
    EpisodeConfig cfg;
    cfg.fovea.levels = levels;
    cfg.fovea.base_side = base_side;
    cfg.grid.rows = rows;
    cfg.grid.cols = cols;
    cfg.max_fixations = max_fixations;
    cfg.threshold = threshold;
    DetectorModel model;
    model.rng_seed = seed;
    SimulatedDetector det(model, ClassSet::coco());
    py::gil_scoped_release release;
    return scanpath_line(run_episode(scene, cfg, ClassSet::coco(), det).scanpath);
  }, py::arg("scene_json"), py::arg("levels") = 4, py::arg("base_side") = 160,
        py::arg("rows") = 20, py::arg("cols") = 32, py::arg("max_fixations") = 6,
        py::arg("threshold") = 0.01, py::arg("seed") = 0,
        "Runs one simulated episode; returns the scanpath as a JSON string.");

  // metrics
  m.def("edit_distance", [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return edit_distance(seq(a), seq(b));
  });
  m.def("sequence_score", [](const std::vector<std::string>& a, const std::vector<std::string>& b,
                             const std::string& normalization) {
    AlignmentScoring s;
    if (normalization == "sum") s.normalization = AlignmentScoring::Normalization::kSumLength;
    else if (normalization != "max") throw std::invalid_argument("normalization must be max or sum");
    return sequence_score(seq(a), seq(b), s);
  }, py::arg("a"), py::arg("b"), py::arg("normalization") = "max");
  m.def("cumulative_performance", [](const std::vector<std::string>& scanpaths, int max_budget) {
    return cumulative_performance(parse_paths(scanpaths), max_budget);
  }, py::arg("scanpaths"), py::arg("max_budget") = kDefaultTruncation);
  m.def("compare_scanpaths", [](const std::string& a, const std::string& b, const GridGeometry& g) {
    const auto r = compare_scanpaths(scanpath_from_json(Json::parse(a)),
                                     scanpath_from_json(Json::parse(b)), g);
    py::dict d;
    d["SS"] = r.ss;
    d["FED"] = r.fed;
    d["SemSS"] = r.semss;
    d["SemFED"] = r.semfed;
    return d;
  });
}
