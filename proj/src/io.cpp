#include "semba/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace semba {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) throw FormatError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return require(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

BBox box_from_json(const Json& j, Frame frame) {
  if (!j.is_array() || j.size() != 4) throw FormatError("box must be [x0,y0,x1,y1]");
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError("box coordinates must be numbers");
  }
  BBox b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>(),
         frame};
  if (!b.valid()) throw FormatError("box corners are not ordered");
  return b;
}

Json box_to_json(const BBox& b) { return Json::array({b.x0, b.y0, b.x1, b.y1}); }

template <typename P>
Json pair_json(const P& p) {
  return Json::array({p.x, p.y});
}

std::pair<int, int> int_pair(const Json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
      !v[1].is_number_integer()) {
    throw FormatError(std::string("field '") + key + "' must be [int, int]");
  }
  return {v[0].get<int>(), v[1].get<int>()};
}

}  // namespace

SceneSpec scene_from_json(const Json& j) {
  SceneSpec s;
  s.scene_id = get_as<std::string>(j, "scene_id");
  s.height = get_as<int>(j, "height");
  s.width = get_as<int>(j, "width");
  s.target = get_as<std::string>(j, "target");
  const auto& objs = require(j, "objects");
  if (!objs.is_array()) throw FormatError("'objects' must be an array");
  for (const auto& o : objs) {
    s.objects.push_back({get_as<std::string>(o, "label"),
                         box_from_json(require(o, "box"), Frame::image())});
  }
  if (j.contains("image")) s.image = get_as<std::string>(j, "image");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return s;
}

Json scene_to_json(const SceneSpec& scene) {
  Json objs = Json::array();
  for (const auto& o : scene.objects) {
    objs.push_back({{"label", o.label}, {"box", box_to_json(o.box)}});
  }
  Json j{{"scene_id", scene.scene_id},
         {"height", scene.height},
         {"width", scene.width},
         {"target", scene.target},
         {"objects", std::move(objs)}};
  if (!scene.image.empty()) j["image"] = scene.image;
  return j;
}

SceneSpec load_scene(const std::filesystem::path& path) {
  SceneSpec s = scene_from_json(read_json_file(path));
  if (!s.image.empty() && std::filesystem::path(s.image).is_relative()) {
    s.image = (path.parent_path() / s.image).string();
  }
  return s;
}

void save_scene(const std::filesystem::path& path, const SceneSpec& scene) {
  write_json_file(path, scene_to_json(scene));
}

Json scanpath_to_json(const Scanpath& path) {
  Json fixations = Json::array();
  for (const auto& f : path.fixations) {
    fixations.push_back(
        {{"px", pair_json(f.px)}, {"cell", pair_json(f.cell)}, {"label", f.label}});
  }
  Json j;
  if (path.subject) j["subject"] = *path.subject;
  j["scene_id"] = path.scene_id;
  j["target"] = path.target;
  j["found"] = path.found;
  j["found_at"] = path.found_at ? Json(*path.found_at) : Json(nullptr);
  j["fixations"] = std::move(fixations);
  if (path.exhausted) j["exhausted"] = true;
  return j;
}

Scanpath scanpath_from_json(const Json& j) {
  Scanpath p;
  p.scene_id = get_as<std::string>(j, "scene_id");
  p.target = get_as<std::string>(j, "target");
  p.found = get_as<bool>(j, "found");
  if (const auto it = j.find("found_at"); it != j.end() && !it->is_null()) {
    p.found_at = get_as<int>(j, "found_at");
  }
  if (j.contains("subject")) {
    const auto& s = j["subject"];
    p.subject = s.is_string() ? s.get<std::string>() : s.dump();
  }
  if (j.contains("exhausted")) p.exhausted = get_as<bool>(j, "exhausted");
  const auto& fixations = require(j, "fixations");
  if (!fixations.is_array()) throw FormatError("'fixations' must be an array");
  for (const auto& f : fixations) {
    const auto [x, y] = int_pair(f, "px");
    Fixation fix{{x, y}, {}, "background"};
    if (f.contains("cell")) {
      const auto [cx, cy] = int_pair(f, "cell");
      fix.cell = {cx, cy};
    }
    if (f.contains("label")) fix.label = get_as<std::string>(f, "label");
    p.fixations.push_back(std::move(fix));
  }
  return p;
}

std::string scanpath_line(const Scanpath& path) { return scanpath_to_json(path).dump(); }

std::vector<Scanpath> read_scanpaths(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  std::vector<Scanpath> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(scanpath_from_json(Json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_scanpaths(const std::filesystem::path& path, const std::vector<Scanpath>& paths) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (const auto& p : paths) os << scanpath_line(p) << '\n';
}

Json layer_manifest(Pixel focal, const FoveaConfig& cfg, const std::vector<LayerFrame>& frames) {
  Json layers = Json::array();
  for (const auto& f : frames) {
    layers.push_back({{"n", f.index},
                      {"side", f.side},
                      {"top_left", pair_json(f.top_left)},
                      {"bottom_right", pair_json(f.bottom_right)},
                      {"scale", f.scale}});
  }
  return {{"focal", pair_json(focal)},
          {"levels", cfg.levels},
          {"base_side", cfg.base_side},
          {"padding", cfg.padding()},
          {"image_size", Json::array({cfg.image_width, cfg.image_height})},
          {"layers", std::move(layers)}};
}

void write_layers(const std::filesystem::path& dir, Pixel focal, const FoveaConfig& cfg,
                  const std::vector<Layer>& layers, const Json& extra) {
  std::filesystem::create_directories(dir);
  std::vector<LayerFrame> frames;
  for (const auto& l : layers) {
    write_png(dir / ("layer_" + std::to_string(l.frame.index) + ".png"), l.raster);
    frames.push_back(l.frame);
  }
  Json manifest = layer_manifest(focal, cfg, frames);
  for (const auto& [k, v] : extra.items()) manifest[k] = v;
  write_json_file(dir / "manifest.json", manifest);
}

Json detection_doc(const std::string& scene_id, int fixation_index, int layer,
                   const std::vector<Detection>& dets, const ClassSet& classes) {
  Json arr = Json::array();
  for (const auto& d : dets) {
    Json scores = Json::object();
    for (int k = 0; k < classes.size(); ++k) {
      if (d.scores[static_cast<std::size_t>(k)] > 0.0) {
        scores[classes.label(k)] = d.scores[static_cast<std::size_t>(k)];
      }
    }
    arr.push_back({{"box", box_to_json(d.box)}, {"scores", std::move(scores)}});
  }
  return {{"scene_id", scene_id},
          {"fixation_index", fixation_index},
          {"layer", layer},
          {"detections", std::move(arr)}};
}

std::vector<std::vector<Detection>> parse_detection_reply(const Json& j,
                                                          const ClassSet& classes,
                                                          const WireExpectations& expect) {
  std::vector<std::vector<Detection>> out(static_cast<std::size_t>(expect.levels));
  std::set<int> seen;
  auto parse_doc = [&](const Json& doc) {
    if (get_as<std::string>(doc, "scene_id") != expect.scene_id) {
      throw FormatError("detection reply is for another scene");
    }
    if (get_as<int>(doc, "fixation_index") != expect.fixation_index) {
      throw FormatError("detection reply is for another fixation");
    }
    const int layer = get_as<int>(doc, "layer");
    if (layer < 1 || layer > expect.levels) throw FormatError("layer index out of range");
    if (!seen.insert(layer).second) throw FormatError("duplicate layer in detection reply");
    const auto& dets = require(doc, "detections");
    if (!dets.is_array()) throw FormatError("'detections' must be an array");
    auto& slot = out[static_cast<std::size_t>(layer - 1)];
    for (const auto& d : dets) {
      Detection det;
      det.source_layer = layer;
      det.box = box_from_json(require(d, "box"), Frame::layer(layer));
      if (det.box.x0 < 0 || det.box.y0 < 0 || det.box.x1 > expect.base_side ||
          det.box.y1 > expect.base_side) {
        throw FormatError("detection box outside the layer frame");
      }
      const auto& scores = require(d, "scores");
      if (!scores.is_object()) throw FormatError("'scores' must be an object");
      det.scores.assign(static_cast<std::size_t>(classes.size()), 0.0);
      bool positive = false;
      for (const auto& [label, value] : scores.items()) {
        const auto k = classes.find(label);
        if (!k) throw FormatError("unknown class label '" + label + "'");
        if (!value.is_number() || value.get<double>() < 0.0) {
          throw FormatError("score for '" + label + "' must be a non-negative number");
        }
        det.scores[static_cast<std::size_t>(*k)] = value.get<double>();
        positive = positive || value.get<double>() > 0.0;
      }
      if (!positive) throw FormatError("detection has no positive score");
      slot.push_back(std::move(det));
    }
  };
  if (j.is_array()) {
    for (const auto& doc : j) parse_doc(doc);
  } else {
    parse_doc(j);
  }
  return out;
}

Json belief_snapshot(const BeliefGrid& grid) {
  Json ior = Json::array();
  for (auto v : grid.ior_mask()) ior.push_back(v != 0);
  return {{"Y", grid.rows()},
          {"X", grid.cols()},
          {"K", grid.classes()},
          {"beta", grid.all_beta()},
          {"ior", std::move(ior)}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace semba
