#pragma once

// On-disk formats: scene specs, scanpath JSON lines, layer manifests, the
// detection wire format and belief-grid snapshots.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "semba/fovea.hpp"
#include "semba/search.hpp"
#include "semba/semantics.hpp"
#include "semba/simdet.hpp"

namespace semba {

using Json = nlohmann::ordered_json;

/// Malformed input document. The message names the offending field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {scene_id, height, width, target, objects:[{label, box:[x0,y0,x1,y1]}]}
// plus an optional "image" path.
SceneSpec scene_from_json(const Json& j);
Json scene_to_json(const SceneSpec& scene);
/// Reads and validates a scene file; a relative "image" path is resolved
/// against the file's directory.
SceneSpec load_scene(const std::filesystem::path& path);
void save_scene(const std::filesystem::path& path, const SceneSpec& scene);

// {scene_id, target, found, found_at, fixations:[{px:[x,y], cell:[cx,cy], label}]}
// with an optional "subject" for human reference data.
Json scanpath_to_json(const Scanpath& path);
Scanpath scanpath_from_json(const Json& j);
/// One compact JSON document per line.
std::string scanpath_line(const Scanpath& path);
std::vector<Scanpath> read_scanpaths(const std::filesystem::path& path);
void write_scanpaths(const std::filesystem::path& path, const std::vector<Scanpath>& paths);

// {focal:[x,y], levels, base_side, layers:[{n, side, top_left:[x,y],
//  bottom_right:[x,y], scale}]}; corners are image-frame coordinates.
Json layer_manifest(Pixel focal, const FoveaConfig& cfg,
                    const std::vector<LayerFrame>& frames);
/// Writes layer_<n>.png for each layer plus manifest.json. Extra fields are
/// merged into the manifest.
void write_layers(const std::filesystem::path& dir, Pixel focal, const FoveaConfig& cfg,
                  const std::vector<Layer>& layers, const Json& extra = Json::object());

/// One detection wire document:
/// {scene_id, fixation_index, layer, detections:[{box:[x0,y0,x1,y1], scores:{label: v}}]}
Json detection_doc(const std::string& scene_id, int fixation_index, int layer,
                   const std::vector<Detection>& dets, const ClassSet& classes);

struct WireExpectations {
  std::string scene_id;
  int fixation_index = 0;
  int levels = 1;
  int base_side = 0;
};

/// Strict parser for the bridge reply: either one wire document or an array
/// of them. Returns per-layer detections (index n-1), layer-frame boxes.
/// Rejects unknown labels, negative scores, boxes outside [0, l1], mismatched
/// scene/fixation, duplicate or out-of-range layers.
std::vector<std::vector<Detection>> parse_detection_reply(const Json& j,
                                                          const ClassSet& classes,
                                                          const WireExpectations& expect);

/// {Y, X, K, beta:[row-major Y*X*K], ior:[row-major Y*X]}
Json belief_snapshot(const BeliefGrid& grid);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace semba
