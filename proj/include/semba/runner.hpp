#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semba/fovea.hpp"
#include "semba/search.hpp"
#include "semba/simdet.hpp"

namespace semba {

struct FoveaPreset {
  std::string name;
  int levels;
  int base_side;
};

/// The four configurations covering a 1024 x 1024 field of view:
/// 5x64, 4x128, 4x160 and 3x256.
const std::vector<FoveaPreset>& fovea_presets();
std::optional<FoveaPreset> find_preset(const std::string& name);

struct SceneDirectory {
  std::vector<SceneSpec> scenes;  // sorted by scene_id
  std::vector<std::string> errors;  // one entry per skipped file
};

/// Loads every *.json scene in `dir`. Malformed files are skipped and
/// reported; scenes whose labels the class set cannot name are skipped too.
SceneDirectory load_scene_dir(const std::filesystem::path& dir, const ClassSet& classes);

/// Builds a fresh detection source for one worker.
using SourceFactory = std::function<std::unique_ptr<DetectionSource>()>;

/// Runs one episode per scene on `jobs` workers. Results come back in scene
/// order regardless of completion order.
std::vector<Episode> run_batch(const std::vector<SceneSpec>& scenes, const EpisodeConfig& cfg,
                               const ClassSet& classes, const SourceFactory& make_source,
                               int jobs = 1, const std::function<void(std::size_t, int, const Fixation&, const BeliefGrid&)>& observer = {});

/// Convenience: simulated-detector batch returning only the scanpaths.
std::vector<Scanpath> run_simulated_batch(const std::vector<SceneSpec>& scenes,
                                          const EpisodeConfig& cfg, const ClassSet& classes,
                                          const DetectorModel& model, int jobs = 1);

}  // namespace semba
