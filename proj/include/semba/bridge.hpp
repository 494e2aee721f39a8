#pragma once

// File-handshake detection source. Per fixation the engine writes
// layer_<n>.png and manifest.json into the work directory, then blocks until
// an external detector writes detections.json followed by done.json.

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

#include "semba/raster.hpp"
#include "semba/search.hpp"

namespace semba {

class BridgeTimeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BridgeDetector final : public DetectionSource {
 public:
  BridgeDetector(std::filesystem::path work_dir, const ClassSet& classes,
                 std::chrono::milliseconds timeout = std::chrono::seconds(120),
                 std::chrono::milliseconds poll = std::chrono::milliseconds(5));

  std::vector<std::vector<Detection>> observe(const SceneSpec& scene, int fixation_index,
                                              Pixel focal, const FoveaConfig& fovea,
                                              std::span<const LayerFrame> frames) override;

  static constexpr const char* kManifest = "manifest.json";
  static constexpr const char* kReply = "detections.json";
  static constexpr const char* kDone = "done.json";

 private:
  const Raster& image_for(const SceneSpec& scene);

  std::filesystem::path work_dir_;
  const ClassSet& classes_;
  std::chrono::milliseconds timeout_;
  std::chrono::milliseconds poll_;
  std::string cached_path_;
  Raster cached_;
};

}  // namespace semba
