#include "semba/bridge.hpp"

#include <thread>

#include "semba/io.hpp"

namespace semba {

BridgeDetector::BridgeDetector(std::filesystem::path work_dir, const ClassSet& classes,
                               std::chrono::milliseconds timeout,
                               std::chrono::milliseconds poll)
    : work_dir_(std::move(work_dir)), classes_(classes), timeout_(timeout), poll_(poll) {
  std::filesystem::create_directories(work_dir_);
}

const Raster& BridgeDetector::image_for(const SceneSpec& scene) {
  if (scene.image.empty()) {
    throw std::invalid_argument("scene " + scene.scene_id +
                                " has no 'image' field; the bridge detector needs pixels");
  }
  if (cached_path_ != scene.image) {
    cached_ = read_png(scene.image);
    cached_path_ = scene.image;
  }
  if (cached_.height() != scene.height || cached_.width() != scene.width) {
    throw std::invalid_argument("scene " + scene.scene_id +
                                ": image size does not match height/width");
  }
  return cached_;
}

std::vector<std::vector<Detection>> BridgeDetector::observe(
    const SceneSpec& scene, int fixation_index, Pixel focal, const FoveaConfig& fovea,
    std::span<const LayerFrame> frames) {
  namespace fs = std::filesystem;
  const auto layers = build_pyramid(image_for(scene), focal, fovea);
  if (layers.size() != frames.size()) throw std::logic_error("pyramid/frame mismatch");

  fs::remove(work_dir_ / kDone);
  fs::remove(work_dir_ / kReply);
  write_layers(work_dir_, focal, fovea, layers,
               Json{{"scene_id", scene.scene_id}, {"fixation_index", fixation_index}});

  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (!fs::exists(work_dir_ / kDone)) {
    if (std::chrono::steady_clock::now() > deadline) {
      throw BridgeTimeout("no done.json from the detector bridge for scene " +
                          scene.scene_id + " fixation " + std::to_string(fixation_index));
    }
    std::this_thread::sleep_for(poll_);
  }
  const Json reply = read_json_file(work_dir_ / kReply);
  fs::remove(work_dir_ / kDone);
  return parse_detection_reply(
      reply, classes_, {scene.scene_id, fixation_index, fovea.levels, fovea.base_side});
}

}  // namespace semba
