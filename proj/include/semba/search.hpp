#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semba/fovea.hpp"
#include "semba/semantics.hpp"
#include "semba/simdet.hpp"

namespace semba {

struct Fixation {
  Pixel px;
  Cell cell;
  std::string label;
  friend bool operator==(const Fixation&, const Fixation&) = default;
};

struct Scanpath {
  std::string scene_id;
  std::string target;
  std::vector<Fixation> fixations;  // fixations[0] is the centre start f0
  bool found = false;
  std::optional<int> found_at;
  bool exhausted = false;  // ran out of non-inhibited cells
  std::optional<std::string> subject;  // set for human reference data

  friend bool operator==(const Scanpath&, const Scanpath&) = default;
};

/// Anything that turns a fixation's pyramid into per-layer detections
/// (layer-frame boxes). Index i of the result belongs to frames[i].
class DetectionSource {
 public:
  virtual ~DetectionSource() = default;
  virtual std::vector<std::vector<Detection>> observe(const SceneSpec& scene,
                                                      int fixation_index, Pixel focal,
                                                      const FoveaConfig& fovea,
                                                      std::span<const LayerFrame> frames) = 0;
};

class SimulatedDetector final : public DetectionSource {
 public:
  SimulatedDetector(DetectorModel model, const ClassSet& classes)
      : model_(model), classes_(classes) {
    model_.validate();
  }

  std::vector<std::vector<Detection>> observe(const SceneSpec& scene, int fixation_index,
                                              Pixel focal, const FoveaConfig& fovea,
                                              std::span<const LayerFrame> frames) override;

  const DetectorModel& model() const { return model_; }

 private:
  DetectorModel model_;
  const ClassSet& classes_;
};

enum class StopRule { kOracle, kConfidence };
enum class GazePolicy { kGreedy, kUniformRandom };

struct EpisodeConfig {
  int max_fixations = 6;  // excluding f0
  FoveaConfig fovea;      // image dimensions are taken from the scene
  GridGeometry grid;      // image dimensions are taken from the scene
  double threshold = 0.01;
  StopRule stop_rule = StopRule::kOracle;
  double confidence_tau = 0.5;  // used by StopRule::kConfidence
  double min_overlap_fraction = 0.0;
  GazePolicy policy = GazePolicy::kGreedy;
  std::uint64_t policy_seed = 0;  // only the random baseline draws from it

  void validate() const;
  FoveaConfig fovea_for(const SceneSpec& scene) const;
  GridGeometry grid_for(const SceneSpec& scene) const;
};

/// Center-most pixel of a cell.
Pixel cell_center(Cell c, const GridGeometry& geom);

/// True iff the pixel lies inside (inclusive) a ground-truth box of the target.
bool oracle_hit(Pixel fix, const SceneSpec& scene);

/// Label of the smallest ground-truth box containing the pixel, else
/// "background".
std::string fixated_label(Pixel fix, const SceneSpec& scene);

struct FusionStats {
  int detections = 0;    // after thresholding
  int fused = 0;         // deposited into the grid
  int zero_area = 0;     // dropped after clipping
  int cells_updated = 0;
};

/// One fixation's sensing step: pyramid placement, detection, thresholding,
/// remapping and sequential fusion (innermost layer first; within a layer by
/// descending maximum score).
FusionStats fuse_fixation(BeliefGrid& grid, const SceneSpec& scene, Pixel focal,
                          int fixation_index, const EpisodeConfig& cfg,
                          const ClassSet& classes, DetectionSource& source);

struct Episode {
  Scanpath scanpath;
  BeliefGrid beliefs;
};

using FixationObserver = std::function<void(int t, const Fixation&, const BeliefGrid&)>;

/// Runs one target-present search episode from the image centre.
Episode run_episode(const SceneSpec& scene, const EpisodeConfig& cfg,
                    const ClassSet& classes, DetectionSource& source,
                    const FixationObserver& observer = {});

}  // namespace semba
