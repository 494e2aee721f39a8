#pragma once

// Seeded synthetic detection oracle. Stands in for a deep detector: objects
// seen in outer (more downsampled) layers are detected less reliably, and
// small objects vanish entirely below a visibility floor.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "semba/fovea.hpp"
#include "semba/geometry.hpp"
#include "semba/semantics.hpp"

namespace semba {

struct SceneObject {
  std::string label;
  BBox box;  // image frame
};

struct SceneSpec {
  std::string scene_id;
  int height = 0;
  int width = 0;
  std::string target;
  std::vector<SceneObject> objects;
  std::string image;  // optional raster path, used by the bridge detector

  /// Throws std::invalid_argument on empty ids, non-positive dimensions,
  /// malformed or out-of-bounds boxes, or a target absent from the objects.
  void validate() const;
};

struct DetectorModel {
  double true_positive_base = 0.95;
  double degradation_exponent = 0.5;  // per doubling of the downsample factor
  double min_visible_area = 64.0;     // layer-frame px^2
  double false_positive_rate = 0.3;   // expected false positives per layer
  double score_concentration = 20.0;  // true-class score / distractor score
  double box_jitter = 1.0;            // layer-frame px (image-frame jitter scales with 2^(n-1))
  int duplicates_per_object = 1;
  std::uint64_t rng_seed = 0;

  void validate() const;
  /// true_positive_base * 2^(-degradation_exponent * (n-1)).
  double detection_probability(int level) const;
};

struct Detection {
  std::vector<double> scores;  // K unnormalized likelihoods
  BBox box;
  int source_layer = 1;

  double max_normalized_score() const;
  double max_score() const;
};

/// Counter-based random stream: draw i is a pure function of (key, i), so
/// streams with distinct keys never interact and replays are exact.
class KeyedStream {
 public:
  explicit KeyedStream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  int below(int n);
  double normal();
  int poisson(double rate);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_string(std::string_view s);
std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b);

/// Detections for one pyramid layer, boxes in that layer's frame. All
/// randomness is keyed by (seed, scene_id, layer index, layer placement).
std::vector<Detection> detect_layer(const SceneSpec& scene, const LayerFrame& layer,
                                    int base_side, const ClassSet& classes,
                                    const DetectorModel& model);

/// Keeps detections whose normalized maximum score reaches `threshold`.
std::vector<Detection> filter_detections(std::vector<Detection> dets,
                                         double threshold = 0.01);

struct SceneGenParams {
  int height = 1050;
  int width = 1680;
  int min_objects = 4;
  int max_objects = 10;
  double min_side = 40.0;
  double max_side = 400.0;
};

/// Reproducible synthetic target-present scene `index` drawn from `seed`.
SceneSpec generate_scene(std::uint64_t seed, int index, const ClassSet& classes,
                         const SceneGenParams& params = {});

}  // namespace semba
