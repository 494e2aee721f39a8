#include "semba/search.hpp"

#include <algorithm>
#include <stdexcept>

namespace semba {

std::vector<std::vector<Detection>> SimulatedDetector::observe(
    const SceneSpec& scene, int /*fixation_index*/, Pixel /*focal*/,
    const FoveaConfig& fovea, std::span<const LayerFrame> frames) {
  std::vector<std::vector<Detection>> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    out.push_back(detect_layer(scene, f, fovea.base_side, classes_, model_));
  }
  return out;
}

void EpisodeConfig::validate() const {
  if (max_fixations < 1) throw std::invalid_argument("max_fixations must be >= 1");
  if (threshold < 0.0 || threshold > 1.0) throw std::invalid_argument("threshold not in [0,1]");
  if (min_overlap_fraction < 0.0 || min_overlap_fraction > 1.0) {
    throw std::invalid_argument("min_overlap_fraction not in [0,1]");
  }
}

FoveaConfig EpisodeConfig::fovea_for(const SceneSpec& scene) const {
  FoveaConfig f = fovea;
  f.image_height = scene.height;
  f.image_width = scene.width;
  f.validate();
  return f;
}

GridGeometry EpisodeConfig::grid_for(const SceneSpec& scene) const {
  GridGeometry g = grid;
  g.image_height = scene.height;
  g.image_width = scene.width;
  g.validate();
  return g;
}

Pixel cell_center(Cell c, const GridGeometry& geom) {
  if (!geom.contains(c)) throw std::out_of_range("cell outside the grid");
  return geom.cell_center(c);
}

bool oracle_hit(Pixel fix, const SceneSpec& scene) {
  return std::any_of(scene.objects.begin(), scene.objects.end(), [&](const SceneObject& o) {
    return o.label == scene.target && o.box.contains(fix.x, fix.y);
  });
}

std::string fixated_label(Pixel fix, const SceneSpec& scene) {
  const SceneObject* best = nullptr;
  for (const auto& o : scene.objects) {
    if (!o.box.contains(fix.x, fix.y)) continue;
    if (!best || o.box.area() < best->box.area()) best = &o;
  }
  return best ? best->label : "background";
}

FusionStats fuse_fixation(BeliefGrid& grid, const SceneSpec& scene, Pixel focal,
                          int fixation_index, const EpisodeConfig& cfg,
                          const ClassSet& classes, DetectionSource& source) {
  const FoveaConfig fovea = cfg.fovea_for(scene);
  const GridGeometry geom = cfg.grid_for(scene);
  const auto frames = layer_frames(focal, fovea);
  auto per_layer = source.observe(scene, fixation_index, focal, fovea, frames);
  if (per_layer.size() != frames.size()) {
    throw std::runtime_error("detection source returned the wrong number of layers");
  }

  FusionStats stats;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto dets = filter_detections(std::move(per_layer[i]), cfg.threshold);
    std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
      return a.max_score() > b.max_score();
    });
    stats.detections += static_cast<int>(dets.size());
    for (const auto& d : dets) {
      if (static_cast<int>(d.scores.size()) != classes.size()) {
        throw std::invalid_argument("detection score vector does not match the class set");
      }
      const auto remapped = remap_bbox(d.box, focal, frames[i].index, fovea.base_side,
                                       fovea.image_height, fovea.image_width);
      if (remapped.box.area() <= 0.0) {
        grid.note_zero_area();
        ++stats.zero_area;
        continue;
      }
      stats.cells_updated +=
          deposit_detection(grid, remapped.box, d.scores, geom, cfg.min_overlap_fraction);
      ++stats.fused;
    }
  }
  return stats;
}

namespace {

Cell random_gaze(const BeliefGrid& grid, KeyedStream& rng) {
  std::vector<Cell> open;
  for (int y = 0; y < grid.rows(); ++y) {
    for (int x = 0; x < grid.cols(); ++x) {
      if (!grid.inhibited({x, y})) open.push_back({x, y});
    }
  }
  if (open.empty()) throw SearchExhausted();
  return open[static_cast<std::size_t>(rng.below(static_cast<int>(open.size())))];
}

}  // namespace

Episode run_episode(const SceneSpec& scene, const EpisodeConfig& cfg,
                    const ClassSet& classes, DetectionSource& source,
                    const FixationObserver& observer) {
  cfg.validate();
  scene.validate();
  const int target = classes.index_of(scene.target);
  const GridGeometry geom = cfg.grid_for(scene);
  cfg.fovea_for(scene);

  Episode ep{Scanpath{scene.scene_id, scene.target, {}, false, std::nullopt, false, {}},
             init_beliefs(geom, classes)};
  KeyedStream policy_rng(combine_keys(cfg.policy_seed, hash_string(scene.scene_id)));

  Pixel focal{scene.width / 2, scene.height / 2};
  for (int t = 0;; ++t) {
    const Cell cell = geom.cell_of(focal);
    const Fixation fix{focal, cell, fixated_label(focal, scene)};
    ep.scanpath.fixations.push_back(fix);

    if (cfg.policy == GazePolicy::kGreedy) {
      fuse_fixation(ep.beliefs, scene, focal, t, cfg, classes, source);
    }
    if (observer) observer(t, fix, ep.beliefs);

    if (cfg.stop_rule == StopRule::kOracle) {
      if (oracle_hit(focal, scene)) {
        ep.scanpath.found = true;
        ep.scanpath.found_at = t;
        break;
      }
    } else if (expectation(ep.beliefs, cell, target) >= cfg.confidence_tau) {
      ep.scanpath.found = oracle_hit(focal, scene);
      if (ep.scanpath.found) ep.scanpath.found_at = t;
      break;
    }

    apply_ior(ep.beliefs, cell);
    if (t == cfg.max_fixations) break;

    Cell next;
    try {
      next = cfg.policy == GazePolicy::kGreedy ? select_gaze(ep.beliefs, target)
                                               : random_gaze(ep.beliefs, policy_rng);
    } catch (const SearchExhausted&) {
      ep.scanpath.exhausted = true;
      break;
    }
    focal = geom.cell_center(next);
  }
  return ep;
}

}  // namespace semba
