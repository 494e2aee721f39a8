#include "semba/simdet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace semba {

void SceneSpec::validate() const {
  if (scene_id.empty()) throw std::invalid_argument("scene_id is empty");
  if (height <= 0 || width <= 0) {
    throw std::invalid_argument("scene " + scene_id + ": dimensions must be positive");
  }
  bool has_target = false;
  for (const auto& o : objects) {
    if (o.label.empty()) throw std::invalid_argument("scene " + scene_id + ": empty label");
    if (!o.box.valid() || o.box.x0 < 0 || o.box.y0 < 0 || o.box.x1 > width ||
        o.box.y1 > height) {
      throw std::invalid_argument("scene " + scene_id + ": box for '" + o.label +
                                  "' is malformed or outside the image");
    }
    has_target = has_target || o.label == target;
  }
  if (!has_target) {
    throw std::invalid_argument("scene " + scene_id + ": target '" + target +
                                "' has no ground-truth box");
  }
}

void DetectorModel::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(true_positive_base)) throw std::invalid_argument("true_positive_base not in [0,1]");
  if (degradation_exponent < 0.0) throw std::invalid_argument("degradation_exponent < 0");
  if (min_visible_area < 0.0) throw std::invalid_argument("min_visible_area < 0");
  if (false_positive_rate < 0.0) throw std::invalid_argument("false_positive_rate < 0");
  if (!(score_concentration > 1.0)) throw std::invalid_argument("score_concentration must exceed 1");
  if (box_jitter < 0.0) throw std::invalid_argument("box_jitter < 0");
  if (duplicates_per_object < 1) throw std::invalid_argument("duplicates_per_object < 1");
}

double DetectorModel::detection_probability(int level) const {
  return true_positive_base * std::exp2(-degradation_exponent * (level - 1));
}

double Detection::max_score() const {
  return scores.empty() ? 0.0 : *std::max_element(scores.begin(), scores.end());
}

double Detection::max_normalized_score() const {
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  return total > 0.0 ? max_score() / total : 0.0;
}

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

std::uint64_t KeyedStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double KeyedStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int KeyedStream::below(int n) {
  if (n <= 0) throw std::invalid_argument("below() needs n > 0");
  return static_cast<int>(uniform() * n);
}

double KeyedStream::normal() {
  // Box-Muller, one variate per call.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int KeyedStream::poisson(double rate) {
  if (rate <= 0.0) return 0;
  // Knuth's product method; rates here are small.
  const double limit = std::exp(-rate);
  int k = 0;
  double p = uniform();
  while (p > limit) {
    ++k;
    p *= uniform();
  }
  return k;
}

namespace {

enum class StreamTag : std::uint64_t { kObject = 1, kFalsePositive = 2, kScene = 3 };

std::uint64_t layer_key(const DetectorModel& model, const SceneSpec& scene,
                        const LayerFrame& layer, StreamTag tag, std::uint64_t item) {
  std::uint64_t k = combine_keys(model.rng_seed, hash_string(scene.scene_id));
  k = combine_keys(k, static_cast<std::uint64_t>(layer.index));
  k = combine_keys(k, static_cast<std::uint64_t>(static_cast<std::uint32_t>(layer.top_left.x)));
  k = combine_keys(k, static_cast<std::uint64_t>(static_cast<std::uint32_t>(layer.top_left.y)));
  k = combine_keys(k, static_cast<std::uint64_t>(tag));
  return combine_keys(k, item);
}

std::vector<double> concentrated_scores(int k, int classes, double concentration) {
  const double total = concentration + (classes - 1);
  std::vector<double> s(static_cast<std::size_t>(classes), 1.0 / total);
  s[static_cast<std::size_t>(k)] = concentration / total;
  return s;
}

BBox jittered(const BBox& b, double sigma, double limit, KeyedStream& rng, int level) {
  BBox out = b;
  if (sigma > 0.0) {
    out.x0 += sigma * rng.normal();
    out.y0 += sigma * rng.normal();
    out.x1 += sigma * rng.normal();
    out.y1 += sigma * rng.normal();
  }
  out.x0 = std::clamp(out.x0, 0.0, limit);
  out.y0 = std::clamp(out.y0, 0.0, limit);
  out.x1 = std::clamp(out.x1, 0.0, limit);
  out.y1 = std::clamp(out.y1, 0.0, limit);
  if (out.x1 < out.x0) std::swap(out.x0, out.x1);
  if (out.y1 < out.y0) std::swap(out.y0, out.y1);
  out.frame = Frame::layer(level);
  return out;
}

}  // namespace

std::vector<Detection> detect_layer(const SceneSpec& scene, const LayerFrame& layer,
                                    int base_side, const ClassSet& classes,
                                    const DetectorModel& model) {
  model.validate();
  const BBox region = layer.region();
  const double scale = layer.scale;
  const double limit = base_side;
  std::vector<Detection> out;

  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const auto& obj = scene.objects[i];
    const BBox visible = intersect(obj.box, region);
    if (visible.area() <= 0.0) continue;
    if (visible.area() / (scale * scale) < model.min_visible_area) continue;
    const auto k = classes.find(obj.label);
    if (!k) continue;  // the detector cannot name this category

    KeyedStream rng(layer_key(model, scene, layer, StreamTag::kObject, i));
    if (rng.uniform() >= model.detection_probability(layer.index)) continue;

    const BBox in_layer{(visible.x0 - layer.top_left.x) / scale,
                        (visible.y0 - layer.top_left.y) / scale,
                        (visible.x1 - layer.top_left.x) / scale,
                        (visible.y1 - layer.top_left.y) / scale, Frame::layer(layer.index)};
    for (int d = 0; d < model.duplicates_per_object; ++d) {
      out.push_back({concentrated_scores(*k, classes.size(), model.score_concentration),
                     jittered(in_layer, model.box_jitter, limit, rng, layer.index),
                     layer.index});
    }
  }

  KeyedStream fp(layer_key(model, scene, layer, StreamTag::kFalsePositive, 0));
  const int n_fp = fp.poisson(model.false_positive_rate);
  for (int i = 0; i < n_fp; ++i) {
    const int k = fp.below(classes.size());
    const double w = fp.uniform(limit / 16.0, limit / 4.0);
    const double h = fp.uniform(limit / 16.0, limit / 4.0);
    const double x0 = fp.uniform(0.0, limit - w);
    const double y0 = fp.uniform(0.0, limit - h);
    out.push_back({concentrated_scores(k, classes.size(), model.score_concentration),
                   {x0, y0, x0 + w, y0 + h, Frame::layer(layer.index)},
                   layer.index});
  }
  return out;
}

std::vector<Detection> filter_detections(std::vector<Detection> dets, double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw std::invalid_argument("confidence threshold must be in [0, 1]");
  }
  std::erase_if(dets, [threshold](const Detection& d) {
    return d.max_normalized_score() < threshold;
  });
  return dets;
}

SceneSpec generate_scene(std::uint64_t seed, int index, const ClassSet& classes,
                         const SceneGenParams& params) {
  KeyedStream rng(combine_keys(combine_keys(seed, static_cast<std::uint64_t>(StreamTag::kScene)),
                               static_cast<std::uint64_t>(index)));
  SceneSpec scene;
  char id[32];
  std::snprintf(id, sizeof id, "synth_%05d", index);
  scene.scene_id = id;
  scene.height = params.height;
  scene.width = params.width;

  const int target_k = rng.below(classes.size());
  scene.target = classes.label(target_k);
  const int count =
      params.min_objects + rng.below(params.max_objects - params.min_objects + 1);
  const double log_lo = std::log(params.min_side);
  const double log_hi = std::log(params.max_side);
  for (int i = 0; i < count; ++i) {
    int k = target_k;
    if (i > 0) {
      k = rng.below(classes.size() - 1);
      if (k >= target_k) ++k;  // distractors never share the target category
    }
    const double side = std::exp(rng.uniform(log_lo, log_hi));
    const double aspect = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
    const double w = std::min(side * std::sqrt(aspect), params.width - 1.0);
    const double h = std::min(side / std::sqrt(aspect), params.height - 1.0);
    const double x0 = std::floor(rng.uniform(0.0, params.width - w));
    const double y0 = std::floor(rng.uniform(0.0, params.height - h));
    scene.objects.push_back(
        {classes.label(k), {x0, y0, x0 + std::round(w), y0 + std::round(h), Frame::image()}});
  }
  return scene;
}

}  // namespace semba
