#include <doctest.h>

#include <random>

#include "semba/simdet.hpp"

using namespace semba;

namespace {

SceneSpec single_object_scene(BBox box, std::string label = "cup") {
  SceneSpec s;
  s.scene_id = "unit";
  s.height = 1050;
  s.width = 1680;
  s.target = label;
  s.objects.push_back({label, box});
  return s;
}

DetectorModel quiet_model() {
  DetectorModel m;
  m.false_positive_rate = 0.0;
  return m;
}

}  // namespace

TEST_CASE("object inside the fovea with certain detection") {
  const auto& classes = ClassSet::coco();
  auto model = quiet_model();
  model.true_positive_base = 1.0;
  const auto scene = single_object_scene({800, 500, 860, 560, Frame::image()});
  const FoveaConfig cfg{4, 160, 1050, 1680};
  const auto frames = layer_frames({840, 525}, cfg);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    model.rng_seed = seed;
    const auto dets = detect_layer(scene, frames[0], 160, classes, model);
    REQUIRE(dets.size() == 1);
    const auto& s = dets[0].scores;
    CHECK(std::max_element(s.begin(), s.end()) - s.begin() == classes.index_of("cup"));
    CHECK(dets[0].box.frame == Frame::layer(1));
    CHECK(dets[0].box.x0 >= 0.0);
    CHECK(dets[0].box.x1 <= 160.0);
  }
}

TEST_CASE("objects below the visibility floor are never detected") {
  const auto& classes = ClassSet::coco();
  auto model = quiet_model();
  model.true_positive_base = 1.0;
  model.degradation_exponent = 0.0;
  model.min_visible_area = 150.0;
  // 40x40 object outside L3 but inside L4: 1600 / 4^3 = 25 px^2 after downsampling.
  const auto scene = single_object_scene({200, 500, 240, 540, Frame::image()});
  const FoveaConfig cfg{4, 160, 1050, 1680};
  const auto frames = layer_frames({840, 525}, cfg);
  CHECK(intersection_area(scene.objects[0].box, frames[3].region()) > 0.0);
  CHECK(intersection_area(scene.objects[0].box, frames[2].region()) == 0.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    model.rng_seed = seed;
    for (const auto& f : frames) CHECK(detect_layer(scene, f, 160, classes, model).empty());
  }
}

TEST_CASE("detections are replayable") {
  const auto& classes = ClassSet::coco();
  DetectorModel model;
  model.rng_seed = 99;
  model.false_positive_rate = 2.0;
  const auto scene = generate_scene(3, 4, classes);
  const FoveaConfig cfg{4, 160, 1050, 1680};
  for (const auto& f : layer_frames({700, 400}, cfg)) {
    const auto a = detect_layer(scene, f, 160, classes, model);
    const auto b = detect_layer(scene, f, 160, classes, model);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].scores == b[i].scores);
      CHECK(a[i].box == b[i].box);
    }
  }
}

TEST_CASE("detection boxes stay inside the layer frame") {
  const auto& classes = ClassSet::coco();
  DetectorModel model;
  model.false_positive_rate = 3.0;
  model.box_jitter = 4.0;
  model.duplicates_per_object = 3;
  const FoveaConfig cfg{4, 128, 1050, 1680};
  for (int i = 0; i < 40; ++i) {
    model.rng_seed = static_cast<std::uint64_t>(i);
    const auto scene = generate_scene(5, i, classes);
    for (const auto& f : layer_frames({100 + 37 * i, 60 + 23 * i}, cfg)) {
      for (const auto& d : detect_layer(scene, f, 128, classes, model)) {
        REQUIRE(d.box.x0 >= 0.0);
        REQUIRE(d.box.y0 >= 0.0);
        REQUIRE(d.box.x1 <= 128.0);
        REQUIRE(d.box.y1 <= 128.0);
        REQUIRE(d.box.valid());
        REQUIRE(d.source_layer == f.index);
        REQUIRE(d.scores.size() == 80u);
      }
    }
  }
}

TEST_CASE("detection rate does not increase with eccentricity") {
  const auto& classes = ClassSet::coco();
  auto model = quiet_model();
  // 120x120 object centred on the focal point: visible in every layer.
  const auto scene = single_object_scene({780, 465, 900, 585, Frame::image()});
  const FoveaConfig cfg{4, 160, 1050, 1680};
  const auto frames = layer_frames({840, 525}, cfg);
  constexpr int kTrials = 1000;
  std::vector<int> hits(frames.size(), 0);
  for (int t = 0; t < kTrials; ++t) {
    model.rng_seed = static_cast<std::uint64_t>(t);
    for (std::size_t n = 0; n < frames.size(); ++n) {
      hits[n] += detect_layer(scene, frames[n], 160, classes, model).empty() ? 0 : 1;
    }
  }
  for (std::size_t n = 1; n < frames.size(); ++n) CHECK(hits[n] <= hits[n - 1]);
  // Empirical rates track base * 2^(-0.5 (n-1)).
  for (std::size_t n = 0; n < frames.size(); ++n) {
    CHECK(hits[n] / double(kTrials) ==
          doctest::Approx(model.detection_probability(static_cast<int>(n) + 1)).epsilon(0.1));
  }
}

TEST_CASE("confidence filter") {
  Detection weak{std::vector<double>(111, 1.0), {}, 1};
  weak.scores[0] = 1.0;  // normalized max = 1/111 ~ 0.009
  Detection strong{{5.0, 1.0, 1.0}, {}, 1};
  CHECK(weak.max_normalized_score() < 0.01);
  CHECK(filter_detections({weak}, 0.01).empty());
  CHECK(filter_detections({weak, strong}, 0.0).size() == 2);
  CHECK_THROWS_AS(filter_detections({weak}, 1.5), std::invalid_argument);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Detection> dets;
    for (int i = 0; i < 20; ++i) {
      Detection d{{u(rng), u(rng) + 1e-9, u(rng)}, {}, i};
      dets.push_back(d);
    }
    const double th = u(rng);
    std::vector<int> want;
    for (const auto& d : dets) {
      const double mx = std::max({d.scores[0], d.scores[1], d.scores[2]});
      if (mx / (d.scores[0] + d.scores[1] + d.scores[2]) >= th) want.push_back(d.source_layer);
    }
    std::vector<int> got;
    for (const auto& d : filter_detections(dets, th)) got.push_back(d.source_layer);
    REQUIRE(got == want);
  }
}

TEST_CASE("keyed stream") {
  KeyedStream a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  KeyedStream u(7);
  double sum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    sum += v;
  }
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
  KeyedStream p(9);
  long total = 0;
  for (int i = 0; i < 20000; ++i) total += p.poisson(0.3);
  CHECK(total / 20000.0 == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("generated scenes are valid and reproducible") {
  const auto& classes = ClassSet::coco();
  for (int i = 0; i < 100; ++i) {
    const auto s = generate_scene(1, i, classes);
    CHECK_NOTHROW(s.validate());
    const auto t = generate_scene(1, i, classes);
    REQUIRE(s.objects.size() == t.objects.size());
    for (std::size_t j = 0; j < s.objects.size(); ++j) {
      CHECK(s.objects[j].box == t.objects[j].box);
      CHECK(s.objects[j].label == t.objects[j].label);
    }
    CHECK(classes.find(s.target).has_value());
  }
}

TEST_CASE("scene validation") {
  auto s = single_object_scene({10, 10, 20, 20, Frame::image()});
  CHECK_NOTHROW(s.validate());
  s.target = "dog";
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = single_object_scene({10, 10, 1700, 20, Frame::image()});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = single_object_scene({30, 10, 20, 20, Frame::image()});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
