#include <doctest.h>

#include <random>

#include "semba/fovea.hpp"

using namespace semba;

namespace {

Raster gradient_image(int h, int w, int channels = 1) {
  Raster r(h, w, channels);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c)
        r.at(y, x, c) = static_cast<std::uint8_t>((x * 7 + y * 3 + c * 50) % 256);
  return r;
}

}  // namespace

TEST_CASE("layer_side doubles per level") {
  CHECK(layer_side(1, 160) == 160);
  CHECK(layer_side(4, 160) == 1280);
  CHECK(layer_side(3, 256) == 1024);
  CHECK(layer_side(5, 64) == 1024);
  CHECK(layer_side(4, 128) == 1024);
  for (int n = 1; n < 10; ++n) {
    for (int l1 : {2, 64, 160, 256}) CHECK(layer_side(n + 1, l1) == 2 * layer_side(n, l1));
  }
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(FoveaConfig{4, 160, 1050, 1680}.validate());
  CHECK_THROWS_AS(FoveaConfig({0, 160, 1050, 1680}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(FoveaConfig({4, 161, 1050, 1680}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(FoveaConfig({4, 1050, 1050, 1680}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(FoveaConfig({4, 0, 1050, 1680}).validate(), std::invalid_argument);
  CHECK(FoveaConfig{4, 160, 1050, 1680}.padding() == 640);
}

TEST_CASE("layer frames are nested squares around the focal point") {
  const FoveaConfig cfg{4, 160, 1050, 1680};
  const Pixel f{840, 525};
  const auto frames = layer_frames(f, cfg);
  REQUIRE(frames.size() == 4);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& fr = frames[i];
    CHECK(fr.index == static_cast<int>(i) + 1);
    CHECK(fr.side == layer_side(fr.index, 160));
    CHECK(fr.scale == (1 << i));
    CHECK(fr.top_left == Pixel{f.x - fr.side / 2, f.y - fr.side / 2});
    CHECK(fr.bottom_right == Pixel{f.x + fr.side / 2, f.y + fr.side / 2});
    if (i > 0) {
      const auto& inner = frames[i - 1];
      CHECK(fr.top_left.x < inner.top_left.x);
      CHECK(fr.top_left.y < inner.top_left.y);
      CHECK(fr.bottom_right.x > inner.bottom_right.x);
      CHECK(fr.bottom_right.y > inner.bottom_right.y);
    }
  }
  CHECK(frames[3].bottom_right.x - frames[3].top_left.x == 1280);
}

TEST_CASE("focal point must be inside the image") {
  const FoveaConfig cfg{3, 256, 1050, 1680};
  CHECK_THROWS_AS(layer_frames({-1, 0}, cfg), OutOfBoundsError);
  CHECK_THROWS_AS(layer_frames({1680, 0}, cfg), OutOfBoundsError);
  CHECK_THROWS_AS(layer_frames({0, 1050}, cfg), OutOfBoundsError);
  CHECK_NOTHROW(layer_frames({0, 0}, cfg));
  CHECK_NOTHROW(layer_frames({1679, 1049}, cfg));
}

TEST_CASE("pyramid on a 1050x1680 image") {
  const auto image = gradient_image(1050, 1680, 3);
  const FoveaConfig cfg{4, 160, 1050, 1680};
  const Pixel f{840, 525};
  const auto layers = build_pyramid(image, f, cfg);
  REQUIRE(layers.size() == 4);
  for (const auto& l : layers) {
    CHECK(l.raster.height() == 160);
    CHECK(l.raster.width() == 160);
    CHECK(l.raster.channels() == 3);
  }
  CHECK(layers[3].frame.side == 1280);

  SUBCASE("L1 is an exact crop of the source") {
    const auto& l1 = layers[0].raster;
    for (int y = 0; y < 160; ++y)
      for (int x = 0; x < 160; ++x)
        for (int c = 0; c < 3; ++c) REQUIRE(l1.at(y, x, c) == image.at(y + 445, x + 760, c));
  }
  SUBCASE("L2 pixel is the 2x2 block mean (pixel-centre alignment)") {
    const auto& l2 = layers[1].raster;
    const int ox = 840 - 160, oy = 525 - 160;
    for (int y : {0, 17, 159}) {
      for (int x : {0, 93, 159}) {
        const double mean = (image.at(oy + 2 * y, ox + 2 * x) + image.at(oy + 2 * y, ox + 2 * x + 1) +
                             image.at(oy + 2 * y + 1, ox + 2 * x) +
                             image.at(oy + 2 * y + 1, ox + 2 * x + 1)) / 4.0;
        CHECK(l2.at(y, x) == static_cast<int>(std::floor(mean + 0.5)));
      }
    }
  }
}

TEST_CASE("single level pyramid equals the sub-image") {
  const auto image = gradient_image(1050, 1680);
  const FoveaConfig cfg{1, 160, 1050, 1680};
  const Pixel f{300, 700};
  const auto layers = build_pyramid(image, f, cfg);
  REQUIRE(layers.size() == 1);
  CHECK(layers[0].raster == image.crop(700 - 80, 300 - 80, 160, 160));
}

TEST_CASE("corner focal point reads zero padding") {
  Raster image(1050, 1680, 1, 200);
  const FoveaConfig cfg{4, 160, 1050, 1680};
  const auto layers = build_pyramid(image, {0, 0}, cfg);
  for (const auto& l : layers) {
    // Top-left quadrant lies outside the image, bottom-right inside.
    CHECK(l.raster.at(0, 0) == 0);
    CHECK(l.raster.at(159, 159) == 200);
  }
  CHECK(layers[0].raster.at(79, 79) == 0);
  CHECK(layers[0].raster.at(80, 80) == 200);
}

TEST_CASE("bilinear downsampling preserves constants") {
  for (int v : {0, 1, 127, 254, 255}) {
    Raster image(600, 900, 3, static_cast<std::uint8_t>(v));
    const FoveaConfig cfg{3, 64, 600, 900};
    // Focal point far enough from the border that every layer is in-image.
    for (const auto& l : build_pyramid(image, {450, 300}, cfg)) {
      for (auto s : l.raster.samples()) REQUIRE(s == v);
    }
  }
}

TEST_CASE("remap example") {
  const auto r = remap_bbox({10, 20, 50, 60, Frame::layer(2)}, {840, 525}, 2, 160, 1050, 1680);
  CHECK(r.unclipped.x0 == 700);
  CHECK(r.unclipped.y0 == 405);
  CHECK(r.unclipped.x1 == 780);
  CHECK(r.unclipped.y1 == 485);
  CHECK_FALSE(r.clipped);
  CHECK(r.box == r.unclipped);
}

TEST_CASE("remap at level 1 is a translation") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 160.0);
  for (int i = 0; i < 100; ++i) {
    const Pixel f{400 + i, 500 - i};
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const BBox box{std::min(a, b), std::min(c, d), std::max(a, b), std::max(c, d), Frame::layer(1)};
    const auto r = remap_bbox(box, f, 1, 160, 1050, 1680);
    CHECK(r.box.x0 == box.x0 + (f.x - 80));
    CHECK(r.box.y0 == box.y0 + (f.y - 80));
    CHECK(r.box.x1 == box.x1 + (f.x - 80));
    CHECK(r.box.y1 == box.y1 + (f.y - 80));
  }
}

TEST_CASE("remap of a full outer-layer box is clipped to the image") {
  const Pixel f{100, 100};
  const auto r = remap_bbox({0, 0, 160, 160, Frame::layer(4)}, f, 4, 160, 1050, 1680);
  CHECK(r.unclipped.x0 == 100 - 640);
  CHECK(r.unclipped.y0 == 100 - 640);
  CHECK(r.unclipped.x1 == 100 + 640);
  CHECK(r.unclipped.y1 == 100 + 640);
  CHECK(r.clipped);
  CHECK(r.box == BBox{0, 0, 740, 740, Frame::image()});
}

TEST_CASE("pixel cost") {
  const auto a = pixel_cost({4, 160, 1050, 1680});
  CHECK(a.pixels == 102400);
  CHECK(a.percent == doctest::Approx(5.805).epsilon(1e-4));
  const auto b = pixel_cost({3, 256, 1050, 1680});
  CHECK(b.pixels == 196608);
  CHECK(b.percent == doctest::Approx(11.1456).epsilon(1e-4));
  const auto c = pixel_cost({5, 64, 1050, 1680});
  CHECK(c.pixels == 20480);
  CHECK(c.percent == doctest::Approx(1.161).epsilon(1e-3));
  const auto d = pixel_cost({4, 128, 1050, 1680});
  CHECK(d.pixels == 65536);
  CHECK(d.percent == doctest::Approx(3.715).epsilon(1e-3));
}

TEST_CASE("raster crop and pad") {
  const auto img = gradient_image(10, 12, 2);
  const auto padded = pad_zero(img, 3);
  CHECK(padded.height() == 16);
  CHECK(padded.width() == 18);
  CHECK(padded.at(0, 0, 1) == 0);
  CHECK(padded.at(3, 3, 1) == img.at(0, 0, 1));
  CHECK(padded.at(12, 14, 0) == img.at(9, 11, 0));
  CHECK_THROWS_AS(Raster(2, 2, 1, std::vector<std::uint8_t>(3)), std::invalid_argument);
}
