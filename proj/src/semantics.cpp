#include "semba/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace semba {

ClassSet::ClassSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) throw std::invalid_argument("a class set needs K >= 2 labels");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], static_cast<int>(i)).second) {
      throw std::invalid_argument("duplicate class label: " + labels_[i]);
    }
  }
}

const ClassSet& ClassSet::coco() {
  static const ClassSet set({
      "person",        "bicycle",      "car",           "motorcycle",    "airplane",
      "bus",           "train",        "truck",         "boat",          "traffic light",
      "fire hydrant",  "stop sign",    "parking meter", "bench",         "bird",
      "cat",           "dog",          "horse",         "sheep",         "cow",
      "elephant",      "bear",         "zebra",         "giraffe",       "backpack",
      "umbrella",      "handbag",      "tie",           "suitcase",      "frisbee",
      "skis",          "snowboard",    "sports ball",   "kite",          "baseball bat",
      "baseball glove", "skateboard",  "surfboard",     "tennis racket", "bottle",
      "wine glass",    "cup",          "fork",          "knife",         "spoon",
      "bowl",          "banana",       "apple",         "sandwich",      "orange",
      "broccoli",      "carrot",       "hot dog",       "pizza",         "donut",
      "cake",          "chair",        "couch",         "potted plant",  "bed",
      "dining table",  "toilet",       "tv",            "laptop",        "mouse",
      "remote",        "keyboard",     "cell phone",    "microwave",     "oven",
      "toaster",       "sink",         "refrigerator",  "book",          "clock",
      "vase",          "scissors",     "teddy bear",    "hair drier",    "toothbrush",
  });
  return set;
}

std::optional<int> ClassSet::find(const std::string& label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int ClassSet::index_of(const std::string& label) const {
  const auto k = find(label);
  if (!k) throw std::out_of_range("unknown class label: " + label);
  return *k;
}

void GridGeometry::validate() const {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid needs at least one cell");
  if (image_height < 1 || image_width < 1) {
    throw std::invalid_argument("grid image dimensions must be positive");
  }
}

BBox GridGeometry::cell_rect(Cell c) const {
  const double w = cell_width();
  const double h = cell_height();
  return {c.x * w, c.y * h, (c.x + 1) * w, (c.y + 1) * h, Frame::image()};
}

Cell GridGeometry::cell_of(Pixel p) const {
  const int x = static_cast<int>(std::floor(p.x / cell_width()));
  const int y = static_cast<int>(std::floor(p.y / cell_height()));
  return {std::clamp(x, 0, cols - 1), std::clamp(y, 0, rows - 1)};
}

Pixel GridGeometry::cell_center(Cell c) const {
  return {static_cast<int>(std::floor((c.x + 0.5) * cell_width())),
          static_cast<int>(std::floor((c.y + 0.5) * cell_height()))};
}

BeliefGrid::BeliefGrid(int rows, int cols, int classes)
    : rows_(rows), cols_(cols), classes_(classes) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("belief grid needs cells");
  if (classes < 2) throw std::invalid_argument("belief grid needs K >= 2");
  beta_.assign(static_cast<std::size_t>(rows) * cols * classes, 1.0);
  ior_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

std::size_t BeliefGrid::offset(Cell c) const {
  if (c.x < 0 || c.y < 0 || c.x >= cols_ || c.y >= rows_) {
    throw std::out_of_range("cell outside the belief grid");
  }
  return static_cast<std::size_t>(c.y) * cols_ + c.x;
}

std::span<const double> BeliefGrid::beta(Cell c) const {
  return std::span<const double>(beta_).subspan(offset(c) * classes_, classes_);
}

std::span<double> BeliefGrid::beta(Cell c) {
  return std::span<double>(beta_).subspan(offset(c) * classes_, classes_);
}

int BeliefGrid::inhibited_count() const {
  return static_cast<int>(std::count(ior_.begin(), ior_.end(), 1));
}

BeliefGrid init_beliefs(const GridGeometry& geom, const ClassSet& classes) {
  geom.validate();
  return BeliefGrid(geom.rows, geom.cols, classes.size());
}

std::vector<double> kaplan_update(std::span<const double> beta,
                                  std::span<const double> scores) {
  if (beta.size() != scores.size()) {
    throw std::invalid_argument("belief and score vectors differ in length");
  }
  double weighted = 0.0;
  double min_score = scores.empty() ? 0.0 : scores[0];
  bool any_positive = false;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (!(scores[j] >= 0.0) || !std::isfinite(scores[j])) {
      throw std::invalid_argument("scores must be finite and non-negative");
    }
    any_positive = any_positive || scores[j] > 0.0;
    min_score = std::min(min_score, scores[j]);
    weighted += beta[j] * scores[j];
  }
  if (!any_positive) throw std::invalid_argument("score vector is all zeros");

  // (1 + s_k/D) / (1 + m/D) == (D + s_k) / (D + m); the second form leaves
  // beta bit-identical when every score is equal.
  std::vector<double> out(beta.size());
  const double denom = weighted + min_score;
  for (std::size_t k = 0; k < beta.size(); ++k) {
    out[k] = beta[k] * ((weighted + scores[k]) / denom);
  }
  return out;
}

int deposit_detection(BeliefGrid& grid, const BBox& box,
                      std::span<const double> scores, const GridGeometry& geom,
                      double min_fraction) {
  if (box.area() <= 0.0) {
    grid.note_zero_area();
    return 0;
  }
  const double cw = geom.cell_width();
  const double ch = geom.cell_height();
  // Candidate range, widened by one so boundary rounding never drops a cell.
  const int x_lo = std::max(0, static_cast<int>(std::floor(box.x0 / cw)) - 1);
  const int x_hi = std::min(geom.cols - 1, static_cast<int>(std::floor(box.x1 / cw)) + 1);
  const int y_lo = std::max(0, static_cast<int>(std::floor(box.y0 / ch)) - 1);
  const int y_hi = std::min(geom.rows - 1, static_cast<int>(std::floor(box.y1 / ch)) + 1);

  int updated = 0;
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const Cell c{x, y};
      const BBox rect = geom.cell_rect(c);
      const double overlap = intersection_area(rect, box);
      if (overlap <= 0.0) continue;
      if (min_fraction > 0.0 && overlap < min_fraction * rect.area()) continue;
      auto b = grid.beta(c);
      const auto next = kaplan_update(b, scores);
      std::copy(next.begin(), next.end(), b.begin());
      ++updated;
    }
  }
  return updated;
}

double expectation(const BeliefGrid& grid, Cell c, int k) {
  const auto b = grid.beta(c);
  if (k < 0 || k >= grid.classes()) throw std::out_of_range("class index out of range");
  return b[static_cast<std::size_t>(k)] / std::accumulate(b.begin(), b.end(), 0.0);
}

Cell select_gaze(const BeliefGrid& grid, int k) {
  std::optional<Cell> best;
  double best_value = 0.0;
  for (int y = 0; y < grid.rows(); ++y) {
    for (int x = 0; x < grid.cols(); ++x) {
      const Cell c{x, y};
      if (grid.inhibited(c)) continue;
      const double v = expectation(grid, c, k);
      if (!best || v > best_value) {
        best = c;
        best_value = v;
      }
    }
  }
  if (!best) throw SearchExhausted();
  return *best;
}

void apply_ior(BeliefGrid& grid, Cell c) {
  if (c.x < 0 || c.y < 0 || c.x >= grid.cols() || c.y >= grid.rows()) {
    throw std::out_of_range("IOR cell outside the grid");
  }
  for (int y = std::max(0, c.y - 1); y <= std::min(grid.rows() - 1, c.y + 1); ++y) {
    for (int x = std::max(0, c.x - 1); x <= std::min(grid.cols() - 1, c.x + 1); ++x) {
      grid.inhibit({x, y});
    }
  }
}

}  // namespace semba
