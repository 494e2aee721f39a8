#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "semba/geometry.hpp"

namespace semba {

/// The K categories a detector can report, indexed 0..K-1.
class ClassSet {
 public:
  explicit ClassSet(std::vector<std::string> labels);

  /// The 80 COCO detection categories.
  static const ClassSet& coco();

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int k) const { return labels_.at(static_cast<std::size_t>(k)); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> find(const std::string& label) const;
  /// Throws std::out_of_range for unknown labels.
  int index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

/// Y x X lattice over an image; cells are image_width/X by image_height/Y.
struct GridGeometry {
  int rows = 20;  // Y
  int cols = 32;  // X
  int image_height = 1050;
  int image_width = 1680;

  void validate() const;
  double cell_width() const { return static_cast<double>(image_width) / cols; }
  double cell_height() const { return static_cast<double>(image_height) / rows; }
  BBox cell_rect(Cell c) const;
  bool contains(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < cols && c.y < rows; }
  /// Cell whose rectangle holds the pixel (half-open on the far edges).
  Cell cell_of(Pixel p) const;
  /// Floor of the real-valued cell center.
  Pixel cell_center(Cell c) const;
  int cell_count() const { return rows * cols; }
};

/// Search ran out of non-inhibited cells.
class SearchExhausted : public std::runtime_error {
 public:
  SearchExhausted() : std::runtime_error("every cell is inhibited") {}
};

/// Per-cell Dirichlet parameters plus the inhibition-of-return mask.
class BeliefGrid {
 public:
  BeliefGrid(int rows, int cols, int classes);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int classes() const { return classes_; }

  std::span<const double> beta(Cell c) const;
  std::span<double> beta(Cell c);
  const std::vector<double>& all_beta() const { return beta_; }

  bool inhibited(Cell c) const { return ior_[offset(c)] != 0; }
  void inhibit(Cell c) { ior_[offset(c)] = 1; }
  const std::vector<unsigned char>& ior_mask() const { return ior_; }
  int inhibited_count() const;

  /// Detections ignored because their box had zero area.
  int zero_area_warnings() const { return zero_area_warnings_; }
  void note_zero_area() { ++zero_area_warnings_; }

 private:
  std::size_t offset(Cell c) const;

  int rows_;
  int cols_;
  int classes_;
  std::vector<double> beta_;
  std::vector<unsigned char> ior_;
  int zero_area_warnings_ = 0;
};

/// Flat prior: every beta is 1, nothing inhibited.
BeliefGrid init_beliefs(const GridGeometry& geom, const ClassSet& classes);

/// Kaplan's subjective-logic fusion of an unnormalized score vector into
/// Dirichlet parameters:
///   beta'_k = beta_k (1 + s_k / D) / (1 + min_i s_i / D),  D = sum_j beta_j s_j.
/// Throws std::invalid_argument on size mismatch, negative scores, or an
/// all-zero score vector.
std::vector<double> kaplan_update(std::span<const double> beta,
                                  std::span<const double> scores);

/// Applies kaplan_update in place to every cell whose rectangle overlaps the
/// image-frame box by more than `min_fraction` of the cell area (0 means any
/// strictly positive intersection). Returns the number of cells updated.
int deposit_detection(BeliefGrid& grid, const BBox& box,
                      std::span<const double> scores, const GridGeometry& geom,
                      double min_fraction = 0.0);

/// E[C = k | beta] for one cell.
double expectation(const BeliefGrid& grid, Cell c, int k);

/// Highest-expectation non-inhibited cell for class k; ties go to the first
/// cell in row-major order. Throws SearchExhausted when nothing is left.
Cell select_gaze(const BeliefGrid& grid, int k);

/// Inhibits the 3x3 block around `c`, clipped at the grid border.
void apply_ior(BeliefGrid& grid, Cell c);

}  // namespace semba
