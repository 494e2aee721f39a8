#pragma once

// Slow, obviously-correct reference implementations used only by tests.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "semba/geometry.hpp"
#include "semba/semantics.hpp"

namespace semba::oracle {

/// Plain recursion, no memo: min over delete / insert / substitute.
inline int edit_distance(const std::vector<std::string>& a, std::size_t i,
                         const std::vector<std::string>& b, std::size_t j) {
  if (i == a.size()) return static_cast<int>(b.size() - j);
  if (j == b.size()) return static_cast<int>(a.size() - i);
  const int sub = edit_distance(a, i + 1, b, j + 1) + (a[i] == b[j] ? 0 : 1);
  const int del = edit_distance(a, i + 1, b, j) + 1;
  const int ins = edit_distance(a, i, b, j + 1) + 1;
  return std::min({sub, del, ins});
}

inline int edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return edit_distance(a, 0, b, 0);
}

/// Enumerates every global alignment (each step: pair, gap in b, gap in a)
/// and returns the best total under match/mismatch/gap scoring.
inline double best_alignment(const std::vector<std::string>& a, std::size_t i,
                             const std::vector<std::string>& b, std::size_t j, double match,
                             double mismatch, double gap) {
  if (i == a.size() && j == b.size()) return 0.0;
  double best = -1e300;
  if (i < a.size() && j < b.size()) {
    best = std::max(best, (a[i] == b[j] ? match : mismatch) +
                              best_alignment(a, i + 1, b, j + 1, match, mismatch, gap));
  }
  if (i < a.size()) best = std::max(best, gap + best_alignment(a, i + 1, b, j, match, mismatch, gap));
  if (j < b.size()) best = std::max(best, gap + best_alignment(a, i, b, j + 1, match, mismatch, gap));
  return best;
}

/// Cells whose rectangle has positive intersection area with the box, by
/// scanning the whole grid.
inline std::vector<Cell> overlapped_cells(const GridGeometry& g, const BBox& box) {
  std::vector<Cell> out;
  for (int y = 0; y < g.rows; ++y) {
    for (int x = 0; x < g.cols; ++x) {
      const double w = static_cast<double>(g.image_width) / g.cols;
      const double h = static_cast<double>(g.image_height) / g.rows;
      const double ix = std::min(box.x1, (x + 1) * w) - std::max(box.x0, x * w);
      const double iy = std::min(box.y1, (y + 1) * h) - std::max(box.y0, y * h);
      if (ix > 0 && iy > 0) out.push_back({x, y});
    }
  }
  return out;
}

/// Argmax over non-inhibited cells comparing cross products, first wins.
inline std::optional<Cell> masked_argmax(const BeliefGrid& g, int k) {
  std::optional<Cell> best;
  double bn = 0, bd = 1;
  for (int y = 0; y < g.rows(); ++y) {
    for (int x = 0; x < g.cols(); ++x) {
      if (g.inhibited({x, y})) continue;
      const auto b = g.beta({x, y});
      double sum = 0;
      for (double v : b) sum += v;
      const double num = b[static_cast<std::size_t>(k)];
      if (!best || num / sum > bn / bd) {
        best = Cell{x, y};
        bn = num;
        bd = sum;
      }
    }
  }
  return best;
}

inline std::vector<std::string> random_tokens(std::mt19937_64& rng, int max_len, int alphabet) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  std::vector<std::string> out(static_cast<std::size_t>(len(rng)));
  for (auto& t : out) t = std::string(1, static_cast<char>('a' + sym(rng)));
  return out;
}

}  // namespace semba::oracle
