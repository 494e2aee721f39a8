#pragma once

// Scanpath comparison: Sequence Score (Needleman-Wunsch), Fixation Edit
// Distance (Levenshtein), their semantic-label variants, cumulative search
// performance and pairwise human consistency.

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "semba/search.hpp"
#include "semba/semantics.hpp"

namespace semba {

inline constexpr int kDefaultTruncation = 6;

/// Ordered fixation tokens with f0 already removed.
struct FixSequence {
  std::vector<std::string> tokens;
  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  friend bool operator==(const FixSequence&, const FixSequence&) = default;
};

/// Grid-cell tokens ("y*X + x") of the post-f0 fixations, truncated.
FixSequence tokenize_spatial(const Scanpath& path, const GridGeometry& geom,
                             int max_len = kDefaultTruncation);
/// Fixated-object labels of the post-f0 fixations, truncated.
FixSequence tokenize_semantic(const Scanpath& path, int max_len = kDefaultTruncation);

/// Levenshtein distance with unit costs.
int edit_distance(const FixSequence& a, const FixSequence& b);

struct AlignmentScoring {
  enum class Normalization { kMaxLength, kSumLength };
  double match = 1.0;
  double mismatch = 0.0;
  double gap = 0.0;
  Normalization normalization = Normalization::kMaxLength;
};

/// Raw Needleman-Wunsch global alignment score.
double alignment_score(const FixSequence& a, const FixSequence& b,
                       const AlignmentScoring& scoring = {});

/// Alignment score scaled to [0, 1]: raw / (match * max(|a|, |b|)), or
/// 2 raw / (match * (|a| + |b|)) for kSumLength. Two empty sequences score 1.
double sequence_score(const FixSequence& a, const FixSequence& b,
                      const AlignmentScoring& scoring = {});

/// ratio[t] = fraction of paths whose target was found at fixation <= t,
/// for t = 0..max_budget.
std::vector<double> cumulative_performance(std::span<const Scanpath> paths,
                                           int max_budget = kDefaultTruncation);

struct PairMetrics {
  double ss = 0.0;
  double fed = 0.0;
  double semss = 0.0;
  double semfed = 0.0;
};

PairMetrics compare_scanpaths(const Scanpath& a, const Scanpath& b, const GridGeometry& geom,
                              const AlignmentScoring& scoring = {},
                              int max_len = kDefaultTruncation);

struct MetricsSummary {
  PairMetrics mean;
  long n_pairs = 0;
  int scenes = 0;
  int excluded_scenes = 0;
};

using ScanpathsByScene = std::map<std::string, std::vector<Scanpath>>;

/// Each metric averaged over every unordered subject pair of a scene, then
/// over scenes. Scenes with fewer than two paths are excluded and counted.
MetricsSummary human_consistency(const ScanpathsByScene& paths, const GridGeometry& geom,
                                 const AlignmentScoring& scoring = {},
                                 int max_len = kDefaultTruncation);

/// Model path compared with every reference path of the same scene, averaged
/// per scene, then over scenes. Scenes present on one side only are excluded.
MetricsSummary model_vs_reference(const ScanpathsByScene& model,
                                  const ScanpathsByScene& reference, const GridGeometry& geom,
                                  const AlignmentScoring& scoring = {},
                                  int max_len = kDefaultTruncation);

/// CSV with header `metric,mean,n_pairs`.
void write_metrics_csv(const std::filesystem::path& path, const MetricsSummary& summary);
/// CSV with header `t,ratio`.
void write_cumulative_csv(const std::filesystem::path& path, std::span<const double> ratios);

}  // namespace semba
