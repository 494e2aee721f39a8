#include "semba/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace semba {

namespace {

template <typename Token>
FixSequence truncated(const Scanpath& path, int max_len, Token&& token) {
  FixSequence seq;
  const std::size_t limit = std::min(path.fixations.size(),
                                     static_cast<std::size_t>(max_len) + 1);
  for (std::size_t i = 1; i < limit; ++i) seq.tokens.push_back(token(path.fixations[i]));
  return seq;
}

}  // namespace

FixSequence tokenize_spatial(const Scanpath& path, const GridGeometry& geom, int max_len) {
  return truncated(path, max_len, [&](const Fixation& f) {
    const Cell c = geom.cell_of(f.px);
    return std::to_string(c.y * geom.cols + c.x);
  });
}

FixSequence tokenize_semantic(const Scanpath& path, int max_len) {
  return truncated(path, max_len, [](const Fixation& f) {
    return f.label.empty() ? std::string("background") : f.label;
  });
}

int edit_distance(const FixSequence& a, const FixSequence& b) {
  const auto& s = a.tokens;
  const auto& t = b.tokens;
  std::vector<int> row(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) row[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= s.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const int up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (s[i - 1] == t[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[t.size()];
}

double alignment_score(const FixSequence& a, const FixSequence& b,
                       const AlignmentScoring& scoring) {
  const auto& s = a.tokens;
  const auto& t = b.tokens;
  std::vector<double> row(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) row[j] = scoring.gap * static_cast<double>(j);
  for (std::size_t i = 1; i <= s.size(); ++i) {
    double diag = row[0];
    row[0] = scoring.gap * static_cast<double>(i);
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const double up = row[j];
      const double sub = diag + (s[i - 1] == t[j - 1] ? scoring.match : scoring.mismatch);
      row[j] = std::max({sub, up + scoring.gap, row[j - 1] + scoring.gap});
      diag = up;
    }
  }
  return row[t.size()];
}

double sequence_score(const FixSequence& a, const FixSequence& b,
                      const AlignmentScoring& scoring) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const double raw = alignment_score(a, b, scoring);
  const double norm =
      scoring.normalization == AlignmentScoring::Normalization::kMaxLength
          ? static_cast<double>(std::max(a.size(), b.size()))
          : 0.5 * static_cast<double>(a.size() + b.size());
  return raw / (norm * scoring.match);
}

std::vector<double> cumulative_performance(std::span<const Scanpath> paths, int max_budget) {
  if (paths.empty()) throw std::invalid_argument("cumulative performance needs paths");
  if (max_budget < 0) throw std::invalid_argument("max_budget must be >= 0");
  std::vector<long> hits(static_cast<std::size_t>(max_budget) + 1, 0);
  for (const auto& p : paths) {
    if (!p.found || !p.found_at || *p.found_at > max_budget) continue;
    for (int t = *p.found_at; t <= max_budget; ++t) ++hits[static_cast<std::size_t>(t)];
  }
  std::vector<double> ratio(hits.size());
  for (std::size_t t = 0; t < hits.size(); ++t) {
    ratio[t] = static_cast<double>(hits[t]) / static_cast<double>(paths.size());
  }
  return ratio;
}

PairMetrics compare_scanpaths(const Scanpath& a, const Scanpath& b, const GridGeometry& geom,
                              const AlignmentScoring& scoring, int max_len) {
  const auto sa = tokenize_spatial(a, geom, max_len);
  const auto sb = tokenize_spatial(b, geom, max_len);
  const auto la = tokenize_semantic(a, max_len);
  const auto lb = tokenize_semantic(b, max_len);
  return {sequence_score(sa, sb, scoring), static_cast<double>(edit_distance(sa, sb)),
          sequence_score(la, lb, scoring), static_cast<double>(edit_distance(la, lb))};
}

namespace {

struct Accumulator {
  PairMetrics sum;
  long n = 0;

  void add(const PairMetrics& m) {
    sum.ss += m.ss;
    sum.fed += m.fed;
    sum.semss += m.semss;
    sum.semfed += m.semfed;
    ++n;
  }
  PairMetrics mean() const {
    if (n == 0) return {};
    const double d = static_cast<double>(n);
    return {sum.ss / d, sum.fed / d, sum.semss / d, sum.semfed / d};
  }
};

}  // namespace

MetricsSummary human_consistency(const ScanpathsByScene& paths, const GridGeometry& geom,
                                 const AlignmentScoring& scoring, int max_len) {
  MetricsSummary out;
  Accumulator scenes;
  for (const auto& [scene, subjects] : paths) {
    if (subjects.size() < 2) {
      ++out.excluded_scenes;
      continue;
    }
    Accumulator pairs;
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      for (std::size_t j = i + 1; j < subjects.size(); ++j) {
        pairs.add(compare_scanpaths(subjects[i], subjects[j], geom, scoring, max_len));
      }
    }
    out.n_pairs += pairs.n;
    scenes.add(pairs.mean());
  }
  out.scenes = static_cast<int>(scenes.n);
  out.mean = scenes.mean();
  return out;
}

MetricsSummary model_vs_reference(const ScanpathsByScene& model,
                                  const ScanpathsByScene& reference, const GridGeometry& geom,
                                  const AlignmentScoring& scoring, int max_len) {
  MetricsSummary out;
  Accumulator scenes;
  for (const auto& [scene, ours] : model) {
    const auto it = reference.find(scene);
    if (it == reference.end() || it->second.empty() || ours.empty()) {
      ++out.excluded_scenes;
      continue;
    }
    Accumulator pairs;
    for (const auto& m : ours) {
      for (const auto& r : it->second) pairs.add(compare_scanpaths(m, r, geom, scoring, max_len));
    }
    out.n_pairs += pairs.n;
    scenes.add(pairs.mean());
  }
  for (const auto& [scene, refs] : reference) {
    if (!model.contains(scene)) ++out.excluded_scenes;
  }
  out.scenes = static_cast<int>(scenes.n);
  out.mean = scenes.mean();
  return out;
}

void write_metrics_csv(const std::filesystem::path& path, const MetricsSummary& summary) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(6) << std::fixed;
  os << "metric,mean,n_pairs\n";
  os << "SS," << summary.mean.ss << ',' << summary.n_pairs << '\n';
  os << "FED," << summary.mean.fed << ',' << summary.n_pairs << '\n';
  os << "SemSS," << summary.mean.semss << ',' << summary.n_pairs << '\n';
  os << "SemFED," << summary.mean.semfed << ',' << summary.n_pairs << '\n';
}

void write_cumulative_csv(const std::filesystem::path& path, std::span<const double> ratios) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(6) << std::fixed;
  os << "t,ratio\n";
  for (std::size_t t = 0; t < ratios.size(); ++t) os << t << ',' << ratios[t] << '\n';
}

}  // namespace semba
