// semba: foveate images, run visual-search episodes, evaluate scanpaths.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semba/bridge.hpp"
#include "semba/io.hpp"
#include "semba/metrics.hpp"
#include "semba/runner.hpp"

namespace fs = std::filesystem;
using namespace semba;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitPartial = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_pair(const std::string& text, char sep, const char* what) {
  const auto pos = text.find(sep);
  try {
    if (pos == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const int a = std::stoi(text.substr(0, pos), &used);
    if (used != pos) throw std::invalid_argument(text);
    const std::string rest = text.substr(pos + 1);
    const int b = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::exception&) {
    throw InputError(std::string("cannot parse ") + what + " '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct FoveaChoice {
  std::string preset;
  int levels = 0;
  int base = 0;
};

// Resolves --preset (possibly a comma list) or explicit --levels/--base.
std::vector<FoveaPreset> resolve_fovea(const FoveaChoice& c) {
  std::vector<FoveaPreset> out;
  if (c.levels > 0 || c.base > 0) {
    if (c.levels <= 0 || c.base <= 0) {
      throw InputError("--levels and --base must be given together");
    }
    out.push_back({std::to_string(c.levels) + "x" + std::to_string(c.base), c.levels, c.base});
    return out;
  }
  const auto names = split(c.preset.empty() ? std::string("4x160") : c.preset, ',');
  for (const auto& name : names) {
    if (name == "all") {
      for (const auto& p : fovea_presets()) out.push_back(p);
      continue;
    }
    const auto p = find_preset(name);
    if (!p) throw InputError("unknown preset '" + name + "' (5x64, 4x128, 4x160, 3x256, all)");
    out.push_back(*p);
  }
  return out;
}

// ---------------------------------------------------------------- foveate

struct FoveateArgs {
  std::string image;
  std::string focal;
  std::string out = "layers";
  FoveaChoice fovea;
};

int cmd_foveate(const FoveateArgs& a) {
  const auto presets = resolve_fovea(a.fovea);
  if (presets.size() != 1) throw InputError("foveate takes exactly one fovea configuration");
  Raster image;
  try {
    image = read_png(a.image);
  } catch (const ImageIoError& e) {
    throw InputError(e.what());
  }
  FoveaConfig cfg{presets[0].levels, presets[0].base_side, image.height(), image.width()};
  Pixel focal{image.width() / 2, image.height() / 2};
  if (!a.focal.empty()) {
    const auto [x, y] = parse_pair(a.focal, ',', "focal point");
    focal = {x, y};
  }
  std::vector<Layer> layers;
  try {
    cfg.validate();
    layers = build_pyramid(image, focal, cfg);
  } catch (const std::logic_error& e) {
    throw InputError(e.what());
  }
  write_layers(a.out, focal, cfg, layers);
  const auto cost = pixel_cost(cfg);
  std::printf("wrote %zu layers of %dx%d to %s (%lld px, %.3f%% of the image)\n",
              layers.size(), cfg.base_side, cfg.base_side, a.out.c_str(),
              static_cast<long long>(cost.pixels), cost.percent);
  return kExitOk;
}

// ----------------------------------------------------------------- search

struct SearchArgs {
  std::string scenes;
  std::string out = "runs";
  FoveaChoice fovea;
  std::string grid = "20x32";
  int max_fix = 6;
  double threshold = 0.01;
  std::uint64_t seed = 0;
  std::string detector = "sim";
  std::string bridge_dir;
  int bridge_timeout_s = 120;
  bool trace = false;
  int jobs = 1;
  std::string stop = "oracle";
  double tau = 0.5;
  double min_overlap = 0.0;
  std::string policy = "greedy";
  DetectorModel model;
};

std::string fmt_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

int cmd_search(const SearchArgs& a) {
  const ClassSet& classes = ClassSet::coco();
  const auto presets = resolve_fovea(a.fovea);
  const auto [rows, cols] = parse_pair(a.grid, 'x', "grid (YxX)");
  if (a.detector != "sim" && a.detector != "bridge") {
    throw InputError("--detector must be sim or bridge");
  }
  if (a.detector == "bridge" && a.bridge_dir.empty()) {
    throw InputError("--detector bridge needs --bridge-dir");
  }

  SceneDirectory dir;
  try {
    dir = load_scene_dir(a.scenes, classes);
  } catch (const FormatError& e) {
    throw InputError(e.what());
  }
  for (const auto& err : dir.errors) std::fprintf(stderr, "skipped %s\n", err.c_str());
  if (dir.scenes.empty()) throw InputError("no valid scenes in " + a.scenes);

  DetectorModel model = a.model;
  model.rng_seed = a.seed;
  fs::create_directories(a.out);

  for (const auto& preset : presets) {
    EpisodeConfig cfg;
    cfg.max_fixations = a.max_fix;
    cfg.fovea.levels = preset.levels;
    cfg.fovea.base_side = preset.base_side;
    cfg.grid.rows = rows;
    cfg.grid.cols = cols;
    cfg.threshold = a.threshold;
    cfg.stop_rule = a.stop == "confidence" ? StopRule::kConfidence : StopRule::kOracle;
    cfg.confidence_tau = a.tau;
    cfg.min_overlap_fraction = a.min_overlap;
    cfg.policy = a.policy == "random" ? GazePolicy::kUniformRandom : GazePolicy::kGreedy;
    cfg.policy_seed = a.seed;
    try {
      cfg.validate();
      model.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }

    SourceFactory factory;
    if (a.detector == "bridge") {
      const int jobs = a.jobs;
      if (jobs != 1) std::fprintf(stderr, "bridge detector runs single-worker\n");
      factory = [&] {
        return std::make_unique<BridgeDetector>(a.bridge_dir, classes,
                                                std::chrono::seconds(a.bridge_timeout_s));
      };
    } else {
      factory = [&] { return std::make_unique<SimulatedDetector>(model, classes); };
    }

    const fs::path trace_dir = fs::path(a.out) / ("trace_" + preset.name);
    std::vector<std::vector<std::string>> traces(a.trace ? dir.scenes.size() : 0);
    std::function<void(std::size_t, int, const Fixation&, const BeliefGrid&)> observer;
    if (a.trace) {
      observer = [&](std::size_t i, int t, const Fixation& f, const BeliefGrid& g) {
        Json line{{"t", t},
                  {"px", Json::array({f.px.x, f.px.y})},
                  {"cell", Json::array({f.cell.x, f.cell.y})},
                  {"beliefs", belief_snapshot(g)}};
        traces[i].push_back(line.dump());
      };
    }

    std::vector<Episode> episodes;
    try {
      episodes = run_batch(dir.scenes, cfg, classes, factory,
                           a.detector == "bridge" ? 1 : a.jobs, observer);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }

    std::vector<Scanpath> paths;
    for (auto& e : episodes) paths.push_back(std::move(e.scanpath));
    write_scanpaths(fs::path(a.out) / ("scanpaths_" + preset.name + ".jsonl"), paths);
    const auto curve = cumulative_performance(paths, cfg.max_fixations);
    write_cumulative_csv(fs::path(a.out) / ("cumulative_" + preset.name + ".csv"), curve);

    if (a.trace) {
      fs::create_directories(trace_dir);
      for (std::size_t i = 0; i < dir.scenes.size(); ++i) {
        std::ofstream os(trace_dir / (dir.scenes[i].scene_id + ".jsonl"), std::ios::binary);
        for (const auto& l : traces[i]) os << l << '\n';
      }
    }

    int found = 0;
    for (const auto& p : paths) found += p.found ? 1 : 0;
    const double rate = static_cast<double>(found) / static_cast<double>(paths.size());
    const auto cost = pixel_cost({preset.levels, preset.base_side, dir.scenes[0].height,
                                  dir.scenes[0].width});
    Json summary{{"preset", preset.name},
                 {"levels", preset.levels},
                 {"base_side", preset.base_side},
                 {"pixel_cost", {{"pixels", cost.pixels}, {"percent", fmt_percent(cost.percent)}}},
                 {"seed", a.seed},
                 {"scenes", paths.size()},
                 {"skipped", dir.errors.size()},
                 {"found", found},
                 {"found_rate", rate},
                 {"cumulative", curve}};
    write_json_file(fs::path(a.out) / ("summary_" + preset.name + ".json"), summary);
    std::printf("%-6s pixels %7lld (%s%%)  found %d/%zu (%.1f%%)\n", preset.name.c_str(),
                static_cast<long long>(cost.pixels), fmt_percent(cost.percent).c_str(), found,
                paths.size(), 100.0 * rate);
  }
  if (!dir.errors.empty()) {
    std::printf("%zu scene file(s) skipped\n", dir.errors.size());
    return kExitPartial;
  }
  return kExitOk;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  std::string model;
  std::string reference;
  std::string out = "eval";
  bool consistency = false;
  std::string grid = "20x32";
  std::string image_size = "1680x1050";
  std::string normalization = "max";
  int truncate = kDefaultTruncation;
};

ScanpathsByScene group(const std::vector<Scanpath>& paths) {
  ScanpathsByScene out;
  for (const auto& p : paths) out[p.scene_id].push_back(p);
  return out;
}

void print_summary(const char* title, const MetricsSummary& s) {
  std::printf("%s: SS %.4f  FED %.4f  SemSS %.4f  SemFED %.4f  (%d scenes, %ld pairs, %d excluded)\n",
              title, s.mean.ss, s.mean.fed, s.mean.semss, s.mean.semfed, s.scenes, s.n_pairs,
              s.excluded_scenes);
}

int cmd_eval(const EvalArgs& a) {
  const auto [rows, cols] = parse_pair(a.grid, 'x', "grid (YxX)");
  const auto [width, height] = parse_pair(a.image_size, 'x', "image size (WxH)");
  GridGeometry geom{rows, cols, height, width};
  try {
    geom.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  AlignmentScoring scoring;
  if (a.normalization == "sum") {
    scoring.normalization = AlignmentScoring::Normalization::kSumLength;
  } else if (a.normalization != "max") {
    throw InputError("--normalization must be max or sum");
  }

  auto read = [](const std::string& path) {
    try {
      return read_scanpaths(path);
    } catch (const FormatError& e) {
      throw InputError(e.what());
    }
  };
  fs::create_directories(a.out);
  int warnings = 0;

  if (a.consistency) {
    const std::string& src = a.reference.empty() ? a.model : a.reference;
    if (src.empty()) throw InputError("--consistency needs --reference");
    const auto summary = human_consistency(group(read(src)), geom, scoring, a.truncate);
    write_metrics_csv(fs::path(a.out) / "consistency.csv", summary);
    print_summary("consistency", summary);
    warnings = summary.excluded_scenes;
  } else {
    if (a.model.empty() || a.reference.empty()) {
      throw InputError("eval needs --model and --reference");
    }
    const auto model = read(a.model);
    const auto summary =
        model_vs_reference(group(model), group(read(a.reference)), geom, scoring, a.truncate);
    write_metrics_csv(fs::path(a.out) / "metrics.csv", summary);
    if (!model.empty()) {
      write_cumulative_csv(fs::path(a.out) / "cumulative.csv",
                           cumulative_performance(model, a.truncate));
    }
    print_summary("model vs reference", summary);
    warnings = summary.excluded_scenes;
  }
  if (warnings > 0) std::fprintf(stderr, "warning: %d scene(s) excluded\n", warnings);
  return kExitOk;
}

// ----------------------------------------------------------------- report

struct ReportArgs {
  std::string out = "report";
  std::string image_size = "1680x1050";
};

int cmd_report(const ReportArgs& a) {
  const auto [width, height] = parse_pair(a.image_size, 'x', "image size (WxH)");
  fs::create_directories(a.out);
  std::ofstream csv(fs::path(a.out) / "pixel_cost.csv");
  csv << "preset,levels,base_side,pixels,percent,published_percent\n";
  // Values printed in the published cost table, for side-by-side comparison.
  const std::map<std::string, std::string> published{
      {"5x64", "0.01"}, {"4x128", "3.72"}, {"4x160", "5.80"}, {"3x256", "11.1"}};
  std::printf("%-6s %7s %9s %10s\n", "preset", "pixels", "percent", "published");
  for (const auto& p : fovea_presets()) {
    FoveaConfig cfg{p.levels, p.base_side, height, width};
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw InputError(p.name + ": " + e.what());
    }
    const auto cost = pixel_cost(cfg);
    csv << p.name << ',' << p.levels << ',' << p.base_side << ',' << cost.pixels << ','
        << fmt_percent(cost.percent) << ',' << published.at(p.name) << '\n';
    std::printf("%-6s %7lld %8s%% %9s%%\n", p.name.c_str(), static_cast<long long>(cost.pixels),
                fmt_percent(cost.percent).c_str(), published.at(p.name).c_str());
  }
  std::printf("note: 5x64 is N*l1^2/(H*W) = 1.161%%; the published 0.01%% does not follow "
              "from the formula.\n");
  return kExitOk;
}

// ----------------------------------------------------------------- scenes

struct ScenesArgs {
  std::string out = "scenes";
  int count = 10;
  std::uint64_t seed = 0;
  std::string image_size = "1680x1050";
  SceneGenParams params;
};

int cmd_scenes(const ScenesArgs& a) {
  const auto [width, height] = parse_pair(a.image_size, 'x', "image size (WxH)");
  if (a.count < 1) throw InputError("--count must be positive");
  fs::create_directories(a.out);
  SceneGenParams params = a.params;
  params.width = width;
  params.height = height;
  for (int i = 0; i < a.count; ++i) {
    const auto scene = generate_scene(a.seed, i, ClassSet::coco(), params);
    save_scene(fs::path(a.out) / (scene.scene_id + ".json"), scene);
  }
  std::printf("wrote %d scenes to %s\n", a.count, a.out.c_str());
  return kExitOk;
}

void add_fovea_flags(CLI::App* app, FoveaChoice& f) {
  app->add_option("--preset", f.preset,
                  "fovea preset: 5x64, 4x128, 4x160, 3x256, all, or a comma list");
  app->add_option("--levels", f.levels, "number of pyramid levels N");
  app->add_option("--base", f.base, "base layer side l1 in pixels (even)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-based visual search with a multi-scale fovea"};
  app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
  app.require_subcommand(1);

  FoveateArgs foveate;
  auto* fov = app.add_subcommand("foveate", "write the pyramid layers of one image");
  fov->add_option("--image", foveate.image, "input PNG")->required();
  fov->add_option("--focal", foveate.focal, "focal point x,y (default: image centre)");
  fov->add_option("--out", foveate.out, "output directory");
  add_fovea_flags(fov, foveate.fovea);

  SearchArgs search;
  auto* srch = app.add_subcommand("search", "run one search episode per scene");
  srch->add_option("--scenes", search.scenes, "directory of scene JSON files")->required();
  srch->add_option("--out", search.out, "output directory");
  add_fovea_flags(srch, search.fovea);
  srch->add_option("--grid", search.grid, "belief grid as YxX");
  srch->add_option("--max-fix", search.max_fix, "fixation budget after f0");
  srch->add_option("--threshold", search.threshold, "detection confidence threshold");
  srch->add_option("--seed", search.seed, "seed for every random stream");
  srch->add_option("--detector", search.detector, "sim or bridge");
  srch->add_option("--bridge-dir", search.bridge_dir, "bridge work directory");
  srch->add_option("--bridge-timeout", search.bridge_timeout_s, "seconds to wait per fixation");
  srch->add_flag("--trace", search.trace, "write per-fixation belief snapshots");
  srch->add_option("--jobs", search.jobs, "parallel workers");
  srch->add_option("--stop", search.stop, "oracle or confidence");
  srch->add_option("--tau", search.tau, "confidence stopping threshold");
  srch->add_option("--min-overlap", search.min_overlap, "minimum cell overlap fraction");
  srch->add_option("--policy", search.policy, "greedy or random (baseline)");
  srch->add_option("--tp-base", search.model.true_positive_base, "sim: detection probability at scale 1");
  srch->add_option("--degradation", search.model.degradation_exponent, "sim: decay exponent per level");
  srch->add_option("--min-visible", search.model.min_visible_area, "sim: visibility floor (layer px^2)");
  srch->add_option("--fp-rate", search.model.false_positive_rate, "sim: false positives per layer");
  srch->add_option("--concentration", search.model.score_concentration, "sim: true/distractor score ratio");
  srch->add_option("--duplicates", search.model.duplicates_per_object, "sim: detections per object");

  EvalArgs eval;
  auto* ev = app.add_subcommand("eval", "compare scanpaths with reference scanpaths");
  ev->add_option("--model", eval.model, "model scanpath JSONL");
  ev->add_option("--reference", eval.reference, "reference scanpath JSONL");
  ev->add_option("--out", eval.out, "output directory");
  ev->add_flag("--consistency", eval.consistency, "pairwise consistency of the reference set");
  ev->add_option("--grid", eval.grid, "cluster grid as YxX");
  ev->add_option("--image-size", eval.image_size, "image size WxH");
  ev->add_option("--normalization", eval.normalization, "sequence score normalization: max or sum");
  ev->add_option("--truncate", eval.truncate, "fixations kept after f0");

  ReportArgs report;
  auto* rep = app.add_subcommand("report", "pixel cost of the fovea presets");
  rep->add_option("--out", report.out, "output directory");
  rep->add_option("--image-size", report.image_size, "image size WxH");

  ScenesArgs scenes;
  auto* gen = app.add_subcommand("scenes", "generate synthetic target-present scenes");
  gen->add_option("--out", scenes.out, "output directory");
  gen->add_option("--count", scenes.count, "number of scenes");
  gen->add_option("--seed", scenes.seed, "generator seed");
  gen->add_option("--image-size", scenes.image_size, "image size WxH");
  gen->add_option("--min-objects", scenes.params.min_objects, "fewest objects per scene");
  gen->add_option("--max-objects", scenes.params.max_objects, "most objects per scene");
  gen->add_option("--min-side", scenes.params.min_side, "smallest object side (px)");
  gen->add_option("--max-side", scenes.params.max_side, "largest object side (px)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*fov) return cmd_foveate(foveate);
    if (*srch) return cmd_search(search);
    if (*ev) return cmd_eval(eval);
    if (*rep) return cmd_report(report);
    if (*gen) return cmd_scenes(scenes);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
