#include "semba/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "semba/io.hpp"

namespace semba {

const std::vector<FoveaPreset>& fovea_presets() {
  static const std::vector<FoveaPreset> presets{
      {"5x64", 5, 64}, {"4x128", 4, 128}, {"4x160", 4, 160}, {"3x256", 3, 256}};
  return presets;
}

std::optional<FoveaPreset> find_preset(const std::string& name) {
  for (const auto& p : fovea_presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

SceneDirectory load_scene_dir(const std::filesystem::path& dir, const ClassSet& classes) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw FormatError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  SceneDirectory out;
  for (const auto& f : files) {
    try {
      SceneSpec s = load_scene(f);
      if (!classes.find(s.target)) {
        throw FormatError("target '" + s.target + "' is not a known class");
      }
      out.scenes.push_back(std::move(s));
    } catch (const std::exception& e) {
      out.errors.push_back(f.filename().string() + ": " + e.what());
    }
  }
  std::stable_sort(out.scenes.begin(), out.scenes.end(),
                   [](const SceneSpec& a, const SceneSpec& b) { return a.scene_id < b.scene_id; });
  return out;
}

std::vector<Episode> run_batch(
    const std::vector<SceneSpec>& scenes, const EpisodeConfig& cfg, const ClassSet& classes,
    const SourceFactory& make_source, int jobs,
    const std::function<void(std::size_t, int, const Fixation&, const BeliefGrid&)>& observer) {
  std::vector<std::optional<Episode>> slots(scenes.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      auto source = make_source();
      for (std::size_t i = next++; i < scenes.size(); i = next++) {
        FixationObserver obs;
        if (observer) {
          obs = [&, i](int t, const Fixation& f, const BeliefGrid& g) { observer(i, t, f, g); };
        }
        slots[i].emplace(run_episode(scenes[i], cfg, classes, *source, obs));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = scenes.size();
    }
  };

  const int workers =
      std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(1, scenes.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Episode> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<Scanpath> run_simulated_batch(const std::vector<SceneSpec>& scenes,
                                          const EpisodeConfig& cfg, const ClassSet& classes,
                                          const DetectorModel& model, int jobs) {
  auto episodes = run_batch(
      scenes, cfg, classes,
      [&] { return std::make_unique<SimulatedDetector>(model, classes); }, jobs);
  std::vector<Scanpath> paths;
  paths.reserve(episodes.size());
  for (auto& e : episodes) paths.push_back(std::move(e.scanpath));
  return paths;
}

}  // namespace semba
