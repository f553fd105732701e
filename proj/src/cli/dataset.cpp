#include "gaze/cli/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "gaze/analysis/analysis.hpp"
#include "gaze/core/fixation_csv.hpp"
#include "gaze/core/png_io.hpp"
#include "gaze/metrics/metrics.hpp"

namespace gaze::cli {

namespace fs = std::filesystem;

DatasetLayout ingest(const std::string& root) {
  if (!fs::is_directory(root))
    throw std::runtime_error("ingest: '" + root + "' is not a directory");

  DatasetLayout layout;
  layout.root = root;
  std::vector<std::string> issues;

  std::vector<fs::path> group_dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) group_dirs.push_back(entry.path());
  std::sort(group_dirs.begin(), group_dirs.end());

  for (const auto& dir : group_dirs) {
    const std::string name = dir.filename().string();
    transforms::TransformId id;
    try {
      id = transforms::transform_id_from_string(name);
    } catch (const std::exception&) {
      issues.push_back("unknown group directory: " + name);
      continue;
    }
    GroupLayout g;
    g.id = id;

    std::vector<fs::path> files;
    for (const auto& f : fs::directory_iterator(dir))
      if (f.is_regular_file()) files.push_back(f.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const std::string ext = f.extension().string();
      if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") {
        const std::string sid = f.stem().string();
        if (!g.images.emplace(sid, f.string()).second)
          issues.push_back(name + ": stimulus '" + sid + "' resolves to more than one image");
      }
    }

    const fs::path density_dir = dir / "density";
    if (fs::is_directory(density_dir)) {
      std::vector<fs::path> dfiles;
      for (const auto& f : fs::directory_iterator(density_dir))
        if (f.is_regular_file() && f.path().extension() == ".png") dfiles.push_back(f.path());
      std::sort(dfiles.begin(), dfiles.end());
      for (const auto& f : dfiles) {
        const std::string sid = f.stem().string();
        if (!g.images.count(sid))
          issues.push_back(name + ": density map for missing stimulus '" + sid + "'");
        g.densities[sid] = f.string();
      }
    }

    const fs::path fix_csv = dir / "fixations.csv";
    if (fs::is_regular_file(fix_csv)) {
      try {
        auto by_stimulus = core::read_fixation_csv(fix_csv.string());
        for (auto& [sid, points] : by_stimulus) {
          if (!g.images.count(sid)) {
            issues.push_back(name + ": fixation rows reference missing stimulus '" + sid + "'");
            continue;
          }
          g.fixations[sid] = std::move(points);
        }
      } catch (const std::exception& e) {
        issues.push_back(name + ": " + e.what());
      }
    }

    layout.groups[id] = std::move(g);
  }

  if (layout.groups.empty())
    issues.push_back("no transform-group directories found under '" + root + "' (0 groups)");

  if (!issues.empty()) {
    std::ostringstream msg;
    msg << "ingest: " << issues.size() << " validation error(s) under '" << root << "':";
    for (const auto& i : issues) msg << "\n  - " << i;
    throw std::runtime_error(msg.str());
  }
  return layout;
}

analysis::GazeDataset load_gaze_dataset(const DatasetLayout& layout, int jobs) {
  analysis::GazeDataset ds;
  const auto ref_it = layout.groups.find(transforms::TransformId::Reference);
  if (ref_it == layout.groups.end())
    throw std::runtime_error("load_gaze_dataset: dataset has no Reference group");
  if (ref_it->second.images.empty())
    throw std::runtime_error("load_gaze_dataset: Reference group is empty");

  const core::ColorImage probe = core::read_png(ref_it->second.images.begin()->second);
  const int ref_w = probe.width;
  const int ref_h = probe.height;

  struct Item {
    transforms::TransformId group;
    std::string sid;
  };
  std::vector<Item> items;
  for (const auto& [gid, group] : layout.groups)
    for (const auto& [sid, path] : group.images) items.push_back({gid, sid});

  std::mutex mu;
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
      const auto& [gid, sid] = items[i];
      const auto& group = layout.groups.at(gid);
      core::DensityMap den;
      if (auto dit = group.densities.find(sid); dit != group.densities.end()) {
        den = core::read_density(dit->second);
      } else if (auto fit = group.fixations.find(sid); fit != group.fixations.end()) {
        const core::ColorImage img = core::read_png(group.images.at(sid));
        core::FixationSet fix;
        fix.stimulus_id = sid;
        fix.canvas_width = img.width;
        fix.canvas_height = img.height;
        fix.points = fit->second;
        den = metrics::smooth_fixations(fix);
      } else {
        continue;  // nothing recorded for this stimulus
      }
      const auto& rec = transforms::catalog_record(gid);
      if (rec.invertible_for_alignment && gid != transforms::TransformId::Reference)
        den = transforms::align_to_reference(den, rec, ref_w, ref_h);
      std::lock_guard<std::mutex> lock(mu);
      ds.densities[gid][sid] = std::move(den);
    }
  };
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  return ds;
}

}  // namespace gaze::cli
