#pragma once

#include <map>
#include <string>
#include <vector>

#include "gaze/core/types.hpp"
#include "gaze/transforms/catalog.hpp"

namespace gaze::cli {

struct GroupLayout {
  transforms::TransformId id;
  std::map<std::string, std::string> images;     // stimulus id -> png path
  std::map<std::string, std::string> densities;  // stimulus id -> 16-bit png path
  // stimulus id -> fixation points (canvas filled in at load time)
  std::map<std::string, std::vector<core::FixationPoint>> fixations;
};

struct DatasetLayout {
  std::string root;
  std::map<transforms::TransformId, GroupLayout> groups;

  size_t image_count() const {
    size_t n = 0;
    for (const auto& [id, g] : groups) n += g.images.size();
    return n;
  }
};

// Validates the on-disk tree:
//   root/<GroupName>/<stimulus_id>.png
//   root/<GroupName>/fixations.csv            (optional)
//   root/<GroupName>/density/<stimulus_id>.png (optional)
// Throws with a diagnostic listing every violation (unknown group directory,
// fixation row referencing a missing stimulus, orphaned density map).
DatasetLayout ingest(const std::string& root);

}  // namespace gaze::cli

namespace gaze::analysis {
struct GazeDataset;
}

namespace gaze::cli {

// Loads per-group density maps (from density/ when present, else by
// smoothing the recorded fixations) and aligns the geometric groups onto
// the Reference canvas.
analysis::GazeDataset load_gaze_dataset(const DatasetLayout& layout, int jobs = 1);

}  // namespace gaze::cli
