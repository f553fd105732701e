#pragma once

#include <map>
#include <string>
#include <vector>

#include "gaze/core/types.hpp"

namespace gaze::core {

// CSV schema: header "stimulus_id,observer_id,x,y", one row per gaze point.
// Rows are grouped by stimulus id; canvas sizes are supplied by the caller
// (typically the dimensions of the matching stimulus image).
std::map<std::string, std::vector<FixationPoint>> read_fixation_csv(const std::string& path);

void write_fixation_csv(const std::string& path,
                        const std::vector<FixationSet>& sets);

}  // namespace gaze::core
