#include "gaze/core/fixation_csv.hpp"

#include <fstream>
#include <sstream>

namespace gaze::core {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::map<std::string, std::vector<FixationPoint>> read_fixation_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty fixation file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "stimulus_id,observer_id,x,y")
    throw std::runtime_error(path + ": expected header 'stimulus_id,observer_id,x,y', got '" +
                             line + "'");

  std::map<std::string, std::vector<FixationPoint>> out;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 4 fields");
    FixationPoint p;
    try {
      p.observer_id = std::stoi(fields[1]);
      p.x = std::stoi(fields[2]);
      p.y = std::stoi(fields[3]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad numeric field");
    }
    out[fields[0]].push_back(p);
  }
  return out;
}

void write_fixation_csv(const std::string& path, const std::vector<FixationSet>& sets) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "stimulus_id,observer_id,x,y\n";
  for (const auto& s : sets)
    for (const auto& p : s.points)
      out << s.stimulus_id << ',' << p.observer_id << ',' << p.x << ',' << p.y << '\n';
}

}  // namespace gaze::core
