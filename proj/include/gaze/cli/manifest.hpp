#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gaze::cli {

inline constexpr const char* kToolVersion = "gaze-bench 0.1.0";

// FNV-1a 64-bit content hash, the digest used in run manifests.
std::uint64_t fnv1a64(const void* data, size_t len);
std::uint64_t file_digest(const std::string& path);
std::string digest_hex(std::uint64_t digest);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;
  std::map<std::string, std::string> output_digests;

  void add_input(const std::string& path);
  void add_output(const std::string& path);
  std::string to_json() const;
  void write(const std::string& path) const;
};

}  // namespace gaze::cli
