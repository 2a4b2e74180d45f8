#pragma once
#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "htk/version.hpp"

namespace htk::tools {

// Reproducibility sidecar written next to every file output: the subcommand,
// the full parameter map, the master seed, the tool version, and the
// wall-clock duration.  Replaying the recorded parameters reproduces the
// output byte-for-byte; the duration field alone varies between runs.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  double duration_seconds = 0;

  nlohmann::json to_json() const {
    return {{"subcommand", subcommand}, {"parameters", parameters},
            {"seed", seed},             {"version", version},
            {"duration_seconds", duration_seconds}};
  }
};

class ManifestTimer {
 public:
  ManifestTimer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string manifest_path(const std::string& out_path) {
  return out_path + ".manifest.json";
}

inline void write_manifest(const RunManifest& m, const std::string& out_path) {
  const std::string path = manifest_path(out_path);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write manifest: " + path);
  f << m.to_json().dump(2) << "\n";
}

}  // namespace htk::tools
