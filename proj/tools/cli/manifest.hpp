#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cli/report.hpp"

namespace tqkd::cli {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

struct ManifestEntry {
  std::string file;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

/// Inputs of one invocation and every file it emitted.
struct RunManifest {
  std::string subcommand;
  std::optional<std::string> config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::vector<ManifestEntry> files;

  /// Writes `content` under out_dir and records its digest.
  void emit(const std::string& file, const std::string& content);

  Json to_json() const;

  /// Writes manifest.json next to the emitted files.
  void write() const;
};

}  // namespace tqkd::cli
