#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dipstop::pipeline {

// One clean/noisy pair. Paths are stored as written; relative paths are
// resolved against the manifest file's directory at load time.
struct PairRecord {
  std::string id;
  std::string noisy_path;
  std::string clean_path;  // empty when no reference exists
  std::string camera_tag;  // empty when ungrouped
};

struct PairManifest {
  std::vector<PairRecord> records;
  std::filesystem::path base_dir;  // directory the manifest was loaded from

  const PairRecord* find(const std::string& id) const;
};

// Resolves a stored path against the manifest's directory.
std::string resolve_path(const PairManifest& manifest, const std::string& p);

// JSONL, one record per line. Malformed lines are reported with their line
// number; duplicate ids are rejected. Paths are kept verbatim, so a
// write-read round trip preserves records exactly.
PairManifest load_pair_manifest(const std::filesystem::path& path);
void save_pair_manifest(const PairManifest& manifest,
                        const std::filesystem::path& path);

// Throws when a referenced file is missing; with require_clean, every
// record must also carry an existing clean image.
void check_paths_exist(const PairManifest& manifest, bool require_clean);

}  // namespace dipstop::pipeline
