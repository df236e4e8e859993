#include "dipstop/pipeline/manifest.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dipstop::pipeline {

const PairRecord* PairManifest::find(const std::string& id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

std::string resolve_path(const PairManifest& manifest, const std::string& p) {
  if (p.empty()) return p;
  std::filesystem::path fp(p);
  if (fp.is_absolute()) return p;
  return (manifest.base_dir / fp).string();
}

PairManifest load_pair_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open pair manifest: " + path.string());

  PairManifest out;
  out.base_dir = path.parent_path();
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      PairRecord r;
      r.id = j.at("id").get<std::string>();
      r.noisy_path = j.at("noisy").get<std::string>();
      if (j.contains("clean")) r.clean_path = j["clean"].get<std::string>();
      if (j.contains("camera")) r.camera_tag = j["camera"].get<std::string>();
      if (r.id.empty())
        throw std::runtime_error("record id must be non-empty");
      if (!seen.insert(r.id).second)
        throw std::runtime_error("duplicate id \"" + r.id + "\"");
      out.records.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed manifest line: " + e.what());
    }
  }
  return out;
}

void save_pair_manifest(const PairManifest& manifest,
                        const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot write pair manifest: " + path.string());
  for (const auto& r : manifest.records) {
    nlohmann::json j;
    j["id"] = r.id;
    j["noisy"] = r.noisy_path;
    if (!r.clean_path.empty()) j["clean"] = r.clean_path;
    if (!r.camera_tag.empty()) j["camera"] = r.camera_tag;
    os << j.dump() << "\n";
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

void check_paths_exist(const PairManifest& manifest, bool require_clean) {
  for (const auto& r : manifest.records) {
    if (!std::filesystem::exists(resolve_path(manifest, r.noisy_path)))
      throw std::runtime_error("pair \"" + r.id +
                               "\": noisy image missing: " + r.noisy_path);
    if (require_clean) {
      if (r.clean_path.empty())
        throw std::runtime_error("pair \"" + r.id +
                                 "\": clean image required but not listed");
      if (!std::filesystem::exists(resolve_path(manifest, r.clean_path)))
        throw std::runtime_error("pair \"" + r.id +
                                 "\": clean image missing: " + r.clean_path);
    }
  }
}

}  // namespace dipstop::pipeline
