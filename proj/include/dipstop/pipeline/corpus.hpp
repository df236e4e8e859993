#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dipstop/dip/engine.hpp"
#include "dipstop/labels.hpp"
#include "dipstop/pipeline/manifest.hpp"
#include "dipstop/quality/trainer.hpp"

namespace dipstop::pipeline {

// One snapshot of one pair's reconstruction, with its reference PSNR and
// the target histogram the scorer trains against. `psnr` is measured on
// the float snapshot before 8-bit quantization and feeds the label;
// `psnr_quantized` is recomputed from the stored file.
struct CorpusRecord {
  std::string source_id;
  int iteration = 0;
  std::string snapshot_path;  // relative to the corpus directory
  float psnr = 0.0f;
  float psnr_quantized = 0.0f;
  float mu = 0.0f;
  quality::ScoreDistribution target;
};

struct CorpusManifest {
  std::string corpus_id;
  labels::LabelGenConfig label_config;
  std::vector<CorpusRecord> records;
};

struct BuildCorpusOptions {
  dip::DipConfig dip_config;           // dip_config.seed is the root seed
  float label_sigma = 1.5f;
  int label_samples = 100000;
  std::uint64_t label_seed = 0;
  int jobs = 1;
  std::function<void(const std::string&)> log;
};

struct BuildCorpusSummary {
  int pairs_total = 0;
  int pairs_reconstructed = 0;
  int pairs_reused = 0;               // completed in a previous invocation
  std::vector<std::string> failures;  // "id: reason"
  bool labels_reused = false;         // manifest was already complete
  std::size_t record_count = 0;
};

// Runs the full reconstruction of every pair (phase 1, resumable per pair),
// then computes corpus-wide PSNR extremes and labels every snapshot
// (phase 2, skipped when the manifest is already complete and its config
// matches). Pair failures are collected, not fatal.
BuildCorpusSummary build_corpus(const PairManifest& pairs,
                                const BuildCorpusOptions& options,
                                const std::filesystem::path& out_dir);

CorpusManifest load_corpus(const std::filesystem::path& out_dir);

// Materializes training samples: loads every snapshot file and attaches its
// target distribution. group_id is the source pair id.
std::vector<quality::TrainSample> corpus_to_train_samples(
    const CorpusManifest& manifest, const std::filesystem::path& out_dir);

}  // namespace dipstop::pipeline
