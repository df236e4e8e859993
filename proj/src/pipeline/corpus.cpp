#include "dipstop/pipeline/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "dipstop/png_io.hpp"

namespace dipstop::pipeline {

namespace {

struct RawRecord {
  std::string id;
  int iteration;
  std::string snapshot_path;
  float psnr;
  float psnr_quantized;
};

std::filesystem::path run_dir_for(const std::filesystem::path& out_dir,
                                  const std::string& id) {
  return out_dir / "runs" / id;
}

std::filesystem::path run_marker(const std::filesystem::path& out_dir,
                                 const std::string& id) {
  return run_dir_for(out_dir, id) / "psnr.json";
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw std::runtime_error("cannot write: " + tmp.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Reconstructs one pair end to end and writes its per-snapshot PSNR table,
// which doubles as the completion marker.
void reconstruct_pair(const PairManifest& pairs, const PairRecord& pair,
                      const BuildCorpusOptions& options,
                      const std::filesystem::path& out_dir) {
  const Image noisy = read_png(resolve_path(pairs, pair.noisy_path));
  const Image clean = read_png(resolve_path(pairs, pair.clean_path));
  if (!noisy.same_shape(clean))
    throw std::runtime_error("clean/noisy shapes differ");

  dip::DipConfig cfg = options.dip_config;
  cfg.seed = derive_seed(options.dip_config.seed, "pair:" + pair.id);

  const std::filesystem::path run_dir = run_dir_for(out_dir, pair.id);
  std::filesystem::create_directories(run_dir);

  std::vector<int> iterations;
  std::vector<float> psnrs;
  const auto observer = [&](int iteration, const Image& snapshot) {
    iterations.push_back(iteration);
    psnrs.push_back(labels::compute_psnr(snapshot, clean));
    return dip::ObserverVerdict{};
  };
  const dip::ReconstructResult result =
      dip::reconstruct(noisy, cfg, nullptr, observer, run_dir);

  std::vector<float> psnrs_quantized;
  for (const auto& entry : result.trace.entries) {
    const Image stored = read_png((run_dir / entry.snapshot_ref).string());
    psnrs_quantized.push_back(labels::compute_psnr(stored, clean));
  }

  nlohmann::json j;
  j["format"] = "corpus-run-v1";
  j["id"] = pair.id;
  j["dip_fingerprint"] = cfg.fingerprint();
  j["seed"] = cfg.seed;
  j["iterations"] = iterations;
  j["psnr"] = psnrs;
  j["psnr_quantized"] = psnrs_quantized;
  write_text_atomic(run_marker(out_dir, pair.id), j.dump(2) + "\n");
}

std::string corpus_identity(const BuildCorpusOptions& options,
                            const std::vector<RawRecord>& records) {
  char buf[64];
  std::string material = "corpus-v1;";
  material += std::to_string(options.dip_config.fingerprint()) + ";";
  material += std::to_string(options.dip_config.seed) + ";";
  material += std::to_string(options.label_seed) + ";";
  std::snprintf(buf, sizeof(buf), "%.9g;%d", options.label_sigma,
                options.label_samples);
  material += buf;
  for (const auto& r : records)
    material += ";" + r.id + "#" + std::to_string(r.iteration);
  std::snprintf(buf, sizeof(buf), "c%016llx",
                static_cast<unsigned long long>(fnv1a64(material)));
  return buf;
}

nlohmann::json label_config_json(const labels::LabelGenConfig& cfg) {
  return {{"sigma", cfg.sigma},
          {"samples", cfg.samples},
          {"min_psnr", cfg.min_psnr},
          {"max_psnr", cfg.max_psnr},
          {"seed", cfg.seed}};
}

labels::LabelGenConfig label_config_from_json(const nlohmann::json& j) {
  labels::LabelGenConfig cfg;
  cfg.sigma = j.at("sigma").get<float>();
  cfg.samples = j.at("samples").get<int>();
  cfg.min_psnr = j.at("min_psnr").get<float>();
  cfg.max_psnr = j.at("max_psnr").get<float>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

}  // namespace

BuildCorpusSummary build_corpus(const PairManifest& pairs,
                                const BuildCorpusOptions& options,
                                const std::filesystem::path& out_dir) {
  options.dip_config.validate();
  if (pairs.records.empty())
    throw std::invalid_argument("build_corpus: pair manifest is empty");
  check_paths_exist(pairs, /*require_clean=*/true);
  std::filesystem::create_directories(out_dir / "runs");

  BuildCorpusSummary summary;
  summary.pairs_total = static_cast<int>(pairs.records.size());

  const auto log = [&](const std::string& line) {
    if (options.log) options.log(line);
  };

  // Phase 1: reconstruct every pair that has no completion marker yet.
  std::vector<const PairRecord*> todo;
  for (const auto& pair : pairs.records) {
    if (std::filesystem::exists(run_marker(out_dir, pair.id))) {
      ++summary.pairs_reused;
    } else {
      todo.push_back(&pair);
    }
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  const int jobs = std::max(1, options.jobs);
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      const PairRecord& pair = *todo[i];
      try {
        reconstruct_pair(pairs, pair, options, out_dir);
        std::lock_guard<std::mutex> lock(mu);
        ++summary.pairs_reconstructed;
        log("pair " + pair.id + ": reconstructed");
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        summary.failures.push_back(pair.id + ": " + e.what());
        log("pair " + pair.id + ": FAILED (" + std::string(e.what()) + ")");
      }
    }
  };
  if (jobs == 1 || todo.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < std::min<int>(jobs, static_cast<int>(todo.size())); ++t)
      threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  // Phase 2: gather per-run PSNR tables in manifest order.
  std::vector<RawRecord> raw;
  for (const auto& pair : pairs.records) {
    const std::filesystem::path marker = run_marker(out_dir, pair.id);
    if (!std::filesystem::exists(marker)) continue;
    std::ifstream is(marker);
    nlohmann::json j;
    is >> j;
    const auto iterations = j.at("iterations").get<std::vector<int>>();
    const auto psnrs = j.at("psnr").get<std::vector<float>>();
    const auto quantized = j.at("psnr_quantized").get<std::vector<float>>();
    if (iterations.size() != psnrs.size() || psnrs.size() != quantized.size())
      throw std::runtime_error("corrupt run table: " + marker.string());
    for (std::size_t k = 0; k < iterations.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof(name), "snap_%06d.png", iterations[k]);
      raw.push_back({pair.id, iterations[k],
                     "runs/" + pair.id + "/" + name, psnrs[k], quantized[k]});
    }
  }
  if (raw.empty())
    throw std::runtime_error("build_corpus: no pair completed successfully");
  std::sort(raw.begin(), raw.end(), [](const RawRecord& a, const RawRecord& b) {
    return a.id != b.id ? a.id < b.id : a.iteration < b.iteration;
  });
  summary.record_count = raw.size();

  labels::LabelGenConfig label_cfg;
  label_cfg.sigma = options.label_sigma;
  label_cfg.samples = options.label_samples;
  label_cfg.seed = options.label_seed;
  label_cfg.min_psnr = raw.front().psnr;
  label_cfg.max_psnr = raw.front().psnr;
  for (const auto& r : raw) {
    label_cfg.min_psnr = std::min(label_cfg.min_psnr, r.psnr);
    label_cfg.max_psnr = std::max(label_cfg.max_psnr, r.psnr);
  }
  label_cfg.validate();  // rejects a degenerate single-PSNR corpus

  const std::string corpus_id = corpus_identity(options, raw);
  const std::filesystem::path manifest_path = out_dir / "corpus.jsonl";
  if (std::filesystem::exists(manifest_path)) {
    try {
      const CorpusManifest existing = load_corpus(out_dir);
      if (existing.corpus_id == corpus_id &&
          existing.records.size() == raw.size()) {
        summary.labels_reused = true;
        log("corpus manifest already complete (" + corpus_id + ")");
        return summary;
      }
    } catch (const std::exception&) {
      // fall through and rebuild the manifest
    }
  }

  std::string text;
  {
    nlohmann::json header;
    header["format"] = "corpus-manifest-v1";
    header["corpus_id"] = corpus_id;
    header["label_config"] = label_config_json(label_cfg);
    header["records"] = raw.size();
    text += header.dump() + "\n";
  }
  for (const auto& r : raw) {
    const float mu = labels::psnr_to_mu(r.psnr, label_cfg);
    Rng rng = labels::record_rng(label_cfg,
                                r.id + "#" + std::to_string(r.iteration));
    const quality::ScoreDistribution target =
        labels::mu_to_distribution(mu, label_cfg, rng);
    nlohmann::json j;
    j["id"] = r.id;
    j["iteration"] = r.iteration;
    j["snapshot"] = r.snapshot_path;
    j["psnr"] = r.psnr;
    j["psnr_quantized"] = r.psnr_quantized;
    j["mu"] = mu;
    j["target"] = target.probs;
    text += j.dump() + "\n";
  }
  write_text_atomic(manifest_path, text);
  log("labeled " + std::to_string(raw.size()) + " records (" + corpus_id + ")");
  return summary;
}

CorpusManifest load_corpus(const std::filesystem::path& out_dir) {
  const std::filesystem::path path = out_dir / "corpus.jsonl";
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open corpus manifest: " + path.string());

  CorpusManifest out;
  std::string line;
  int line_no = 0;
  std::size_t expected = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      if (line_no == 1) {
        if (j.at("format").get<std::string>() != "corpus-manifest-v1")
          throw std::runtime_error("unknown corpus manifest format");
        out.corpus_id = j.at("corpus_id").get<std::string>();
        out.label_config = label_config_from_json(j.at("label_config"));
        expected = j.at("records").get<std::size_t>();
        continue;
      }
      CorpusRecord r;
      r.source_id = j.at("id").get<std::string>();
      r.iteration = j.at("iteration").get<int>();
      r.snapshot_path = j.at("snapshot").get<std::string>();
      r.psnr = j.at("psnr").get<float>();
      r.psnr_quantized = j.at("psnr_quantized").get<float>();
      r.mu = j.at("mu").get<float>();
      const auto target = j.at("target").get<std::vector<float>>();
      if (target.size() != quality::kScoreBins)
        throw std::runtime_error("target must have 10 bins");
      std::copy(target.begin(), target.end(), r.target.probs.begin());
      out.records.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed corpus line: " + e.what());
    }
  }
  if (line_no == 0)
    throw std::runtime_error("corpus manifest is empty: " + path.string());
  if (out.records.size() != expected)
    throw std::runtime_error(
        path.string() + ": header promises " + std::to_string(expected) +
        " records, found " + std::to_string(out.records.size()));
  return out;
}

std::vector<quality::TrainSample> corpus_to_train_samples(
    const CorpusManifest& manifest, const std::filesystem::path& out_dir) {
  std::vector<quality::TrainSample> samples;
  samples.reserve(manifest.records.size());
  for (const auto& r : manifest.records) {
    quality::TrainSample s;
    s.image = read_png((out_dir / r.snapshot_path).string());
    s.target = r.target;
    s.group_id = r.source_id;
    s.psnr = r.psnr;
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace dipstop::pipeline
