// Acceptance suite: nine desk-scale checks of the denoising pipeline, one
// PASS/FAIL line each. The full-protocol evaluation (real camera datasets,
// large pretrained backbones, hour-long fits) is out of scope here; these
// criteria pin the same behaviors with synthetic data and small networks.
//
// Usage: acceptance <path-to-dipstop-binary> [workspace-dir]

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dipstop/dip/config.hpp"
#include "dipstop/dip/engine.hpp"
#include "dipstop/image.hpp"
#include "dipstop/labels.hpp"
#include "dipstop/pipeline/corpus.hpp"
#include "dipstop/pipeline/manifest.hpp"
#include "dipstop/pipeline/trace.hpp"
#include "dipstop/pipeline/warmstart.hpp"
#include "dipstop/png_io.hpp"
#include "dipstop/quality/backbone.hpp"
#include "dipstop/quality/distribution.hpp"
#include "dipstop/quality/pretrain.hpp"
#include "dipstop/quality/score_model.hpp"
#include "dipstop/quality/trainer.hpp"
#include "dipstop/rng.hpp"
#include "dipstop/stop_controller.hpp"
#include "dipstop/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dipstop;

namespace {

// ---------------------------------------------------------------------------
// Shared fixtures

constexpr float kNoiseSigma = 25.0f / 255.0f;

struct Context {
  std::string cli;    // path to the dipstop binary
  fs::path ws;        // workspace root
  bool verbose_ok = true;

  // Artifacts shared between criteria.
  fs::path model_path;
  bool model_ready = false;
  std::vector<float> c5_psnr_curve;
  dip::DipConfig c5_config;
  Image c5_clean, c5_noisy;
};

// Desk-scale prior network: small enough for CPU minutes, deep enough to
// show the characteristic rise-then-overfit behavior.
dip::DipConfig desk_dip(std::uint64_t seed, int max_iterations) {
  dip::DipConfig c = dip::DipConfig::with_scales(2, 16, 4);
  c.input_channels = 16;
  c.max_iterations = max_iterations;
  c.eval_every = 10;
  c.seed = seed;
  return c;
}

struct Pair {
  Image clean;
  Image noisy;
};

Pair synth_pair(std::uint64_t seed) {
  Rng rng(seed);
  auto scene_rng = rng.stream("scene");
  auto noise_rng = rng.stream("noise");
  Pair p;
  p.clean = synth::random_scene(64, 64, scene_rng);
  p.noisy = synth::add_gaussian_noise(p.clean, kNoiseSigma, noise_rng);
  return p;
}

int run_cli(const std::string& cli, const std::string& args,
            const fs::path& log_path) {
  const std::string cmd = cli + " " + args + " >" + log_path.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Average-rank Spearman correlation, with tie handling.
double spearman(const std::vector<float>& a, const std::vector<float>& b) {
  const std::size_t n = a.size();
  const auto ranks = [n](const std::vector<float>& v) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return v[x] < v[y]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && v[idx[j]] == v[idx[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j - 1)) + 1.0;
      for (std::size_t k = i; k < j; ++k) r[idx[k]] = avg;
      i = j;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  if (da == 0 || db == 0) return 0.0;
  return num / std::sqrt(da * db);
}

bool report(int criterion, bool ok, const std::string& what,
            const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion 1: histogram-distance anchors and symmetry

bool criterion1(Context&) {
  using quality::ScoreDistribution;
  bool ok = true;
  std::string detail;

  const double zero =
      quality::emd_loss(ScoreDistribution::one_hot(4), ScoreDistribution::one_hot(4));
  ok &= std::fabs(zero) <= 1e-9;

  // Bins 1 vs 2 and 1 vs 10 in 1-based terms.
  const double adjacent =
      quality::emd_loss(ScoreDistribution::one_hot(0), ScoreDistribution::one_hot(1));
  ok &= std::fabs(adjacent - std::sqrt(1.0 / 10.0)) <= 1e-9;
  const double extreme =
      quality::emd_loss(ScoreDistribution::one_hot(0), ScoreDistribution::one_hot(9));
  ok &= std::fabs(extreme - std::sqrt(9.0 / 10.0)) <= 1e-9;

  int symmetric = 0;
  Rng rng(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    ScoreDistribution p, q;
    double sp = 0, sq = 0;
    for (int i = 0; i < quality::kScoreBins; ++i) {
      p.probs[i] = static_cast<float>(rng.uniform(0.0, 1.0));
      q.probs[i] = static_cast<float>(rng.uniform(0.0, 1.0));
      sp += p.probs[i];
      sq += q.probs[i];
    }
    for (int i = 0; i < quality::kScoreBins; ++i) {
      p.probs[i] = static_cast<float>(p.probs[i] / sp);
      q.probs[i] = static_cast<float>(q.probs[i] / sq);
    }
    if (quality::emd_loss(p, q) == quality::emd_loss(q, p)) ++symmetric;
  }
  ok &= symmetric == 1000;

  detail = fmt("identical=%.1e adjacent-err=%.1e extreme-err=%.1e symmetric=%d/1000",
               zero, std::fabs(adjacent - std::sqrt(0.1)),
               std::fabs(extreme - std::sqrt(0.9)), symmetric);
  return report(1, ok, "histogram distance anchors and symmetry", detail);
}

// ---------------------------------------------------------------------------
// Criterion 2: PSNR-to-mean map endpoints

bool criterion2(Context&) {
  bool ok = true;

  // Arbitrary (non-representable) extremes: the endpoints must still map
  // exactly because the affine map is evaluated at its own anchors.
  labels::LabelGenConfig odd;
  odd.min_psnr = 17.41f;
  odd.max_psnr = 33.7f;
  odd.seed = 1;
  ok &= labels::psnr_to_mu(odd.min_psnr, odd) == 2.5f;
  ok &= labels::psnr_to_mu(odd.max_psnr, odd) == 7.5f;

  // Exactly representable extremes: the midpoint lands on 5 to 1e-12.
  labels::LabelGenConfig dyadic;
  dyadic.min_psnr = 18.0f;
  dyadic.max_psnr = 34.0f;
  dyadic.seed = 1;
  const double mid = labels::psnr_to_mu(26.0f, dyadic);
  ok &= std::fabs(mid - 5.0) <= 1e-12;

  return report(2, ok, "score map endpoints 2.5/7.5 exact, midpoint 5.0",
                fmt("lo=%.17g hi=%.17g mid-err=%.1e",
                    static_cast<double>(labels::psnr_to_mu(odd.min_psnr, odd)),
                    static_cast<double>(labels::psnr_to_mu(odd.max_psnr, odd)),
                    std::fabs(mid - 5.0)));
}

// ---------------------------------------------------------------------------
// Criterion 3: label generator fidelity at one million samples

bool criterion3(Context&) {
  labels::LabelGenConfig c;
  c.sigma = 1.5f;
  c.samples = 1000000;
  c.min_psnr = 18.0f;
  c.max_psnr = 34.0f;
  c.seed = 3003;

  bool ok = true;
  std::string detail;
  const float centers[5] = {3.5f, 5.0f, 6.5f, 2.5f, 7.5f};
  const float tolerance[5] = {0.02f, 0.02f, 0.02f, 0.1f, 0.1f};
  for (int i = 0; i < 5; ++i) {
    Rng rng = labels::record_rng(c, fmt("fidelity-%d", i));
    quality::ScoreDistribution d = labels::mu_to_distribution(centers[i], c, rng);
    float seq = 0.0f;
    for (float p : d.probs) seq += p;
    const float mean = quality::mean_score(d);
    const bool here = std::fabs(mean - centers[i]) < tolerance[i] && seq == 1.0f;
    ok &= here;
    detail += fmt("mu=%.1f est=%.4f ", centers[i], mean);
  }
  return report(3, ok, "label histograms track the requested mean, sum exactly 1",
                detail);
}

// ---------------------------------------------------------------------------
// Criterion 4: stop controller on noisy bells; fine search vs brute force

bool criterion4(Context&) {
  stopctl::StopPolicy policy;  // full-size defaults: 15 / 30 / 30 / 50
  int hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(4000 + trial);
    std::vector<float> raw;
    for (int t = 0; t < 300; ++t) {
      const float bell =
          std::exp(-std::pow((t - 150.0f), 2.0f) / (2.0f * 40.0f * 40.0f));
      raw.push_back(bell + static_cast<float>(rng.uniform(-0.05, 0.05)));
    }
    const stopctl::StopDecision d = stopctl::run_policy(raw, policy);
    if (std::abs(d.final_index - 150) <= 10) ++hits;
  }

  int brute_matches = 0;
  Rng rng(4242);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = rng.uniform_int(1, 80);
    std::vector<float> raw(n);
    for (auto& v : raw) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    const int center = rng.uniform_int(0, n - 1);
    const int radius = rng.uniform_int(0, 35);
    int best = -1;
    for (int i = std::max(0, center - radius);
         i <= std::min(n - 1, center + radius); ++i)
      if (best < 0 || raw[i] > raw[best]) best = i;
    if (stopctl::fine_search(raw, center, radius) == best) ++brute_matches;
  }

  const bool ok = hits >= 95 && brute_matches == 10000;
  return report(4, ok, "noisy-bell stops within +/-10 steps; exact windowed argmax",
                fmt("bell-hits=%d/100 argmax=%d/10000", hits, brute_matches));
}

// ---------------------------------------------------------------------------
// Criterion 5: prior-fit denoising beats the noisy input at desk scale

bool criterion5(Context& ctx) {
  const Pair pair = synth_pair(5105);
  ctx.c5_clean = pair.clean;
  ctx.c5_noisy = pair.noisy;
  ctx.c5_config = desk_dip(424242, 600);

  const float noisy_psnr = labels::compute_psnr(pair.noisy, pair.clean);

  std::vector<float>& curve = ctx.c5_psnr_curve;
  curve.clear();
  auto observer = [&](int, const Image& snap) {
    curve.push_back(labels::compute_psnr(snap, pair.clean));
    return dip::ObserverVerdict{};
  };
  dip::reconstruct(pair.noisy, ctx.c5_config, nullptr, observer);

  const float best = *std::max_element(curve.begin(), curve.end());
  const bool hard_gate = best > noisy_psnr;
  const bool soft_target = best >= noisy_psnr + 2.0f;
  return report(
      5, hard_gate, "prior fit improves on the noisy input",
      fmt("noisy=%.2f dB best=%.2f dB gain=%.2f dB; soft target >= 2 dB: %s",
          noisy_psnr, best, best - noisy_psnr, soft_target ? "met" : "not met"));
}

// ---------------------------------------------------------------------------
// Criterion 6: warm starts reach the cold-run quality band sooner

bool criterion6(Context& ctx) {
  const fs::path dir = ctx.ws / "warmstart";
  fs::create_directories(dir);

  pipeline::PairManifest manifest;
  manifest.base_dir = dir;
  const int n_pairs = 5;  // one typical + four evaluation pairs
  for (int i = 0; i < n_pairs; ++i) {
    const Pair p = synth_pair(6100 + i);
    const std::string noisy = fmt("w%d_noisy.png", i);
    const std::string clean = fmt("w%d_clean.png", i);
    write_png((dir / noisy).string(), p.noisy);
    write_png((dir / clean).string(), p.clean);
    pipeline::PairRecord r;
    r.id = i == 0 ? "typical" : fmt("eval%d", i);
    r.noisy_path = noisy;
    r.clean_path = clean;
    manifest.records.push_back(r);
  }

  const dip::DipConfig config = desk_dip(626262, 600);
  const pipeline::WarmstartStudy study =
      pipeline::run_warmstart_study(manifest, "typical", config, 600, 0.5f);

  int faster = 0;
  std::string detail;
  for (const auto& p : study.pairs) {
    const bool strictly_faster = p.warm_reached_band && p.cold_steps_to_band > 0 &&
                                 p.warm_steps_to_band < p.cold_steps_to_band;
    if (strictly_faster) ++faster;
    detail += fmt("%s:%d->%d ", p.id.c_str(), p.cold_steps_to_band,
                  p.warm_steps_to_band);
  }
  detail += fmt("| mean reduction %.2f (reference figure %.2f)",
                study.mean_reduction, study.reference_reduction);
  const bool ok = faster >= 3;
  return report(6, ok, "warm starts reach the quality band in fewer steps",
                fmt("faster on %d/4; %s", faster, detail.c_str()));
}

// ---------------------------------------------------------------------------
// Criterion 7: the scorer trains and ranks held-out snapshots by PSNR

bool criterion7(Context& ctx) {
  const fs::path dir = ctx.ws / "corpus_pairs";
  fs::create_directories(dir);

  pipeline::PairManifest manifest;
  manifest.base_dir = dir;
  const int n_pairs = 10;
  for (int i = 0; i < n_pairs; ++i) {
    const Pair p = synth_pair(7100 + i);
    const std::string noisy = fmt("c%d_noisy.png", i);
    const std::string clean = fmt("c%d_clean.png", i);
    write_png((dir / noisy).string(), p.noisy);
    write_png((dir / clean).string(), p.clean);
    pipeline::PairRecord r;
    r.id = fmt("src%02d", i);
    r.noisy_path = noisy;
    r.clean_path = clean;
    manifest.records.push_back(r);
  }

  // 10 pairs x 200 iterations / every 10 = 200 labeled snapshots.
  pipeline::BuildCorpusOptions opt;
  opt.dip_config = desk_dip(727272, 200);
  opt.label_seed = 7201;
  const fs::path corpus_dir = ctx.ws / "corpus";
  const pipeline::BuildCorpusSummary summary =
      pipeline::build_corpus(manifest, opt, corpus_dir);
  if (!summary.failures.empty() || summary.record_count != 200)
    return report(7, false, "scorer training",
                  fmt("corpus build failed: %zu records, %zu failures",
                      summary.record_count, summary.failures.size()));

  const pipeline::CorpusManifest corpus = pipeline::load_corpus(corpus_dir);
  std::vector<quality::TrainSample> samples =
      pipeline::corpus_to_train_samples(corpus, corpus_dir);

  // Hold the last two source images out entirely; they provide the
  // correlation probe the trainer never sees.
  std::vector<quality::TrainSample> train_set, probe_set;
  for (const auto& s : samples) {
    if (s.group_id == "src08" || s.group_id == "src09")
      probe_set.push_back(s);
    else
      train_set.push_back(s);
  }

  quality::PretrainOptions pre;
  pre.spec = quality::BackboneSpec::defaults();
  pre.steps = 200;
  pre.batch_size = 8;
  pre.image_size = 96;
  pre.seed = 7301;
  const nn::ParamBlobs backbone_weights = quality::pretrain_backbone(pre);
  quality::save_backbone(pre.spec, backbone_weights, ctx.ws / "backbone.bin");
  const quality::BackboneCheckpoint backbone =
      quality::load_backbone(ctx.ws / "backbone.bin");

  quality::TrainOptions topt;
  topt.schedule.stage1_epochs = 10;
  topt.schedule.stage2_epochs = 20;
  topt.schedule.batch_size = 32;
  topt.schedule.input_resize = 64;
  topt.schedule.train_crop = 56;
  topt.schedule.validation_fraction = 0.1f;
  topt.seed = 7401;
  topt.corpus_id = corpus.corpus_id;
  topt.min_psnr = corpus.label_config.min_psnr;
  topt.max_psnr = corpus.label_config.max_psnr;
  quality::ScoreModel model = quality::train_quality_model(train_set, backbone, topt);

  ctx.model_path = ctx.ws / "model.bin";
  quality::save_model(model, ctx.model_path);
  ctx.model_ready = true;

  // Stage-1 loss must trend down across epochs.
  const std::vector<float>& s1 = model.meta.stage1.train;
  double delta_sum = 0.0;
  for (std::size_t e = 1; e < s1.size(); ++e) delta_sum += s1[e] - s1[e - 1];
  const bool decreasing = delta_sum / static_cast<double>(s1.size() - 1) < 0.0;

  std::vector<float> scores, psnrs;
  for (auto& s : probe_set) {
    scores.push_back(quality::mean_score(quality::predict_distribution(model, s.image)));
    psnrs.push_back(s.psnr);
  }
  const double rho = spearman(scores, psnrs);

  const bool ok = decreasing && rho > 0.5;
  return report(7, ok, "scorer trains; held-out ranks follow PSNR",
                fmt("stage1 first=%.4f last=%.4f; spearman=%.3f on %zu held-out",
                    s1.front(), s1.back(), rho, probe_set.size()));
}

// ---------------------------------------------------------------------------
// Criterion 8: end-to-end auto-stop lands near the best snapshot

struct DenoiseOutcome {
  bool ran = false;
  float chosen_psnr = 0.0f;
  float best_psnr = 0.0f;
};

DenoiseOutcome run_denoise_case(Context& ctx, int index, const fs::path& out_dir) {
  DenoiseOutcome outcome;
  const fs::path dir = ctx.ws / "autostop";
  fs::create_directories(dir);

  const Pair p = synth_pair(8100 + index);
  const fs::path noisy_png = dir / fmt("t%d_noisy.png", index);
  write_png(noisy_png.string(), p.noisy);

  const std::string args = fmt(
      "denoise -i %s -m %s -o %s "
      "--depth 2 --filters 16 --skip-filters 4 --input-channels 16 "
      "--max-iters 600 --eval-every 10 --seed %d "
      "--window 5 --patience 10 --radius 10 --min-evals 15 --keep-all",
      noisy_png.string().c_str(), ctx.model_path.string().c_str(),
      out_dir.string().c_str(), 8200 + index);
  const int code = run_cli(ctx.cli, args, dir / fmt("t%d.log", index));
  if (code != 0 && code != 3) return outcome;

  const pipeline::RunTraceDoc doc = pipeline::read_trace(out_dir / "trace.json");
  float best = -1.0f, chosen = -1.0f;
  for (const auto& e : doc.trace.entries) {
    if (e.snapshot_ref.empty()) continue;
    const Image snap = read_png((out_dir / "snapshots" / e.snapshot_ref).string());
    const float psnr = labels::compute_psnr(snap, p.clean);
    best = std::max(best, psnr);
    if (e.iteration == doc.trace.final_choice) chosen = psnr;
  }
  if (best < 0 || chosen < 0) return outcome;
  outcome.ran = true;
  outcome.best_psnr = best;
  outcome.chosen_psnr = chosen;
  return outcome;
}

bool criterion8(Context& ctx) {
  if (!ctx.model_ready)
    return report(8, false, "end-to-end auto-stop", "no trained scorer available");

  int near_best = 0;
  std::string detail;
  for (int i = 0; i < 5; ++i) {
    const DenoiseOutcome o = run_denoise_case(ctx, i, ctx.ws / fmt("autostop/out%d", i));
    if (!o.ran) {
      detail += fmt("t%d:failed ", i);
      continue;
    }
    const float gap = o.best_psnr - o.chosen_psnr;
    if (gap <= 1.0f) ++near_best;
    detail += fmt("t%d:gap=%.2f ", i, gap);
  }
  const bool ok = near_best >= 4;
  return report(8, ok, "auto-stop chooses within 1 dB of the best snapshot",
                fmt("near-best on %d/5; %s", near_best, detail.c_str()));
}

// ---------------------------------------------------------------------------
// Criterion 9: reruns with the same seed are byte-identical (metadata aside)

json trace_without_meta(const fs::path& path) {
  std::ifstream in(path);
  json j = json::parse(in);
  j.erase("meta");
  return j;
}

bool criterion9(Context& ctx) {
  bool ok = true;
  std::string detail;

  // Repeat the criterion-5 reconstruction twice into fresh directories and
  // compare the trace documents and every snapshot byte-for-byte.
  const fs::path d1 = ctx.ws / "repeat" / "a";
  const fs::path d2 = ctx.ws / "repeat" / "b";
  fs::create_directories(d1);
  fs::create_directories(d2);
  dip::ReconstructResult r1 =
      dip::reconstruct(ctx.c5_noisy, ctx.c5_config, nullptr, {}, d1);
  dip::ReconstructResult r2 =
      dip::reconstruct(ctx.c5_noisy, ctx.c5_config, nullptr, {}, d2);

  pipeline::RunTraceDoc doc1, doc2;
  doc1.trace = r1.trace;
  doc2.trace = r2.trace;
  doc1.effective_config = doc2.effective_config = {{"seed", ctx.c5_config.seed}};
  doc1.meta = {{"created_at", "first"}};
  doc2.meta = {{"created_at", "second"}};  // meta is excluded from the guarantee
  const std::string j1 = pipeline::trace_to_json(doc1).dump(2);
  const std::string j2 = pipeline::trace_to_json(doc2).dump(2);
  json p1 = json::parse(j1);
  json p2 = json::parse(j2);
  p1.erase("meta");
  p2.erase("meta");
  const bool traces_equal = p1.dump() == p2.dump();
  ok &= traces_equal;

  bool snapshots_equal = true;
  for (const auto& e : r1.trace.entries) {
    if (e.snapshot_ref.empty()) continue;
    if (slurp(d1 / e.snapshot_ref) != slurp(d2 / e.snapshot_ref))
      snapshots_equal = false;
  }
  ok &= snapshots_equal;
  ok &= r1.state.weights == r2.state.weights;
  detail += fmt("fit: traces %s, %zu snapshots %s; ", traces_equal ? "equal" : "differ",
                r1.trace.entries.size(), snapshots_equal ? "equal" : "differ");

  // Repeat one end-to-end denoise subprocess and compare its artifacts.
  if (ctx.model_ready) {
    const DenoiseOutcome a = run_denoise_case(ctx, 0, ctx.ws / "repeat" / "cli_a");
    const DenoiseOutcome b = run_denoise_case(ctx, 0, ctx.ws / "repeat" / "cli_b");
    const bool ran = a.ran && b.ran;
    bool cli_traces_equal = false, image_equal = false;
    if (ran) {
      cli_traces_equal =
          trace_without_meta(ctx.ws / "repeat" / "cli_a" / "trace.json").dump() ==
          trace_without_meta(ctx.ws / "repeat" / "cli_b" / "trace.json").dump();
      image_equal = slurp(ctx.ws / "repeat" / "cli_a" / "denoised.png") ==
                    slurp(ctx.ws / "repeat" / "cli_b" / "denoised.png");
    }
    ok &= ran && cli_traces_equal && image_equal;
    detail += fmt("cli: traces %s, output image %s",
                  cli_traces_equal ? "equal" : "differ",
                  image_equal ? "equal" : "differ");
  } else {
    ok = false;
    detail += "cli: skipped, no model";
  }

  return report(9, ok, "identical seeds reproduce runs byte-for-byte", detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-dipstop> [workspace]\n");
    return 2;
  }
  Context ctx;
  ctx.cli = argv[1];
  ctx.ws = argc > 2 ? fs::path(argv[2])
                    : fs::temp_directory_path() / "dipstop-acceptance";
  fs::remove_all(ctx.ws);
  fs::create_directories(ctx.ws);

  const auto t0 = std::chrono::steady_clock::now();
  int passed = 0;
  const std::function<bool(Context&)> criteria[] = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  for (auto& fn : criteria) {
    try {
      if (fn(ctx)) ++passed;
    } catch (const std::exception& e) {
      std::printf("FAIL (exception): %s\n", e.what());
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d/9 criteria passed in %.1f s\n", passed, seconds);
  return passed == 9 ? 0 : 1;
}
