#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dipstop/dip/config.hpp"
#include "dipstop/dip/engine.hpp"
#include "dipstop/image.hpp"
#include "dipstop/labels.hpp"
#include "dipstop/pipeline/autostop.hpp"
#include "dipstop/pipeline/corpus.hpp"
#include "dipstop/pipeline/manifest.hpp"
#include "dipstop/pipeline/report.hpp"
#include "dipstop/pipeline/trace.hpp"
#include "dipstop/pipeline/warmstart.hpp"
#include "dipstop/png_io.hpp"
#include "dipstop/quality/backbone.hpp"
#include "dipstop/quality/pretrain.hpp"
#include "dipstop/quality/score_model.hpp"
#include "dipstop/quality/trainer.hpp"
#include "dipstop/rng.hpp"
#include "dipstop/stop_controller.hpp"

namespace dipstop::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;
constexpr int kBackstopStop = 3;

// ---------------------------------------------------------------------------
// Shared option bundles

struct DipOptions {
  int depth = 5;
  int filters = 128;
  int skip_filters = 4;
  int input_channels = 32;
  float input_noise = 0.1f;
  float perturb_sigma = 1.0f / 30.0f;
  float learning_rate = 0.01f;
  int max_iterations = 5000;
  int eval_every = 10;
  std::uint64_t seed = 1;
};

struct StopOptions {
  int window = 15;
  int patience = 30;
  int radius = 30;
  int min_evals = 50;
};

void add_dip_options(CLI::App* cmd, DipOptions& o) {
  cmd->add_option("--depth", o.depth, "Hourglass scale count")
      ->capture_default_str();
  cmd->add_option("--filters", o.filters, "Filters per scale (down and up)")
      ->capture_default_str();
  cmd->add_option("--skip-filters", o.skip_filters,
                  "Channels on each skip connection")
      ->capture_default_str();
  cmd->add_option("--input-channels", o.input_channels,
                  "Channels of the fixed noise input")
      ->capture_default_str();
  cmd->add_option("--input-noise", o.input_noise,
                  "Amplitude of the uniform base input")
      ->capture_default_str();
  cmd->add_option("--perturb-sigma", o.perturb_sigma,
                  "Std-dev of the per-iteration input perturbation")
      ->capture_default_str();
  cmd->add_option("--lr", o.learning_rate, "Adam learning rate")
      ->capture_default_str();
  cmd->add_option("--max-iters", o.max_iterations,
                  "Optimization iteration cap")
      ->capture_default_str();
  cmd->add_option("--eval-every", o.eval_every,
                  "Iterations between snapshots")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Root random seed")->capture_default_str();
}

void add_stop_options(CLI::App* cmd, StopOptions& o) {
  cmd->add_option("--window", o.window, "Score smoothing window (steps)")
      ->capture_default_str();
  cmd->add_option("--patience", o.patience,
                  "Non-improving steps before the stop is declared")
      ->capture_default_str();
  cmd->add_option("--radius", o.radius,
                  "Raw-score search span around the smoothed peak")
      ->capture_default_str();
  cmd->add_option("--min-evals", o.min_evals,
                  "Scored steps required before stopping is permitted")
      ->capture_default_str();
}

dip::DipConfig to_dip_config(const DipOptions& o) {
  dip::DipConfig c = dip::DipConfig::with_scales(o.depth, o.filters, o.skip_filters);
  c.input_channels = o.input_channels;
  c.input_noise_amplitude = o.input_noise;
  c.perturb_sigma = o.perturb_sigma;
  c.learning_rate = o.learning_rate;
  c.max_iterations = o.max_iterations;
  c.eval_every = o.eval_every;
  c.seed = o.seed;
  c.validate();
  return c;
}

stopctl::StopPolicy to_stop_policy(const StopOptions& o) {
  stopctl::StopPolicy p;
  p.smoothing_window = o.window;
  p.patience = o.patience;
  p.search_radius = o.radius;
  p.min_evals = o.min_evals;
  p.validate();
  return p;
}

json dip_config_json(const dip::DipConfig& c) {
  return json{{"depth", c.depth},
              {"filters_down", c.filters_down},
              {"filters_up", c.filters_up},
              {"filters_skip", c.filters_skip},
              {"kernel_down", c.kernel_down},
              {"kernel_up", c.kernel_up},
              {"kernel_skip", c.kernel_skip},
              {"input_channels", c.input_channels},
              {"input_noise_amplitude", c.input_noise_amplitude},
              {"perturb_sigma", c.perturb_sigma},
              {"learning_rate", c.learning_rate},
              {"max_iterations", c.max_iterations},
              {"eval_every", c.eval_every},
              {"seed", c.seed}};
}

json stop_policy_json(const stopctl::StopPolicy& p) {
  return json{{"smoothing_window", p.smoothing_window},
              {"patience", p.patience},
              {"search_radius", p.search_radius},
              {"min_evals", p.min_evals}};
}

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void log_line(const std::string& line) { std::cout << line << std::endl; }

void write_score_curve(const dip::ReconstructionTrace& trace,
                       const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "step,iteration,raw_score,smoothed_score\n";
  int step = 0;
  char buf[96];
  for (const auto& e : trace.entries) {
    if (!e.scored) continue;
    std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f\n", step, e.iteration,
                  e.raw_score, e.smoothed_score);
    out << buf;
    ++step;
  }
}

const dip::TraceEntry& entry_for_iteration(const dip::ReconstructionTrace& trace,
                                           int iteration) {
  for (const auto& e : trace.entries)
    if (e.iteration == iteration) return e;
  throw std::runtime_error("trace has no entry for iteration " +
                           std::to_string(iteration));
}

// ---------------------------------------------------------------------------
// denoise

struct DenoiseArgs {
  std::string input;
  std::string model;
  std::string out_dir;
  std::string warm_start;
  std::string save_state;
  bool keep_all = false;
  DipOptions dip;
  StopOptions stop;
};

int cmd_denoise(const DenoiseArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = now_iso8601();

  pipeline::AutoStopOptions opt;
  opt.dip = to_dip_config(a.dip);
  opt.policy = to_stop_policy(a.stop);

  Image noisy = read_png(a.input);
  quality::ScoreModel model = quality::load_model(a.model);

  dip::NetworkState warm;
  if (!a.warm_start.empty()) {
    warm = dip::load_state(a.warm_start);
    opt.warm_start = &warm;
  }

  const fs::path out_dir(a.out_dir);
  opt.snapshot_dir = out_dir / "snapshots";
  fs::create_directories(opt.snapshot_dir);

  pipeline::AutoStopRun run = pipeline::run_autostop(noisy, model, opt);

  const auto& chosen = entry_for_iteration(run.trace, run.chosen_iteration);
  fs::copy_file(opt.snapshot_dir / chosen.snapshot_ref,
                out_dir / "denoised.png", fs::copy_options::overwrite_existing);
  if (!a.keep_all) pipeline::prune_snapshots(opt.snapshot_dir, chosen.snapshot_ref);

  if (!a.save_state.empty()) dip::save_state(run.state, a.save_state);

  write_score_curve(run.trace, out_dir / "score_curve.csv");

  pipeline::RunTraceDoc doc;
  doc.trace = run.trace;
  doc.decision = run.decision;
  doc.effective_config = {
      {"command", "denoise"},
      {"input", a.input},
      {"model", a.model},
      {"out", a.out_dir},
      {"warm_start", a.warm_start},
      {"keep_all", a.keep_all},
      {"dip", dip_config_json(opt.dip)},
      {"stop", stop_policy_json(opt.policy)},
  };
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  doc.meta = {{"created_at", started}, {"duration_seconds", seconds}};
  pipeline::write_trace(doc, out_dir / "trace.json");

  log_line("chosen iteration: " + std::to_string(run.chosen_iteration));
  log_line("scored steps: " + std::to_string(run.decision.raw.size()));
  log_line(run.decision.no_peak_declared
               ? "stop: backstop fallback (no peak declared)"
               : "stop: declared at step " +
                     std::to_string(run.decision.declared_at));
  log_line("wrote " + (out_dir / "denoised.png").string());
  return run.decision.no_peak_declared ? kBackstopStop : kOk;
}

// ---------------------------------------------------------------------------
// make-corpus

struct MakeCorpusArgs {
  std::string pairs;
  std::string out_dir;
  float label_sigma = 1.5f;
  int label_samples = 100000;
  std::uint64_t label_seed = 1;
  int jobs = 1;
  DipOptions dip;
};

int cmd_make_corpus(const MakeCorpusArgs& a) {
  pipeline::PairManifest manifest = pipeline::load_pair_manifest(a.pairs);

  pipeline::BuildCorpusOptions opt;
  opt.dip_config = to_dip_config(a.dip);
  opt.label_sigma = a.label_sigma;
  opt.label_samples = a.label_samples;
  opt.label_seed = a.label_seed;
  opt.jobs = a.jobs;
  opt.log = log_line;

  pipeline::BuildCorpusSummary s =
      pipeline::build_corpus(manifest, opt, fs::path(a.out_dir));

  log_line("pairs: " + std::to_string(s.pairs_total) + " total, " +
           std::to_string(s.pairs_reconstructed) + " reconstructed, " +
           std::to_string(s.pairs_reused) + " reused");
  log_line("records: " + std::to_string(s.record_count) +
           (s.labels_reused ? " (labels reused)" : ""));
  for (const auto& f : s.failures) log_line("failed " + f);
  return s.failures.empty() ? kOk : kRuntimeError;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string corpus;
  std::string backbone;
  std::string out_path;
  std::uint64_t seed = 1;
  int stage1_epochs = 10;
  int stage2_epochs = 20;
  float learning_rate = 0.001f;
  int batch_size = 32;
  int input_resize = 256;
  int train_crop = 224;
  bool no_flip = false;
  float validation_fraction = 0.1f;
};

int cmd_train(const TrainArgs& a) {
  pipeline::CorpusManifest manifest = pipeline::load_corpus(a.corpus);
  std::vector<quality::TrainSample> samples =
      pipeline::corpus_to_train_samples(manifest, a.corpus);
  quality::BackboneCheckpoint backbone = quality::load_backbone(a.backbone);

  quality::TrainOptions opt;
  opt.schedule.stage1_epochs = a.stage1_epochs;
  opt.schedule.stage2_epochs = a.stage2_epochs;
  opt.schedule.learning_rate = a.learning_rate;
  opt.schedule.batch_size = a.batch_size;
  opt.schedule.input_resize = a.input_resize;
  opt.schedule.train_crop = a.train_crop;
  opt.schedule.random_flip = !a.no_flip;
  opt.schedule.validation_fraction = a.validation_fraction;
  opt.seed = a.seed;
  opt.corpus_id = manifest.corpus_id;
  opt.min_psnr = manifest.label_config.min_psnr;
  opt.max_psnr = manifest.label_config.max_psnr;
  opt.log = log_line;

  quality::ScoreModel model = quality::train_quality_model(samples, backbone, opt);
  quality::save_model(model, a.out_path);
  log_line("wrote " + a.out_path);
  return kOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string pairs;
  std::string model;
  std::string out_dir;
  bool keep_all = false;
  int jobs = 1;
  DipOptions dip;
  StopOptions stop;
};

int cmd_evaluate(const EvaluateArgs& a) {
  pipeline::PairManifest manifest = pipeline::load_pair_manifest(a.pairs);
  pipeline::check_paths_exist(manifest, /*require_clean=*/true);
  quality::ScoreModel base_model = quality::load_model(a.model);
  const dip::DipConfig base_config = to_dip_config(a.dip);
  const stopctl::StopPolicy policy = to_stop_policy(a.stop);
  const fs::path out_dir(a.out_dir);
  fs::create_directories(out_dir / "runs");

  const int n = static_cast<int>(manifest.records.size());
  std::vector<pipeline::EvalResult> results(n);
  std::vector<std::string> failures;
  std::mutex mu;
  std::atomic<int> next{0};

  const auto worker = [&](quality::ScoreModel& model) {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      const pipeline::PairRecord& rec = manifest.records[i];
      try {
        Image noisy = read_png(pipeline::resolve_path(manifest, rec.noisy_path));
        Image clean = read_png(pipeline::resolve_path(manifest, rec.clean_path));

        pipeline::AutoStopOptions opt;
        opt.dip = base_config;
        opt.dip.seed = derive_seed(base_config.seed, "pair:" + rec.id);
        opt.policy = policy;
        opt.clean = &clean;
        const fs::path run_dir = out_dir / "runs" / rec.id;
        opt.snapshot_dir = run_dir / "snapshots";
        fs::create_directories(opt.snapshot_dir);

        {
          std::lock_guard<std::mutex> lock(mu);
          log_line("evaluating " + rec.id);
        }
        pipeline::AutoStopRun run = pipeline::run_autostop(noisy, model, opt);

        pipeline::EvalResult r;
        r.id = rec.id;
        r.camera_tag = rec.camera_tag;
        r.chosen_iteration = run.chosen_iteration;
        r.scored_steps = static_cast<int>(run.decision.raw.size());
        r.psnr_chosen = run.psnr_curve.at(run.decision.final_index);
        r.psnr_best =
            *std::max_element(run.psnr_curve.begin(), run.psnr_curve.end());
        r.no_peak_declared = run.decision.no_peak_declared;
        results[i] = r;

        const auto& chosen = entry_for_iteration(run.trace, run.chosen_iteration);
        if (!a.keep_all)
          pipeline::prune_snapshots(opt.snapshot_dir, chosen.snapshot_ref);

        pipeline::RunTraceDoc doc;
        doc.trace = run.trace;
        doc.decision = run.decision;
        doc.effective_config = {{"command", "evaluate"},
                                {"pair", rec.id},
                                {"dip", dip_config_json(opt.dip)},
                                {"stop", stop_policy_json(opt.policy)}};
        doc.meta = {{"created_at", now_iso8601()}};
        pipeline::write_trace(doc, run_dir / "trace.json");

        std::ofstream curve(run_dir / "psnr_curve.csv");
        curve << "step,iteration,psnr_db\n";
        int step = 0;
        char buf[64];
        for (const auto& e : run.trace.entries) {
          if (!e.scored) continue;
          std::snprintf(buf, sizeof(buf), "%d,%d,%.4f\n", step, e.iteration,
                        run.psnr_curve.at(step));
          curve << buf;
          ++step;
        }
      } catch (const std::exception& ex) {
        std::lock_guard<std::mutex> lock(mu);
        failures.push_back(rec.id + ": " + ex.what());
      }
    }
  };

  const int jobs = std::max(1, a.jobs);
  if (jobs == 1) {
    worker(base_model);
  } else {
    // Each worker scores with its own copy of the model; inference shares no
    // state between threads that way.
    std::vector<quality::ScoreModel> models(jobs, base_model);
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t)
      threads.emplace_back([&, t] { worker(models[t]); });
    for (auto& th : threads) th.join();
  }

  std::vector<pipeline::EvalResult> ok;
  for (int i = 0; i < n; ++i)
    if (!results[i].id.empty()) ok.push_back(results[i]);
  pipeline::write_report(ok, out_dir / "report.csv");
  log_line("wrote " + (out_dir / "report.csv").string());
  for (const auto& f : failures) log_line("failed " + f);
  return failures.empty() ? kOk : kRuntimeError;
}

// ---------------------------------------------------------------------------
// warmstart-study

struct WarmstartArgs {
  std::string pairs;
  std::string typical_id;
  std::string out_dir;
  int typical_iterations = 0;
  float tolerance_db = 0.5f;
  DipOptions dip;
};

int cmd_warmstart_study(const WarmstartArgs& a) {
  pipeline::PairManifest manifest = pipeline::load_pair_manifest(a.pairs);
  const dip::DipConfig config = to_dip_config(a.dip);

  pipeline::WarmstartStudy study = pipeline::run_warmstart_study(
      manifest, a.typical_id, config, a.typical_iterations, a.tolerance_db,
      log_line);

  json pairs = json::array();
  for (const auto& p : study.pairs) {
    pairs.push_back({{"id", p.id},
                     {"cold_best_psnr_db", p.cold_best_psnr},
                     {"warm_best_psnr_db", p.warm_best_psnr},
                     {"best_delta_db", p.best_delta_db},
                     {"cold_steps_to_band", p.cold_steps_to_band},
                     {"warm_steps_to_band", p.warm_steps_to_band},
                     {"warm_reached_band", p.warm_reached_band},
                     {"reduction", p.reduction}});
  }
  json doc = {{"format", "warmstart-report-v1"},
              {"typical_id", a.typical_id},
              {"typical_iterations", study.typical_iterations},
              {"tolerance_db", study.tolerance_db},
              {"dip", dip_config_json(config)},
              {"pairs", pairs},
              {"mean_reduction", study.mean_reduction},
              {"reference_reduction", study.reference_reduction}};

  fs::create_directories(a.out_dir);
  const fs::path path = fs::path(a.out_dir) / "warmstart_report.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << "\n";

  char line[160];
  std::snprintf(line, sizeof(line),
                "mean step reduction: %.4f (reference figure %.2f)",
                study.mean_reduction, study.reference_reduction);
  log_line(line);
  log_line("wrote " + path.string());
  return kOk;
}

// ---------------------------------------------------------------------------
// init-backbone

struct InitBackboneArgs {
  std::string out_path;
  int steps = 200;
  int batch_size = 8;
  int image_size = 96;
  float learning_rate = 0.001f;
  std::uint64_t seed = 1;
  int stem_filters = 8;
  std::string blocks = "16:2,32:2,64:2,64:2";
};

std::vector<quality::BackboneSpec::Block> parse_blocks(const std::string& text) {
  std::vector<quality::BackboneSpec::Block> blocks;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty())
      throw std::invalid_argument("invalid --blocks entry: empty token");
    quality::BackboneSpec::Block b;
    const auto colon = token.find(':');
    try {
      b.out_channels = std::stoi(token.substr(0, colon));
      b.stride = colon == std::string::npos
                     ? 1
                     : std::stoi(token.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid --blocks entry: " + token);
    }
    blocks.push_back(b);
  }
  return blocks;
}

int cmd_init_backbone(const InitBackboneArgs& a) {
  quality::PretrainOptions opt;
  opt.spec.stem_filters = a.stem_filters;
  opt.spec.blocks = parse_blocks(a.blocks);
  opt.spec.validate();
  opt.steps = a.steps;
  opt.batch_size = a.batch_size;
  opt.image_size = a.image_size;
  opt.learning_rate = a.learning_rate;
  opt.seed = a.seed;
  opt.log = log_line;

  nn::ParamBlobs weights = quality::pretrain_backbone(opt);
  quality::save_backbone(opt.spec, weights, a.out_path);
  log_line("wrote " + a.out_path);
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Blind image denoiser with a learned stopping rule"};
  app.require_subcommand(1);

  DenoiseArgs denoise;
  CLI::App* cd = app.add_subcommand(
      "denoise", "Denoise one image, stopping automatically");
  cd->set_config("--config", "", "Read options from an INI file");
  cd->add_option("-i,--input", denoise.input, "Noisy input PNG")->required();
  cd->add_option("-m,--model", denoise.model, "Quality scorer weights")
      ->required();
  cd->add_option("-o,--out", denoise.out_dir, "Output directory")->required();
  cd->add_option("--warm-start", denoise.warm_start,
                 "Network state to initialize from");
  cd->add_option("--save-state", denoise.save_state,
                 "Write the fitted network state here");
  cd->add_flag("--keep-all", denoise.keep_all,
               "Keep every snapshot instead of only the chosen one");
  add_dip_options(cd, denoise.dip);
  add_stop_options(cd, denoise.stop);

  MakeCorpusArgs corpus;
  CLI::App* cc = app.add_subcommand(
      "make-corpus", "Reconstruct pairs and label snapshots for training");
  cc->set_config("--config", "", "Read options from an INI file");
  cc->add_option("-p,--pairs", corpus.pairs, "Pair manifest (JSONL)")
      ->required();
  cc->add_option("-o,--out", corpus.out_dir, "Corpus directory")->required();
  cc->add_option("--label-sigma", corpus.label_sigma,
                 "Std-dev of the per-record score distribution")
      ->capture_default_str();
  cc->add_option("--label-samples", corpus.label_samples,
                 "Monte-Carlo draws per label histogram")
      ->capture_default_str();
  cc->add_option("--label-seed", corpus.label_seed, "Label sampling seed")
      ->capture_default_str();
  cc->add_option("-j,--jobs", corpus.jobs, "Parallel reconstructions")
      ->capture_default_str();
  add_dip_options(cc, corpus.dip);

  TrainArgs train;
  CLI::App* ct = app.add_subcommand(
      "train", "Train the quality scorer on a labeled corpus");
  ct->set_config("--config", "", "Read options from an INI file");
  ct->add_option("-c,--corpus", train.corpus, "Corpus directory")->required();
  ct->add_option("-b,--backbone", train.backbone,
                 "Pretrained backbone checkpoint")
      ->required();
  ct->add_option("-o,--out", train.out_path, "Model output path")->required();
  ct->add_option("--seed", train.seed, "Training seed")->capture_default_str();
  ct->add_option("--stage1-epochs", train.stage1_epochs,
                 "Epochs with only the head trainable")
      ->capture_default_str();
  ct->add_option("--stage2-epochs", train.stage2_epochs,
                 "Epochs with the final block also trainable")
      ->capture_default_str();
  ct->add_option("--lr", train.learning_rate, "Adam learning rate")
      ->capture_default_str();
  ct->add_option("--batch-size", train.batch_size, "Mini-batch size")
      ->capture_default_str();
  ct->add_option("--resize", train.input_resize, "Resize edge before cropping")
      ->capture_default_str();
  ct->add_option("--crop", train.train_crop, "Square crop edge")
      ->capture_default_str();
  ct->add_flag("--no-flip", train.no_flip, "Disable horizontal-flip augmentation");
  ct->add_option("--val-fraction", train.validation_fraction,
                 "Fraction of samples held out by source image")
      ->capture_default_str();

  EvaluateArgs evaluate;
  CLI::App* ce = app.add_subcommand(
      "evaluate", "Run auto-stopped denoising over a paired set and report PSNR");
  ce->set_config("--config", "", "Read options from an INI file");
  ce->add_option("-p,--pairs", evaluate.pairs, "Pair manifest (JSONL)")
      ->required();
  ce->add_option("-m,--model", evaluate.model, "Quality scorer weights")
      ->required();
  ce->add_option("-o,--out", evaluate.out_dir, "Report directory")->required();
  ce->add_flag("--keep-all", evaluate.keep_all, "Keep every snapshot");
  ce->add_option("-j,--jobs", evaluate.jobs, "Parallel runs")
      ->capture_default_str();
  add_dip_options(ce, evaluate.dip);
  add_stop_options(ce, evaluate.stop);

  WarmstartArgs warmstart;
  CLI::App* cw = app.add_subcommand(
      "warmstart-study", "Compare cold and warm-started reconstructions");
  cw->set_config("--config", "", "Read options from an INI file");
  cw->add_option("-p,--pairs", warmstart.pairs, "Pair manifest (JSONL)")
      ->required();
  cw->add_option("--typical", warmstart.typical_id,
                 "Id of the pair whose fit seeds the warm starts")
      ->required();
  cw->add_option("-o,--out", warmstart.out_dir, "Report directory")->required();
  cw->add_option("--typical-iters", warmstart.typical_iterations,
                 "Iterations to fit the typical image (0 = none)")
      ->capture_default_str();
  cw->add_option("--tolerance-db", warmstart.tolerance_db,
                 "Band below the cold best PSNR that counts as reached")
      ->capture_default_str();
  add_dip_options(cw, warmstart.dip);

  InitBackboneArgs backbone;
  CLI::App* cb = app.add_subcommand(
      "init-backbone", "Pretrain scorer backbone weights on a synthetic task");
  cb->set_config("--config", "", "Read options from an INI file");
  cb->add_option("-o,--out", backbone.out_path, "Checkpoint output path")
      ->required();
  cb->add_option("--steps", backbone.steps,
                 "Pretraining steps (0 = random initialization)")
      ->capture_default_str();
  cb->add_option("--batch-size", backbone.batch_size, "Mini-batch size")
      ->capture_default_str();
  cb->add_option("--image-size", backbone.image_size,
                 "Edge of the synthetic training images")
      ->capture_default_str();
  cb->add_option("--lr", backbone.learning_rate, "Adam learning rate")
      ->capture_default_str();
  cb->add_option("--seed", backbone.seed, "Pretraining seed")
      ->capture_default_str();
  cb->add_option("--stem", backbone.stem_filters, "Stem convolution filters")
      ->capture_default_str();
  cb->add_option("--blocks", backbone.blocks,
                 "Block plan, e.g. 16:2,32:2,64:2,64:2")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (app.got_subcommand(cd)) return cmd_denoise(denoise);
    if (app.got_subcommand(cc)) return cmd_make_corpus(corpus);
    if (app.got_subcommand(ct)) return cmd_train(train);
    if (app.got_subcommand(ce)) return cmd_evaluate(evaluate);
    if (app.got_subcommand(cw)) return cmd_warmstart_study(warmstart);
    if (app.got_subcommand(cb)) return cmd_init_backbone(backbone);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kRuntimeError;
  }
  return kUsageError;  // unreachable with require_subcommand(1)
}

}  // namespace dipstop::cli
