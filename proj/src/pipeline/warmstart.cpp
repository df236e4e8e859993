#include "dipstop/pipeline/warmstart.hpp"

#include <algorithm>
#include <stdexcept>

#include "dipstop/labels.hpp"
#include "dipstop/png_io.hpp"

namespace dipstop::pipeline {

namespace {

// Full-length reconstruction tracking per-step PSNR against the clean image.
std::vector<float> psnr_run(const Image& noisy, const Image& clean,
                            const dip::DipConfig& config,
                            const dip::NetworkState* warm) {
  std::vector<float> psnrs;
  const auto observer = [&](int, const Image& snapshot) {
    psnrs.push_back(labels::compute_psnr(snapshot, clean));
    return dip::ObserverVerdict{};
  };
  dip::reconstruct(noisy, config, warm, observer);
  return psnrs;
}

// First 1-based step whose PSNR reaches `threshold`; 0 when never reached.
int steps_to_reach(const std::vector<float>& psnrs, float threshold) {
  for (std::size_t i = 0; i < psnrs.size(); ++i)
    if (psnrs[i] >= threshold) return static_cast<int>(i) + 1;
  return 0;
}

}  // namespace

WarmstartStudy run_warmstart_study(
    const PairManifest& pairs, const std::string& typical_id,
    const dip::DipConfig& config, int typical_iterations, float tolerance_db,
    const std::function<void(const std::string&)>& log) {
  config.validate();
  if (typical_iterations < 0)
    throw std::invalid_argument("run_warmstart_study: negative typical_iterations");
  const PairRecord* typical = pairs.find(typical_id);
  if (!typical)
    throw std::runtime_error("run_warmstart_study: typical id \"" + typical_id +
                             "\" not in manifest");
  if (pairs.records.size() < 2)
    throw std::runtime_error("run_warmstart_study: need at least two pairs");
  check_paths_exist(pairs, /*require_clean=*/true);

  const auto say = [&](const std::string& s) {
    if (log) log(s);
  };

  // Fit the transferable state on the typical image. Zero iterations keeps
  // the fresh initialization (the null-transfer control).
  const Image typical_noisy = read_png(resolve_path(pairs, typical->noisy_path));
  dip::NetworkState state;
  if (typical_iterations == 0) {
    state = dip::build_network(config, config.seed, typical_noisy.height,
                               typical_noisy.width);
  } else {
    dip::DipConfig typical_cfg = config;
    typical_cfg.max_iterations = typical_iterations;
    state = dip::reconstruct(typical_noisy, typical_cfg, nullptr, {}).state;
  }
  say("typical \"" + typical_id + "\": trained " +
      std::to_string(typical_iterations) + " iterations");

  WarmstartStudy study;
  study.typical_iterations = typical_iterations;
  study.tolerance_db = tolerance_db;

  double reduction_sum = 0.0;
  int reduction_count = 0;
  for (const auto& pair : pairs.records) {
    if (pair.id == typical_id) continue;
    const Image noisy = read_png(resolve_path(pairs, pair.noisy_path));
    const Image clean = read_png(resolve_path(pairs, pair.clean_path));
    if (!noisy.same_shape(clean))
      throw std::runtime_error("pair \"" + pair.id + "\": clean/noisy shapes differ");

    const std::vector<float> cold = psnr_run(noisy, clean, config, nullptr);
    const std::vector<float> warm = psnr_run(noisy, clean, config, &state);

    WarmstartPairOutcome row;
    row.id = pair.id;
    row.cold_best_psnr = *std::max_element(cold.begin(), cold.end());
    row.warm_best_psnr = *std::max_element(warm.begin(), warm.end());
    row.best_delta_db = row.warm_best_psnr - row.cold_best_psnr;
    const float band = row.cold_best_psnr - tolerance_db;
    row.cold_steps_to_band = steps_to_reach(cold, band);
    row.warm_steps_to_band = steps_to_reach(warm, band);
    row.warm_reached_band = row.warm_steps_to_band > 0;
    if (row.warm_reached_band && row.cold_steps_to_band > 0) {
      row.reduction = 1.0f - static_cast<float>(row.warm_steps_to_band) /
                                 static_cast<float>(row.cold_steps_to_band);
      reduction_sum += row.reduction;
      ++reduction_count;
    }
    say("pair " + pair.id + ": cold best " + std::to_string(row.cold_best_psnr) +
        " dB in " + std::to_string(row.cold_steps_to_band) + " steps, warm " +
        (row.warm_reached_band
             ? "reached band in " + std::to_string(row.warm_steps_to_band) +
                   " steps"
             : "missed the band"));
    study.pairs.push_back(row);
  }
  if (reduction_count > 0)
    study.mean_reduction =
        static_cast<float>(reduction_sum / static_cast<double>(reduction_count));
  return study;
}

}  // namespace dipstop::pipeline
