#include "dipstop/pipeline/autostop.hpp"

#include <stdexcept>

#include "dipstop/labels.hpp"

namespace dipstop::pipeline {

AutoStopRun run_autostop(const Image& noisy, quality::ScoreModel& model,
                         const AutoStopOptions& options) {
  options.dip.validate();
  options.policy.validate();
  if (options.snapshot_dir.empty())
    throw std::invalid_argument("run_autostop: snapshot_dir required");

  AutoStopRun run;
  stopctl::StopController controller(options.policy);
  const auto observer = [&](int, const Image& snapshot) {
    dip::ObserverVerdict verdict;
    const quality::ScoreDistribution d =
        quality::predict_distribution(model, snapshot);
    verdict.scored = true;
    verdict.raw_score = quality::mean_score(d);
    verdict.stop = controller.feed(verdict.raw_score);
    verdict.smoothed_score = controller.last_smoothed();
    if (options.clean)
      run.psnr_curve.push_back(labels::compute_psnr(snapshot, *options.clean));
    return verdict;
  };

  dip::ReconstructResult result =
      dip::reconstruct(noisy, options.dip, options.warm_start, observer,
                       options.snapshot_dir);
  run.trace = std::move(result.trace);
  run.state = std::move(result.state);
  run.decision = controller.finalize();
  run.chosen_iteration =
      run.trace.entries.at(run.decision.final_index).iteration;
  run.trace.final_choice = run.chosen_iteration;
  return run;
}

void prune_snapshots(const std::filesystem::path& dir, const std::string& keep) {
  if (!std::filesystem::exists(dir)) return;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("snap_", 0) == 0 && name != keep)
      std::filesystem::remove(entry.path());
  }
}

}  // namespace dipstop::pipeline
