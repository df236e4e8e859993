#pragma once

#include <optional>
#include <vector>

namespace dipstop::stopctl {

// Knobs of the two-phase stopping rule, all counted in scored steps (one
// step per snapshot the engine hands out, not per optimizer iteration).
struct StopPolicy {
  int smoothing_window = 15;  // W: causal moving-average length
  int patience = 30;          // P: non-improving steps before declaring
  int search_radius = 30;     // R: raw-score search span around the peak
  int min_evals = 50;         // warm-up: earlier steps cannot hold the peak

  void validate() const;  // throws std::invalid_argument naming the field
};

// Causal moving average: out[t] = mean(raw[max(0, t-W+1) .. t]). Output
// at t depends only on samples up to t (real-time property).
std::vector<float> smooth(const std::vector<float>& raw, int window);

struct CoarsePeak {
  int peak_index = -1;   // index of the running smoothed maximum
  int declared_at = -1;  // step at which the patience rule fired
};

// Scans the smoothed stream in arrival order; returns the coarse peak once
// `patience` consecutive steps fail to exceed the running maximum. The
// first min_evals - 1 steps are warm-up: they are smoothed but never
// tracked as the maximum, so neither a lucky spike in the smoother's
// short-window phase nor an early transient (reconstruction outputs start
// as structured junk that can score deceptively well) can hold the peak or
// trigger a stop before the curve has risen. Ties break toward the
// earliest index. Empty optional = not yet (the engine iteration cap is
// the backstop).
std::optional<CoarsePeak> detect_coarse_peak(const std::vector<float>& smoothed,
                                             const StopPolicy& policy);

// Argmax of raw over [max(coarse_index - radius, min_index),
// coarse_index + radius] intersected with recorded indices; ties toward
// the earliest. `min_index` lets callers keep the refinement out of the
// warm-up region; the window must stay non-empty.
int fine_search(const std::vector<float>& raw_scores, int coarse_index,
                int radius, int min_index = 0);

struct StopDecision {
  int final_index = -1;          // fine-search winner (scored-step index)
  int coarse_index = -1;
  int declared_at = -1;          // -1 when the stream ended undeclared
  bool no_peak_declared = false; // backstop fallback was taken
  std::vector<float> raw;        // scores as consumed
  std::vector<float> smoothed;
};

// Online state machine over one reconstruction's score stream.
class StopController {
 public:
  explicit StopController(const StopPolicy& policy);

  // Consumes the next raw score. Returns true once the coarse peak is
  // declared; the caller should then command the engine to stop. Feeding
  // after declaration is a no-op that keeps returning true.
  bool feed(float raw_score);

  bool declared() const { return peak_.has_value(); }
  float last_smoothed() const;  // smoothed value at the latest step

  // Decision for the stream consumed so far. If no peak was declared, the
  // fallback searches around the smoothed argmax outside the warm-up
  // region (or the whole stream, when it ended inside the warm-up) and the
  // decision is flagged no_peak_declared.
  StopDecision finalize() const;

 private:
  StopPolicy policy_;
  std::vector<float> raw_;
  std::vector<float> smoothed_;
  int best_index_ = -1;
  double best_value_ = 0.0;
  int since_best_ = 0;
  std::optional<CoarsePeak> peak_;
};

// Offline convenience: feeds the stream until declaration (later samples
// stay unconsumed, mirroring the online stop) and finalizes.
StopDecision run_policy(const std::vector<float>& raw_scores,
                        const StopPolicy& policy);

}  // namespace dipstop::stopctl
