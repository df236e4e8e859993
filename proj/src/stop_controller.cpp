#include "dipstop/stop_controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace dipstop::stopctl {

void StopPolicy::validate() const {
  if (smoothing_window < 1)
    throw std::invalid_argument("StopPolicy.smoothing_window: must be >= 1");
  if (patience < 1)
    throw std::invalid_argument("StopPolicy.patience: must be >= 1");
  if (search_radius < 0)
    throw std::invalid_argument("StopPolicy.search_radius: must be >= 0");
  if (min_evals < smoothing_window)
    throw std::invalid_argument(
        "StopPolicy.min_evals: must be >= smoothing_window");
}

std::vector<float> smooth(const std::vector<float>& raw, int window) {
  if (window < 1) throw std::invalid_argument("smooth: window must be >= 1");
  std::vector<float> out(raw.size());
  for (std::size_t t = 0; t < raw.size(); ++t) {
    const std::size_t lo = t + 1 >= static_cast<std::size_t>(window)
                               ? t + 1 - static_cast<std::size_t>(window)
                               : 0;
    double acc = 0.0;
    for (std::size_t i = lo; i <= t; ++i) acc += raw[i];
    out[t] = static_cast<float>(acc / static_cast<double>(t - lo + 1));
  }
  return out;
}

std::optional<CoarsePeak> detect_coarse_peak(const std::vector<float>& smoothed,
                                             const StopPolicy& policy) {
  policy.validate();
  // Warm-up steps never hold the running maximum. Without the mask, a
  // lucky spike in the smoother's short-window phase — or an early
  // transient that scores deceptively well — becomes a sticky maximum that
  // either fires the patience rule before the curve has risen or shadows
  // the genuine peak for the rest of the run.
  const int first_eligible = policy.min_evals - 1;
  int best = -1;
  double best_value = 0.0;
  int since_best = 0;
  for (std::size_t t = 0; t < smoothed.size(); ++t) {
    if (static_cast<int>(t) < first_eligible) continue;
    if (best < 0 || smoothed[t] > best_value) {
      best = static_cast<int>(t);
      best_value = smoothed[t];
      since_best = 0;
    } else {
      ++since_best;
    }
    if (since_best >= policy.patience)
      return CoarsePeak{best, static_cast<int>(t)};
  }
  return std::nullopt;
}

int fine_search(const std::vector<float>& raw_scores, int coarse_index,
                int radius, int min_index) {
  if (raw_scores.empty())
    throw std::invalid_argument("fine_search: empty score stream");
  if (coarse_index < 0 ||
      coarse_index >= static_cast<int>(raw_scores.size()))
    throw std::invalid_argument("fine_search: coarse index outside stream");
  if (radius < 0) throw std::invalid_argument("fine_search: negative radius");
  if (min_index < 0)
    throw std::invalid_argument("fine_search: negative min_index");
  const int lo = std::max(min_index, coarse_index - radius);
  const int hi = std::min(static_cast<int>(raw_scores.size()) - 1,
                          coarse_index + radius);
  if (lo > hi)
    throw std::invalid_argument("fine_search: window is empty");
  int arg = lo;
  for (int i = lo + 1; i <= hi; ++i)
    if (raw_scores[i] > raw_scores[arg]) arg = i;
  return arg;
}

StopController::StopController(const StopPolicy& policy) : policy_(policy) {
  policy_.validate();
}

bool StopController::feed(float raw_score) {
  if (peak_) return true;
  raw_.push_back(raw_score);
  const int t = static_cast<int>(raw_.size()) - 1;
  const int lo = std::max(0, t - policy_.smoothing_window + 1);
  double acc = 0.0;
  for (int i = lo; i <= t; ++i) acc += raw_[i];
  const float s = static_cast<float>(acc / static_cast<double>(t - lo + 1));
  smoothed_.push_back(s);

  // Same warm-up mask as detect_coarse_peak: early steps are recorded but
  // cannot hold the running maximum.
  if (t < policy_.min_evals - 1) return false;
  if (best_index_ < 0 || s > best_value_) {
    best_index_ = t;
    best_value_ = s;
    since_best_ = 0;
  } else {
    ++since_best_;
  }
  if (since_best_ >= policy_.patience) peak_ = CoarsePeak{best_index_, t};
  return peak_.has_value();
}

float StopController::last_smoothed() const {
  if (smoothed_.empty())
    throw std::logic_error("StopController: no scores fed yet");
  return smoothed_.back();
}

StopDecision StopController::finalize() const {
  if (raw_.empty())
    throw std::logic_error("StopController: cannot finalize an empty stream");
  // Streams that ended inside the warm-up degrade to an unmasked search.
  const int first_eligible =
      static_cast<int>(raw_.size()) >= policy_.min_evals ? policy_.min_evals - 1
                                                         : 0;
  StopDecision d;
  d.raw = raw_;
  d.smoothed = smoothed_;
  if (peak_) {
    d.coarse_index = peak_->peak_index;
    d.declared_at = peak_->declared_at;
  } else {
    // Stream ended first: fall back to the smoothed argmax outside the
    // warm-up region.
    d.no_peak_declared = true;
    d.coarse_index = first_eligible +
                     static_cast<int>(std::max_element(
                                          smoothed_.begin() + first_eligible,
                                          smoothed_.end()) -
                                      (smoothed_.begin() + first_eligible));
  }
  d.final_index =
      fine_search(raw_, d.coarse_index, policy_.search_radius, first_eligible);
  return d;
}

StopDecision run_policy(const std::vector<float>& raw_scores,
                        const StopPolicy& policy) {
  StopController ctl(policy);
  for (float s : raw_scores)
    if (ctl.feed(s)) break;
  return ctl.finalize();
}

}  // namespace dipstop::stopctl
