#pragma once

#include <array>

namespace dipstop::quality {

inline constexpr int kScoreBins = 10;

// Histogram over ten unit-wide score intervals. Bin i (0-based) covers
// scores [i, i+1) and carries the center score i + 0.5, so the centers run
// 0.5, 1.5, ..., 9.5.
struct ScoreDistribution {
  std::array<float, kScoreBins> probs{};

  static constexpr float bin_score(int i) { return static_cast<float>(i) + 0.5f; }

  // One-hot mass on bin `i`.
  static ScoreDistribution one_hot(int i);
};

// All probabilities finite and >= 0, summing to 1 within `tol`.
bool is_valid(const ScoreDistribution& d, float tol = 1e-6f);

// Probability-weighted mean of the bin centers; lies in [0.5, 9.5].
float mean_score(const ScoreDistribution& d);

// Root-mean-square difference of the two cumulative distributions:
// sqrt((1/N) * sum_k |CDF_p(k) - CDF_q(k)|^2). Symmetric, zero iff p = q.
// Accumulated and returned in double so the anchor values (0, sqrt(1/10),
// sqrt(9/10)) are exact to well below 1e-9.
double emd_loss(const ScoreDistribution& p, const ScoreDistribution& q);

// d(emd)/d(q.probs) for fixed target p; pairs with emd_loss for training.
ScoreDistribution emd_loss_grad(const ScoreDistribution& p,
                                const ScoreDistribution& q);

}  // namespace dipstop::quality
