#include "dipstop/quality/distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace dipstop::quality {

ScoreDistribution ScoreDistribution::one_hot(int i) {
  if (i < 0 || i >= kScoreBins)
    throw std::out_of_range("ScoreDistribution::one_hot: bin out of range");
  ScoreDistribution d;
  d.probs[i] = 1.0f;
  return d;
}

bool is_valid(const ScoreDistribution& d, float tol) {
  double sum = 0.0;
  for (float p : d.probs) {
    if (!std::isfinite(p) || p < 0.0f) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= static_cast<double>(tol);
}

float mean_score(const ScoreDistribution& d) {
  double mu = 0.0;
  for (int i = 0; i < kScoreBins; ++i)
    mu += static_cast<double>(d.probs[i]) * ScoreDistribution::bin_score(i);
  return static_cast<float>(mu);
}

double emd_loss(const ScoreDistribution& p, const ScoreDistribution& q) {
  double cdf_p = 0.0, cdf_q = 0.0, acc = 0.0;
  for (int k = 0; k < kScoreBins; ++k) {
    cdf_p += p.probs[k];
    cdf_q += q.probs[k];
    const double d = cdf_p - cdf_q;
    acc += d * d;
  }
  return std::sqrt(acc / kScoreBins);
}

ScoreDistribution emd_loss_grad(const ScoreDistribution& p,
                                const ScoreDistribution& q) {
  // With D_k = CDF_p(k) - CDF_q(k) and E the loss, dE/dq_j =
  // -(1/(N*E)) * sum_{k >= j} D_k; the E in the denominator is floored to
  // keep the gradient finite when the distributions coincide.
  double diff[kScoreBins];
  double cdf_p = 0.0, cdf_q = 0.0, acc = 0.0;
  for (int k = 0; k < kScoreBins; ++k) {
    cdf_p += p.probs[k];
    cdf_q += q.probs[k];
    diff[k] = cdf_p - cdf_q;
    acc += diff[k] * diff[k];
  }
  const double e = std::max(std::sqrt(acc / kScoreBins), 1e-8);
  ScoreDistribution g;
  double tail = 0.0;
  for (int j = kScoreBins - 1; j >= 0; --j) {
    tail += diff[j];
    g.probs[j] = static_cast<float>(-tail / (kScoreBins * e));
  }
  return g;
}

}  // namespace dipstop::quality
