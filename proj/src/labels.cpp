#include "dipstop/labels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace dipstop::labels {

void LabelGenConfig::validate() const {
  if (!(sigma > 0.0f))
    throw std::invalid_argument("LabelGenConfig.sigma: must be positive");
  if (samples < 1)
    throw std::invalid_argument("LabelGenConfig.samples: must be >= 1");
  if (!(max_psnr > min_psnr))
    throw std::invalid_argument(
        "LabelGenConfig.min_psnr/max_psnr: degenerate range (max must exceed min)");
}

float compute_psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("compute_psnr: shape mismatch");
  if (a.data.empty())
    throw std::invalid_argument("compute_psnr: empty image");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    acc += d * d;
  }
  const double mse = acc / static_cast<double>(a.data.size());
  if (mse <= 0.0) return kPsnrCap;
  return std::min<float>(kPsnrCap, static_cast<float>(10.0 * std::log10(1.0 / mse)));
}

float psnr_to_mu(float psnr, const LabelGenConfig& config) {
  config.validate();
  const double lo = config.min_psnr;
  const double hi = config.max_psnr;
  const double p = std::clamp(static_cast<double>(psnr), lo, hi);
  return static_cast<float>((p - lo) / (hi - lo) * 5.0 + 2.5);
}

quality::ScoreDistribution mu_to_distribution(float mu,
                                              const LabelGenConfig& config,
                                              Rng& rng) {
  config.validate();
  std::array<std::int64_t, quality::kScoreBins> counts{};
  for (int m = 0; m < config.samples; ++m) {
    double s = rng.normal(mu, config.sigma);
    s = std::clamp(s, 0.0, std::nextafter(10.0, 0.0));
    int bin = static_cast<int>(s);  // interval i covers [i, i+1)
    bin = std::clamp(bin, 0, quality::kScoreBins - 1);
    ++counts[bin];
  }
  quality::ScoreDistribution d;
  for (int i = 0; i < quality::kScoreBins; ++i)
    d.probs[i] = static_cast<float>(static_cast<double>(counts[i]) /
                                    static_cast<double>(config.samples));

  // The counts sum to M exactly, but the per-bin divisions each round, so
  // the float sum can sit an ulp or two off 1. Fold the residue back in:
  // shave any overshoot off the heaviest leading bin, then recompute the
  // last bin from the running prefix. With prefix in [0, 1] the closing
  // addition prefix + (1 - prefix) rounds to exactly 1 (the difference is
  // exact above 0.5, and below that the error stays under half an ulp of
  // 1), so sequential float summation yields exactly 1.0f.
  const int heaviest = static_cast<int>(
      std::max_element(counts.begin(), counts.end() - 1) - counts.begin());
  for (int pass = 0; pass < 16; ++pass) {
    float prefix = 0.0f;
    for (int i = 0; i + 1 < quality::kScoreBins; ++i) prefix += d.probs[i];
    if (prefix <= 1.0f) {
      d.probs[quality::kScoreBins - 1] = 1.0f - prefix;
      break;
    }
    d.probs[heaviest] -= prefix - 1.0f;
  }
  return d;
}

Rng record_rng(const LabelGenConfig& config, const std::string& record_key) {
  return Rng(config.seed).stream("label:" + record_key);
}

}  // namespace dipstop::labels
