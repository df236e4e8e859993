#pragma once

#include <cstdint>
#include <string>

#include "dipstop/image.hpp"
#include "dipstop/quality/distribution.hpp"
#include "dipstop/rng.hpp"

namespace dipstop::labels {

// Settings for turning full-reference PSNR into target score histograms.
// min/max PSNR are corpus-wide extremes; sigma and M shape the synthetic
// rating distribution drawn around the mapped mean.
struct LabelGenConfig {
  float sigma = 1.5f;
  int samples = 100000;  // M
  float min_psnr = 0.0f;
  float max_psnr = 0.0f;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument naming the field
};

// 10 * log10(1 / MSE) for [0,1]-valued images; identical images return the
// documented 100 dB cap instead of infinity.
inline constexpr float kPsnrCap = 100.0f;
float compute_psnr(const Image& a, const Image& b);

// The linear score map: psnr is clamped to [min_psnr, max_psnr], then
// mapped affinely so the extremes land on 2.5 and 7.5.
float psnr_to_mu(float psnr, const LabelGenConfig& config);

// Draws M samples from N(mu, sigma^2), clamps each into [0, 10), counts
// them into the ten unit bins, and normalizes by M. The float rounding
// residue is folded back into the histogram (overshoot shaved off the
// heaviest leading bin, last bin recomputed from the running total), so
// sequential summation of the probabilities yields exactly 1.0f.
quality::ScoreDistribution mu_to_distribution(float mu,
                                              const LabelGenConfig& config,
                                              Rng& rng);

// Rng stream for one record, derived from config.seed and the record key;
// relabeling with the same seed reproduces distributions bit-exactly.
Rng record_rng(const LabelGenConfig& config, const std::string& record_key);

}  // namespace dipstop::labels
