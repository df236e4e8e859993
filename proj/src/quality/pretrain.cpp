#include "dipstop/quality/pretrain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dipstop/nn/adam.hpp"
#include "dipstop/synth.hpp"

namespace dipstop::quality {

namespace {

// Maps quality level k (0 = worst, 9 = best) onto a degradation that spans
// the appearance range of iterative reconstruction outputs: the worst levels
// are heavily smoothed and overlaid with mid-frequency blotches (the look of
// an unconverged output), the middle levels are mildly blurred, and the best
// levels are sharp with a trace of residual noise. Each component is
// jittered so adjacent levels overlap and the network must learn a robust
// severity ordering rather than exact parameter values.
//
// `coarse` in [0, 1] exaggerates the degradations. The subtle target range
// is too faint to learn from scratch — its level signal is buried under
// scene-to-scene variation — so training starts coarse and anneals down.
Image degrade_to_level(const Image& clean, int level, float coarse, Rng& rng) {
  const float t = static_cast<float>(level) / (kScoreBins - 1);
  const float s = 1.0f - t;  // severity
  const float blur_sigma =
      (1.5f + 2.5f * coarse) * s * static_cast<float>(rng.uniform(0.85, 1.15));
  const float blotch_amp =
      0.08f * (1.0f - coarse) * s * static_cast<float>(rng.uniform(0.7, 1.3));
  const float noise_sigma = (0.002f + (0.020f + 0.080f * coarse) * t) *
                            static_cast<float>(rng.uniform(0.85, 1.15));

  Image out = gaussian_blur(clean, blur_sigma);
  if (blotch_amp > 0.0f) {
    // Unit-variance blotch field: blurred white noise, renormalized because
    // the low-pass shrinks its amplitude.
    Image field(clean.height, clean.width, clean.channels);
    for (float& v : field.data) v = static_cast<float>(rng.normal());
    field = gaussian_blur(field, 1.5f);
    double mean = 0.0, sq = 0.0;
    for (float v : field.data) {
      mean += v;
      sq += static_cast<double>(v) * v;
    }
    mean /= static_cast<double>(field.data.size());
    const double sd = std::sqrt(
        std::max(sq / static_cast<double>(field.data.size()) - mean * mean,
                 1e-12));
    const float scale = blotch_amp / static_cast<float>(sd);
    for (std::size_t i = 0; i < out.data.size(); ++i)
      out.data[i] += scale * (field.data[i] - static_cast<float>(mean));
  }
  out = synth::add_gaussian_noise(out, noise_sigma, rng);  // also clamps
  return out;
}

}  // namespace

nn::ParamBlobs pretrain_backbone(const PretrainOptions& options) {
  options.spec.validate();
  if (options.steps < 0)
    throw std::invalid_argument("pretrain_backbone: steps must be >= 0");
  if (options.batch_size < 1)
    throw std::invalid_argument("pretrain_backbone: batch_size must be >= 1");
  if (options.image_size < 32)
    throw std::invalid_argument("pretrain_backbone: image_size must be >= 32");

  QualityNet net(options.spec);
  const Rng root(options.seed);
  Rng init_rng = root.stream("backbone-init");
  net.init(init_rng);

  if (options.steps > 0) {
    nn::Adam adam(net.trainable_params(TrainScope::kAll), options.learning_rate);
    Rng data_rng = root.stream("pretext-data");
    const int side = options.image_size;
    for (int step = 0; step < options.steps; ++step) {
      // Coarse-to-fine: fully exaggerated for the first fifth of the run,
      // annealed linearly to the subtle target range by the 60% mark.
      const float progress =
          options.steps > 1
              ? static_cast<float>(step) / static_cast<float>(options.steps - 1)
              : 1.0f;
      const float coarse = std::clamp(1.0f - (progress - 0.2f) / 0.4f, 0.0f, 1.0f);

      nn::Tensor batch(options.batch_size, 3, side, side);
      std::vector<int> levels(options.batch_size);
      // One scene per batch, degraded to several levels: scene-specific
      // gradient components then largely cancel across the batch, leaving
      // the level contrast — the signal is far smaller than scene-to-scene
      // variation, and per-scene batches are what make it learnable.
      Image scene = synth::random_scene(side, side, data_rng);
      for (int b = 0; b < options.batch_size; ++b) {
        const int level = data_rng.uniform_int(0, kScoreBins - 1);
        levels[b] = level;
        Image noisy = degrade_to_level(scene, level, coarse, data_rng);
        for (int c = 0; c < 3; ++c) {
          const float mean = options.spec.input_mean[c];
          const float inv_std = 1.0f / options.spec.input_std[c];
          for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x)
              batch.at(b, c, y, x) = (noisy.at(c, y, x) - mean) * inv_std;
        }
      }

      nn::Tensor pred = net.forward(batch, /*train=*/true);
      nn::Tensor dy(options.batch_size, kScoreBins, 1, 1);
      double loss_acc = 0.0;
      for (int b = 0; b < options.batch_size; ++b) {
        ScoreDistribution p;
        for (int k = 0; k < kScoreBins; ++k) p.probs[k] = pred.at(b, k, 0, 0);
        const ScoreDistribution target = ScoreDistribution::one_hot(levels[b]);
        loss_acc += emd_loss(target, p);
        const ScoreDistribution g = emd_loss_grad(target, p);
        for (int k = 0; k < kScoreBins; ++k)
          dy.at(b, k, 0, 0) = g.probs[k] / static_cast<float>(options.batch_size);
      }
      adam.zero_grad();
      net.backward(dy, TrainScope::kAll);
      adam.step();

      if (options.log && (step + 1) % 25 == 0)
        options.log("pretext step " + std::to_string(step + 1) + "/" +
                    std::to_string(options.steps) + ": emd=" +
                    std::to_string(loss_acc / options.batch_size));
    }
  }
  return nn::export_params(net.backbone_params());
}

}  // namespace dipstop::quality
