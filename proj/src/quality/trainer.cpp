#include "dipstop/quality/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "dipstop/nn/adam.hpp"

namespace dipstop::quality {

namespace {

void log_line(const TrainOptions& opt, const std::string& line) {
  if (opt.log) opt.log(line);
}

// Resize + crop + flip + standardize one sample into row `b` of the batch.
void fill_batch_row(nn::Tensor& batch, int b, const Image& image,
                    const BackboneSpec& spec, const TrainSchedule& sched,
                    int off_x, int off_y, bool flip) {
  Image resized = resize_bilinear(image, sched.input_resize, sched.input_resize);
  Image patch = crop(resized, off_x, off_y, sched.train_crop, sched.train_crop);
  if (flip) patch = hflip(patch);
  const int side = sched.train_crop;
  for (int c = 0; c < 3; ++c) {
    const float mean = spec.input_mean[c];
    const float inv_std = 1.0f / spec.input_std[c];
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x)
        batch.at(b, c, y, x) = (patch.at(c, y, x) - mean) * inv_std;
  }
}

double validation_emd(ScoreModel& model, const std::vector<TrainSample>& corpus,
                      const std::vector<int>& val_idx) {
  double acc = 0.0;
  for (int i : val_idx) {
    const ScoreDistribution pred = predict_distribution(model, corpus[i].image);
    acc += emd_loss(corpus[i].target, pred);
  }
  return acc / static_cast<double>(val_idx.size());
}

float run_stage(ScoreModel& model, TrainScope scope, int epochs,
                const std::vector<int>& train_idx,
                const std::vector<int>& val_idx,
                const std::vector<TrainSample>& corpus,
                const TrainOptions& opt, const char* stage_name,
                StageLosses& losses) {
  const TrainSchedule& sched = opt.schedule;
  nn::Adam adam(model.net.trainable_params(scope), sched.learning_rate);
  const Rng root(opt.seed);
  const int max_off = sched.input_resize - sched.train_crop;

  float last_epoch_loss = 0.0f;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const std::string tag =
        std::string(stage_name) + "-epoch" + std::to_string(epoch);
    std::vector<int> order = train_idx;
    Rng order_rng = root.stream(tag + "-order");
    order_rng.shuffle(order);
    Rng aug_rng = root.stream(tag + "-aug");

    double epoch_acc = 0.0;
    for (std::size_t start = 0; start < order.size(); start += sched.batch_size) {
      const int bsz = static_cast<int>(
          std::min<std::size_t>(sched.batch_size, order.size() - start));
      nn::Tensor batch(bsz, 3, sched.train_crop, sched.train_crop);
      std::vector<const ScoreDistribution*> targets(bsz);
      for (int b = 0; b < bsz; ++b) {
        const TrainSample& sample = corpus[order[start + b]];
        const int off_x = max_off > 0 ? aug_rng.uniform_int(0, max_off) : 0;
        const int off_y = max_off > 0 ? aug_rng.uniform_int(0, max_off) : 0;
        const bool flip = sched.random_flip && aug_rng.bernoulli(0.5);
        fill_batch_row(batch, b, sample.image, model.net.spec(), sched, off_x,
                       off_y, flip);
        targets[b] = &sample.target;
      }

      nn::Tensor pred = model.net.forward(batch, /*train=*/true);
      nn::Tensor dy(bsz, kScoreBins, 1, 1);
      for (int b = 0; b < bsz; ++b) {
        ScoreDistribution p;
        for (int k = 0; k < kScoreBins; ++k) p.probs[k] = pred.at(b, k, 0, 0);
        epoch_acc += emd_loss(*targets[b], p);
        const ScoreDistribution g = emd_loss_grad(*targets[b], p);
        for (int k = 0; k < kScoreBins; ++k)
          dy.at(b, k, 0, 0) = g.probs[k] / static_cast<float>(bsz);
      }

      adam.zero_grad();
      model.net.backward(dy, scope);
      adam.step();
    }

    last_epoch_loss =
        static_cast<float>(epoch_acc / static_cast<double>(order.size()));
    losses.train.push_back(last_epoch_loss);
    std::string line = tag + ": train_emd=" + std::to_string(last_epoch_loss);
    if (!val_idx.empty()) {
      const float val =
          static_cast<float>(validation_emd(model, corpus, val_idx));
      losses.validation.push_back(val);
      line += " val_emd=" + std::to_string(val);
    }
    log_line(opt, line);
  }
  return last_epoch_loss;
}

}  // namespace

std::vector<int> validation_indices(const std::vector<TrainSample>& corpus,
                                    float fraction, Rng& rng) {
  if (fraction <= 0.0f || corpus.empty()) return {};
  std::set<std::string> unique_groups;
  for (const auto& s : corpus) unique_groups.insert(s.group_id);
  std::vector<std::string> groups(unique_groups.begin(), unique_groups.end());
  if (groups.size() < 2) return {};  // a split would empty one side
  rng.shuffle(groups);

  const std::size_t want = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(corpus.size())));
  std::set<std::string> held;
  std::size_t held_count = 0;
  for (const auto& g : groups) {
    if (held_count >= want || held.size() + 1 >= groups.size()) break;
    held.insert(g);
    for (const auto& s : corpus) held_count += (s.group_id == g) ? 1 : 0;
  }
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i)
    if (held.count(corpus[i].group_id)) out.push_back(i);
  return out;
}

ScoreModel train_quality_model(const std::vector<TrainSample>& corpus,
                               const BackboneCheckpoint& backbone,
                               const TrainOptions& options) {
  if (corpus.empty())
    throw std::invalid_argument("train_quality_model: corpus is empty");
  options.schedule.validate();
  for (const auto& s : corpus)
    if (s.image.channels != 3)
      throw std::invalid_argument("train_quality_model: samples must be RGB");

  ScoreModel model(backbone.spec);
  nn::import_params(backbone.weights, model.net.backbone_params());
  const Rng root(options.seed);
  Rng head_rng = root.stream("head-init");
  model.net.init_head(head_rng);

  Rng split_rng = root.stream("val-split");
  const std::vector<int> val_idx =
      validation_indices(corpus, options.schedule.validation_fraction, split_rng);
  std::vector<char> is_val(corpus.size(), 0);
  for (int i : val_idx) is_val[i] = 1;
  std::vector<int> train_idx;
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i)
    if (!is_val[i]) train_idx.push_back(i);
  log_line(options, "split: " + std::to_string(train_idx.size()) + " train / " +
                        std::to_string(val_idx.size()) + " validation");

  model.meta.corpus_id = options.corpus_id;
  model.meta.min_psnr = options.min_psnr;
  model.meta.max_psnr = options.max_psnr;
  model.meta.seed = options.seed;
  model.meta.schedule = options.schedule;

  run_stage(model, TrainScope::kHeadOnly, options.schedule.stage1_epochs,
            train_idx, val_idx, corpus, options, "stage1", model.meta.stage1);
  run_stage(model, TrainScope::kHeadAndLastBlock, options.schedule.stage2_epochs,
            train_idx, val_idx, corpus, options, "stage2", model.meta.stage2);
  return model;
}

}  // namespace dipstop::quality
