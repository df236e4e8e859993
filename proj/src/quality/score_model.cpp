#include "dipstop/quality/score_model.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dipstop::quality {

namespace {

constexpr char kModelMagic[8] = {'D', 'I', 'P', 'Q', 'N', 'E', 'T', '1'};

nlohmann::json losses_to_json(const StageLosses& s) {
  return {{"train", s.train}, {"validation", s.validation}};
}

StageLosses losses_from_json(const nlohmann::json& j) {
  StageLosses s;
  s.train = j.at("train").get<std::vector<float>>();
  s.validation = j.at("validation").get<std::vector<float>>();
  return s;
}

}  // namespace

void TrainSchedule::validate() const {
  if (stage1_epochs < 0 || stage2_epochs < 0)
    throw std::invalid_argument("TrainSchedule: epoch counts must be >= 0");
  if (stage1_epochs + stage2_epochs < 1)
    throw std::invalid_argument("TrainSchedule: at least one epoch required");
  if (learning_rate <= 0.0f)
    throw std::invalid_argument("TrainSchedule.learning_rate: must be positive");
  if (batch_size < 1)
    throw std::invalid_argument("TrainSchedule.batch_size: must be >= 1");
  if (train_crop < 1 || input_resize < train_crop)
    throw std::invalid_argument(
        "TrainSchedule: need input_resize >= train_crop >= 1");
  if (validation_fraction < 0.0f || validation_fraction >= 1.0f)
    throw std::invalid_argument(
        "TrainSchedule.validation_fraction: must be in [0, 1)");
}

std::string ModelMetadata::to_json() const {
  nlohmann::json j;
  j["format"] = "quality-model-meta-v1";
  j["corpus_id"] = corpus_id;
  j["min_psnr"] = min_psnr;
  j["max_psnr"] = max_psnr;
  j["seed"] = seed;
  j["schedule"] = {{"stage1_epochs", schedule.stage1_epochs},
                   {"stage2_epochs", schedule.stage2_epochs},
                   {"learning_rate", schedule.learning_rate},
                   {"batch_size", schedule.batch_size},
                   {"input_resize", schedule.input_resize},
                   {"train_crop", schedule.train_crop},
                   {"random_flip", schedule.random_flip},
                   {"validation_fraction", schedule.validation_fraction}};
  j["stage1"] = losses_to_json(stage1);
  j["stage2"] = losses_to_json(stage2);
  return j.dump(2);
}

ModelMetadata ModelMetadata::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ModelMetadata m;
  m.corpus_id = j.at("corpus_id").get<std::string>();
  m.min_psnr = j.at("min_psnr").get<float>();
  m.max_psnr = j.at("max_psnr").get<float>();
  m.seed = j.at("seed").get<std::uint64_t>();
  const auto& s = j.at("schedule");
  m.schedule.stage1_epochs = s.at("stage1_epochs").get<int>();
  m.schedule.stage2_epochs = s.at("stage2_epochs").get<int>();
  m.schedule.learning_rate = s.at("learning_rate").get<float>();
  m.schedule.batch_size = s.at("batch_size").get<int>();
  m.schedule.input_resize = s.at("input_resize").get<int>();
  m.schedule.train_crop = s.at("train_crop").get<int>();
  m.schedule.random_flip = s.at("random_flip").get<bool>();
  m.schedule.validation_fraction = s.at("validation_fraction").get<float>();
  m.stage1 = losses_from_json(j.at("stage1"));
  m.stage2 = losses_from_json(j.at("stage2"));
  return m;
}

nn::Tensor preprocess_for_scoring(const BackboneSpec& spec, int resize_to,
                                  int crop_to, const Image& image) {
  if (image.channels != 3)
    throw std::invalid_argument("preprocess_for_scoring: image must have 3 channels");
  Image resized = resize_bilinear(image, resize_to, resize_to);
  Image cropped = center_crop(resized, crop_to);
  nn::Tensor t(1, 3, crop_to, crop_to);
  for (int c = 0; c < 3; ++c) {
    const float mean = spec.input_mean[c];
    const float inv_std = 1.0f / spec.input_std[c];
    for (int y = 0; y < crop_to; ++y)
      for (int x = 0; x < crop_to; ++x)
        t.at(0, c, y, x) = (cropped.at(c, y, x) - mean) * inv_std;
  }
  return t;
}

ScoreDistribution predict_distribution(ScoreModel& model, const Image& image) {
  const nn::Tensor input =
      preprocess_for_scoring(model.net.spec(), model.meta.schedule.input_resize,
                             model.meta.schedule.train_crop, image);
  const nn::Tensor out = model.net.forward(input, /*train=*/false);
  ScoreDistribution d;
  for (int i = 0; i < kScoreBins; ++i) d.probs[i] = out.at(0, i, 0, 0);
  return d;
}

void save_model(ScoreModel& model, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os.write(kModelMagic, sizeof(kModelMagic));
  nn::write_string(os, model.net.spec().to_json());
  nn::write_blobs(os, nn::export_params(model.net.all_params()));
  if (!os) throw std::runtime_error("write failed: " + path.string());

  std::ofstream meta(path.string() + ".meta.json");
  if (!meta) throw std::runtime_error("cannot write model metadata sidecar");
  meta << model.meta.to_json() << "\n";
}

ScoreModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || !std::equal(magic, magic + 8, kModelMagic))
    throw std::runtime_error("not a quality-model file: " + path.string());
  const BackboneSpec spec = BackboneSpec::from_json(nn::read_string(is));
  ScoreModel model(spec);
  nn::import_params(nn::read_blobs(is), model.net.all_params());

  const std::filesystem::path meta_path(path.string() + ".meta.json");
  if (std::filesystem::exists(meta_path)) {
    std::ifstream meta(meta_path);
    std::string text((std::istreambuf_iterator<char>(meta)),
                     std::istreambuf_iterator<char>());
    model.meta = ModelMetadata::from_json(text);
  }
  return model;
}

}  // namespace dipstop::quality
