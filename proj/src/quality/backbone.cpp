#include "dipstop/quality/backbone.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dipstop::quality {

namespace {

constexpr char kBackboneMagic[8] = {'D', 'I', 'P', 'B', 'K', 'B', '0', '1'};
constexpr float kReluSlope = 0.01f;

}  // namespace

BackboneSpec BackboneSpec::defaults() {
  BackboneSpec s;
  s.stem_filters = 8;
  s.blocks = {{16, 2}, {32, 2}, {64, 2}, {64, 2}};
  return s;
}

void BackboneSpec::validate() const {
  if (stem_filters < 1)
    throw std::invalid_argument("BackboneSpec.stem_filters: must be >= 1");
  if (blocks.empty())
    throw std::invalid_argument("BackboneSpec.blocks: at least one block required");
  for (const auto& b : blocks) {
    if (b.out_channels < 1)
      throw std::invalid_argument("BackboneSpec.blocks: out_channels must be >= 1");
    if (b.stride != 1 && b.stride != 2)
      throw std::invalid_argument("BackboneSpec.blocks: stride must be 1 or 2");
  }
  for (float v : input_std)
    if (v <= 0.0f)
      throw std::invalid_argument("BackboneSpec.input_std: must be positive");
}

std::string BackboneSpec::to_json() const {
  nlohmann::json j;
  j["stem_filters"] = stem_filters;
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : blocks)
    j["blocks"].push_back({{"out_channels", b.out_channels}, {"stride", b.stride}});
  j["input_mean"] = input_mean;
  j["input_std"] = input_std;
  return j.dump();
}

BackboneSpec BackboneSpec::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  BackboneSpec s;
  s.stem_filters = j.at("stem_filters").get<int>();
  s.blocks.clear();
  for (const auto& b : j.at("blocks"))
    s.blocks.push_back({b.at("out_channels").get<int>(), b.at("stride").get<int>()});
  if (j.contains("input_mean"))
    for (int i = 0; i < 3; ++i) s.input_mean[i] = j["input_mean"].at(i).get<float>();
  if (j.contains("input_std"))
    for (int i = 0; i < 3; ++i) s.input_std[i] = j["input_std"].at(i).get<float>();
  s.validate();
  return s;
}

std::uint64_t BackboneSpec::fingerprint() const {
  std::string repr = "qnet-arch-v1;" + std::to_string(stem_filters);
  for (const auto& b : blocks)
    repr += ";" + std::to_string(b.out_channels) + "x" + std::to_string(b.stride);
  return fnv1a64(repr);
}

DsBlock::DsBlock(int in_ch, int out_ch, int stride)
    : dw(in_ch, 3, stride),
      dw_norm(in_ch),
      dw_act(kReluSlope),
      pw(in_ch, out_ch, 1, 1, nn::Padding::kZero),
      pw_norm(out_ch),
      pw_act(kReluSlope) {}

nn::Tensor DsBlock::forward(const nn::Tensor& x, bool train) {
  nn::Tensor t = dw_act.forward(dw_norm.forward(dw.forward(x, train), train), train);
  return pw_act.forward(pw_norm.forward(pw.forward(t, train), train), train);
}

nn::Tensor DsBlock::backward(const nn::Tensor& dy) {
  nn::Tensor g = pw.backward(pw_norm.backward(pw_act.backward(dy)));
  return dw.backward(dw_norm.backward(dw_act.backward(g)));
}

void DsBlock::collect_params(const std::string& prefix,
                             std::vector<nn::ParamRef>& out) {
  dw.collect_params(prefix + ".dw", out);
  dw_norm.collect_params(prefix + ".dwnorm", out);
  pw.collect_params(prefix + ".pw", out);
  pw_norm.collect_params(prefix + ".pwnorm", out);
}

void DsBlock::init(Rng& rng) {
  dw.init(rng);
  pw.init(rng);
}

QualityNet::QualityNet(const BackboneSpec& spec)
    : spec_((spec.validate(), spec)),
      stem_(3, spec.stem_filters, 3, 2, nn::Padding::kZero),
      stem_norm_(spec.stem_filters),
      stem_act_(kReluSlope),
      fc_(spec.blocks.back().out_channels, kScoreBins) {
  int in_ch = spec_.stem_filters;
  for (const auto& b : spec_.blocks) {
    blocks_.emplace_back(in_ch, b.out_channels, b.stride);
    in_ch = b.out_channels;
  }
  feature_channels_ = in_ch;
}

void QualityNet::init(Rng& rng) {
  stem_.init(rng);
  for (auto& b : blocks_) b.init(rng);
  init_head(rng);
}

void QualityNet::init_head(Rng& rng) { fc_.init(rng); }

nn::Tensor QualityNet::forward(const nn::Tensor& x, bool train) {
  if (x.c != 3) throw std::invalid_argument("QualityNet: input must have 3 channels");
  nn::Tensor t = stem_act_.forward(stem_norm_.forward(stem_.forward(x, train), train), train);
  for (auto& b : blocks_) t = b.forward(t, train);
  t = pool_.forward(t, train);
  t = fc_.forward(t, train);
  return softmax_.forward(t, train);
}

void QualityNet::backward(const nn::Tensor& dy, TrainScope scope) {
  nn::Tensor g = fc_.backward(softmax_.backward(dy));
  if (scope == TrainScope::kHeadOnly) return;
  g = pool_.backward(g);
  if (scope == TrainScope::kHeadAndLastBlock) {
    blocks_.back().backward(g);
    return;
  }
  for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it)
    g = it->backward(g);
  stem_.backward(stem_norm_.backward(stem_act_.backward(g)));
}

std::vector<nn::ParamRef> QualityNet::backbone_params() {
  std::vector<nn::ParamRef> out;
  stem_.collect_params("stem", out);
  stem_norm_.collect_params("stemnorm", out);
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    blocks_[i].collect_params("block" + std::to_string(i), out);
  return out;
}

std::vector<nn::ParamRef> QualityNet::head_params() {
  std::vector<nn::ParamRef> out;
  fc_.collect_params("head.fc", out);
  return out;
}

std::vector<nn::ParamRef> QualityNet::all_params() {
  std::vector<nn::ParamRef> out = backbone_params();
  for (auto& p : head_params()) out.push_back(std::move(p));
  return out;
}

std::vector<nn::ParamRef> QualityNet::trainable_params(TrainScope scope) {
  if (scope == TrainScope::kAll) return all_params();
  std::vector<nn::ParamRef> out;
  if (scope == TrainScope::kHeadAndLastBlock)
    blocks_.back().collect_params("block" + std::to_string(blocks_.size() - 1), out);
  for (auto& p : head_params()) out.push_back(std::move(p));
  return out;
}

void save_backbone(const BackboneSpec& spec, const nn::ParamBlobs& weights,
                   const std::filesystem::path& path) {
  spec.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os.write(kBackboneMagic, sizeof(kBackboneMagic));
  nn::write_string(os, spec.to_json());
  nn::write_blobs(os, weights);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

BackboneCheckpoint load_backbone(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || !std::equal(magic, magic + 8, kBackboneMagic))
    throw std::runtime_error("not a backbone checkpoint: " + path.string());
  BackboneCheckpoint ckpt;
  ckpt.spec = BackboneSpec::from_json(nn::read_string(is));
  ckpt.weights = nn::read_blobs(is);
  return ckpt;
}

}  // namespace dipstop::quality
