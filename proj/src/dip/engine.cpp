#include "dipstop/dip/engine.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "dipstop/nn/adam.hpp"
#include "dipstop/png_io.hpp"

namespace dipstop::dip {

namespace {

constexpr char kStateMagic[8] = {'D', 'I', 'P', 'S', 'T', 'A', 'T', 'E'};
constexpr std::uint32_t kStateVersion = 1;

int padded_side(int side, int depth) {
  const int m = 1 << depth;
  return (side + m - 1) / m * m;
}

std::string snapshot_name(int iteration) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06d.png", iteration);
  return buf;
}

}  // namespace

nn::Tensor image_to_tensor(const Image& img) {
  nn::Tensor t(1, img.channels, img.height, img.width);
  std::copy(img.data.begin(), img.data.end(), t.v.begin());
  return t;
}

Image tensor_to_image(const nn::Tensor& t) {
  if (t.n != 1) throw std::invalid_argument("tensor_to_image: batch must be 1");
  Image img(t.h, t.w, t.c);
  std::copy(t.v.begin(), t.v.end(), img.data.begin());
  return img;
}

NetworkState build_network(const DipConfig& config, std::uint64_t seed,
                           int height, int width) {
  config.validate();
  if (height < 1 || width < 1)
    throw std::invalid_argument("build_network: image dimensions must be positive");
  const int ph = padded_side(height, config.depth);
  const int pw = padded_side(width, config.depth);

  DipNetwork net(config);
  net.check_spatial(ph, pw);
  Rng root(seed);
  Rng weight_rng = root.stream("dip-weights");
  net.init(weight_rng);

  NetworkState state;
  state.fingerprint = config.fingerprint();
  state.weights = nn::export_params(net.params());

  Rng input_rng = root.stream("dip-base-input");
  state.base_input = nn::Tensor(1, config.input_channels, ph, pw);
  for (auto& v : state.base_input.v)
    v = static_cast<float>(input_rng.uniform() * config.input_noise_amplitude);
  return state;
}

nn::Tensor perturb_input(const nn::Tensor& base_input, float perturb_sigma,
                         Rng& rng) {
  if (perturb_sigma < 0)
    throw std::invalid_argument("perturb_input: perturb_sigma must be >= 0");
  nn::Tensor out = base_input;
  if (perturb_sigma > 0)
    for (auto& v : out.v) v += static_cast<float>(rng.normal(0.0, perturb_sigma));
  return out;
}

float l2_loss(const Image& output, const Image& reference) {
  if (!output.same_shape(reference))
    throw std::invalid_argument("l2_loss: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < output.data.size(); ++i) {
    const double d = static_cast<double>(output.data[i]) - reference.data[i];
    acc += d * d;
  }
  return static_cast<float>(acc / static_cast<double>(output.data.size()));
}

void check_warm_start(const NetworkState& state, const DipConfig& config,
                      int height, int width) {
  if (state.fingerprint != config.fingerprint())
    throw std::runtime_error(
        "warm start rejected: architecture fingerprint mismatch");
  const int ph = padded_side(height, config.depth);
  const int pw = padded_side(width, config.depth);
  if (state.base_input.c != config.input_channels ||
      state.base_input.h != ph || state.base_input.w != pw)
    throw std::runtime_error(
        "warm start rejected: saved base input is " +
        std::to_string(state.base_input.h) + "x" +
        std::to_string(state.base_input.w) + ", run needs " +
        std::to_string(ph) + "x" + std::to_string(pw));
}

ReconstructResult reconstruct(const Image& noisy, const DipConfig& config,
                              const NetworkState* warm_start,
                              const SnapshotObserver& observer,
                              const std::filesystem::path& snapshot_dir) {
  config.validate();
  if (noisy.channels != 3)
    throw std::invalid_argument("reconstruct: image must have 3 channels");
  if (!in_unit_range(noisy))
    throw std::invalid_argument("reconstruct: image values must lie in [0, 1]");

  ReconstructResult result;
  if (warm_start) {
    check_warm_start(*warm_start, config, noisy.height, noisy.width);
    result.state = *warm_start;
    result.state.fingerprint = config.fingerprint();
  } else {
    result.state = build_network(config, config.seed, noisy.height, noisy.width);
  }

  DipNetwork net(config);
  nn::Tensor& base = result.state.base_input;
  net.check_spatial(base.h, base.w);
  nn::import_params(result.state.weights, net.params());

  if (!snapshot_dir.empty()) std::filesystem::create_directories(snapshot_dir);

  const int h = noisy.height;
  const int w = noisy.width;
  // Loss and gradient cover only the original image region; the reflection
  // padding added to reach a multiple of 2^depth carries zero gradient.
  const std::size_t region = static_cast<std::size_t>(3) * h * w;

  nn::Adam adam(net.params(), config.learning_rate);
  Rng perturb_rng = Rng(config.seed).stream("dip-perturb");

  ReconstructionTrace& trace = result.trace;
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    nn::Tensor input = perturb_input(base, config.perturb_sigma, perturb_rng);
    nn::Tensor out = net.forward(input, /*train=*/true);

    double acc = 0.0;
    nn::Tensor dout(out.n, out.c, out.h, out.w);
    const float scale = 2.0f / static_cast<float>(region);
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const float d = out.at(0, c, y, x) - noisy.at(c, y, x);
          acc += static_cast<double>(d) * d;
          dout.at(0, c, y, x) = scale * d;
        }
    const float loss = static_cast<float>(acc / static_cast<double>(region));
    if (!std::isfinite(loss))
      throw std::runtime_error("reconstruct: loss diverged (non-finite) at iteration " +
                               std::to_string(iter));
    trace.loss_curve.push_back(loss);

    adam.zero_grad();
    net.backward(dout);
    adam.step();

    if (iter % config.eval_every != 0) continue;

    Image snap(h, w, 3);
    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) snap.at(c, y, x) = out.at(0, c, y, x);
    snap.clamp01();

    TraceEntry entry;
    entry.iteration = iter;
    if (!snapshot_dir.empty()) {
      entry.snapshot_ref = snapshot_name(iter);
      write_png((snapshot_dir / entry.snapshot_ref).string(), snap);
    }
    bool stop = false;
    if (observer) {
      const ObserverVerdict verdict = observer(iter, snap);
      entry.scored = verdict.scored;
      entry.raw_score = verdict.raw_score;
      entry.smoothed_score = verdict.smoothed_score;
      stop = verdict.stop;
    }
    trace.entries.push_back(std::move(entry));
    if (stop) break;
  }

  if (!trace.entries.empty()) trace.final_choice = trace.entries.back().iteration;
  result.state.weights = nn::export_params(net.params());
  return result;
}

void save_state(const NetworkState& state, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os.write(kStateMagic, sizeof(kStateMagic));
  nn::write_u32(os, kStateVersion);
  nn::write_u64(os, state.fingerprint);
  nn::write_u32(os, static_cast<std::uint32_t>(state.base_input.n));
  nn::write_u32(os, static_cast<std::uint32_t>(state.base_input.c));
  nn::write_u32(os, static_cast<std::uint32_t>(state.base_input.h));
  nn::write_u32(os, static_cast<std::uint32_t>(state.base_input.w));
  nn::write_floats(os, state.base_input.v);
  nn::write_blobs(os, state.weights);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

NetworkState load_state(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || !std::equal(magic, magic + 8, kStateMagic))
    throw std::runtime_error("corrupt network state file: " + path.string());
  if (nn::read_u32(is) != kStateVersion)
    throw std::runtime_error("unsupported network state version: " + path.string());
  NetworkState state;
  state.fingerprint = nn::read_u64(is);
  const int n = static_cast<int>(nn::read_u32(is));
  const int c = static_cast<int>(nn::read_u32(is));
  const int h = static_cast<int>(nn::read_u32(is));
  const int w = static_cast<int>(nn::read_u32(is));
  state.base_input = nn::Tensor(n, c, h, w);
  state.base_input.v = nn::read_floats(is);
  if (state.base_input.v.size() != static_cast<std::size_t>(n) * c * h * w)
    throw std::runtime_error("corrupt network state file: " + path.string());
  state.weights = nn::read_blobs(is);
  return state;
}

}  // namespace dipstop::dip
