#include "dipstop/dip/network.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dipstop::dip {

namespace {

constexpr float kLeakySlope = 0.2f;

// Runs validation before any member construction touches the vectors.
int validated_top_filters(const DipConfig& config) {
  config.validate();
  return config.filters_up.front();
}

nn::Tensor concat_channels(const nn::Tensor& a, const nn::Tensor& b) {
  nn::Tensor out(a.n, a.c + b.c, a.h, a.w);
  const std::size_t pa = a.sample_size();
  const std::size_t pb = b.sample_size();
  for (int ni = 0; ni < a.n; ++ni) {
    std::copy(a.sample(ni), a.sample(ni) + pa, out.sample(ni));
    std::copy(b.sample(ni), b.sample(ni) + pb, out.sample(ni) + pa);
  }
  return out;
}

void split_channels(const nn::Tensor& x, int c_first, nn::Tensor& first,
                    nn::Tensor& second) {
  first = nn::Tensor(x.n, c_first, x.h, x.w);
  second = nn::Tensor(x.n, x.c - c_first, x.h, x.w);
  const std::size_t pf = first.sample_size();
  const std::size_t ps = second.sample_size();
  for (int ni = 0; ni < x.n; ++ni) {
    std::copy(x.sample(ni), x.sample(ni) + pf, first.sample(ni));
    std::copy(x.sample(ni) + pf, x.sample(ni) + pf + ps, second.sample(ni));
  }
}

}  // namespace

DipNetwork::ConvBlock::ConvBlock(int in_ch, int out_ch, int kernel, int stride)
    : conv(in_ch, out_ch, kernel, stride, nn::Padding::kReflect),
      norm(out_ch),
      act(kLeakySlope) {}

nn::Tensor DipNetwork::ConvBlock::forward(const nn::Tensor& x, bool train) {
  return act.forward(norm.forward(conv.forward(x, train), train), train);
}

nn::Tensor DipNetwork::ConvBlock::backward(const nn::Tensor& dy) {
  return conv.backward(norm.backward(act.backward(dy)));
}

void DipNetwork::ConvBlock::collect_params(const std::string& prefix,
                                           std::vector<nn::ParamRef>& out) {
  conv.collect_params(prefix + ".conv", out);
  norm.collect_params(prefix + ".norm", out);
}

void DipNetwork::ConvBlock::init(Rng& rng) { conv.init(rng); }

DipNetwork::DipNetwork(const DipConfig& config)
    : cfg_(config),
      final_conv_(validated_top_filters(config), 3, 1, 1, nn::Padding::kReflect) {
  const int d = cfg_.depth;
  inner_channels_.resize(d);
  int in_ch = cfg_.input_channels;
  for (int i = 0; i < d; ++i) {
    const int nd = cfg_.filters_down[i];
    down1_.emplace_back(in_ch, nd, cfg_.kernel_down[i], 2);
    down2_.emplace_back(nd, nd, cfg_.kernel_down[i], 1);
    skip_.emplace_back(in_ch, cfg_.filters_skip[i], cfg_.kernel_skip[i], 1);
    in_ch = nd;
  }
  for (int i = 0; i < d; ++i) {
    // The tensor rising into scale i comes from the scale below: the deepest
    // encoder output at the bottom, otherwise the (i+1) decoder output.
    inner_channels_[i] = (i == d - 1) ? cfg_.filters_down[d - 1] : cfg_.filters_up[i + 1];
    upsample_.emplace_back();
    const int cat_ch = cfg_.filters_skip[i] + inner_channels_[i];
    catnorm_.emplace_back(cat_ch);
    up1_.emplace_back(cat_ch, cfg_.filters_up[i], cfg_.kernel_up[i], 1);
    up2_.emplace_back(cfg_.filters_up[i], cfg_.filters_up[i], 1, 1);
  }
}

void DipNetwork::init(Rng& rng) {
  for (int i = 0; i < cfg_.depth; ++i) {
    down1_[i].init(rng);
    down2_[i].init(rng);
    skip_[i].init(rng);
  }
  for (int i = 0; i < cfg_.depth; ++i) {
    up1_[i].init(rng);
    up2_[i].init(rng);
  }
  final_conv_.init(rng);
}

std::vector<nn::ParamRef> DipNetwork::params() {
  std::vector<nn::ParamRef> out;
  for (int i = 0; i < cfg_.depth; ++i) {
    const std::string s = std::to_string(i);
    down1_[i].collect_params("enc" + s + ".down1", out);
    down2_[i].collect_params("enc" + s + ".down2", out);
    skip_[i].collect_params("enc" + s + ".skip", out);
  }
  for (int i = 0; i < cfg_.depth; ++i) {
    const std::string s = std::to_string(i);
    catnorm_[i].collect_params("dec" + s + ".catnorm", out);
    up1_[i].collect_params("dec" + s + ".up1", out);
    up2_[i].collect_params("dec" + s + ".up2", out);
  }
  final_conv_.collect_params("final.conv", out);
  return out;
}

std::size_t DipNetwork::parameter_count() {
  std::size_t total = 0;
  for (const auto& p : params()) total += p.value->size();
  return total;
}

void DipNetwork::check_spatial(int h, int w) const {
  const int d = cfg_.depth;
  const int stride_total = 1 << d;
  if (h % stride_total != 0 || w % stride_total != 0)
    throw std::invalid_argument("DipNetwork: input dimensions must be multiples of 2^depth");
  for (int i = 0; i < d; ++i) {
    const int rh = h >> i;
    const int rw = w >> i;
    const int need_here = std::max({(cfg_.kernel_down[i] - 1) / 2,
                                    (cfg_.kernel_skip[i] - 1) / 2,
                                    (cfg_.kernel_up[i] - 1) / 2}) + 1;
    const int need_below = (cfg_.kernel_down[i] - 1) / 2 + 1;
    if (rh < need_here || rw < need_here || (rh >> 1) < need_below ||
        (rw >> 1) < need_below)
      throw std::invalid_argument(
          "DipNetwork: image too small for " + std::to_string(d) +
          " halvings (scale " + std::to_string(i) + " is " + std::to_string(rh) +
          "x" + std::to_string(rw) + ")");
  }
}

nn::Tensor DipNetwork::forward(const nn::Tensor& input, bool train) {
  if (input.c != cfg_.input_channels)
    throw std::invalid_argument("DipNetwork: input channel mismatch");
  check_spatial(input.h, input.w);

  const int d = cfg_.depth;
  std::vector<nn::Tensor> enc_in(d);
  nn::Tensor x = input;
  for (int i = 0; i < d; ++i) {
    enc_in[i] = std::move(x);
    x = down2_[i].forward(down1_[i].forward(enc_in[i], train), train);
  }

  nn::Tensor inner = std::move(x);
  for (int i = d - 1; i >= 0; --i) {
    nn::Tensor up = upsample_[i].forward(inner, train);
    nn::Tensor skip_out = skip_[i].forward(enc_in[i], train);
    nn::Tensor cat = concat_channels(skip_out, up);
    nn::Tensor t = catnorm_[i].forward(cat, train);
    t = up1_[i].forward(t, train);
    inner = up2_[i].forward(t, train);
  }
  return out_act_.forward(final_conv_.forward(inner, train), train);
}

nn::Tensor DipNetwork::backward(const nn::Tensor& dout) {
  const int d = cfg_.depth;
  nn::Tensor g = final_conv_.backward(out_act_.backward(dout));

  // Decoder ran from scale d-1 down to 0, so its backward ascends.
  std::vector<nn::Tensor> skip_grad(d);
  for (int i = 0; i < d; ++i) {
    g = catnorm_[i].backward(up1_[i].backward(up2_[i].backward(g)));
    nn::Tensor dskip, dup;
    split_channels(g, cfg_.filters_skip[i], dskip, dup);
    skip_grad[i] = skip_[i].backward(dskip);
    g = upsample_[i].backward(dup);
  }

  // g now sits at the deepest encoder output.
  for (int i = d - 1; i >= 0; --i) {
    g = down1_[i].backward(down2_[i].backward(g));
    for (std::size_t j = 0; j < g.size(); ++j) g.v[j] += skip_grad[i].v[j];
  }
  return g;
}

}  // namespace dipstop::dip
