#include "dipstop/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace dipstop::nn {

namespace {

// Source index for a (possibly out-of-range) padded coordinate.
inline int reflect_index(int t, int size) {
  if (t < 0) return -t;
  if (t >= size) return 2 * size - 2 - t;
  return t;
}

inline void check_channels(int got, int want, const char* who) {
  if (got != want)
    throw std::invalid_argument(std::string(who) + ": channel mismatch");
}

void uniform_fill(std::vector<float>& v, float bound, Rng& rng) {
  for (float& x : v) x = static_cast<float>(rng.uniform(-bound, bound));
}

}  // namespace

// ---------------------------------------------------------------------------
// Conv2d

Conv2d::Conv2d(int in_ch, int out_ch, int kernel, int stride, Padding pad)
    : in_ch_(in_ch),
      out_ch_(out_ch),
      k_(kernel),
      stride_(stride),
      pad_((kernel - 1) / 2),
      pad_mode_(pad),
      weight_(static_cast<std::size_t>(out_ch) * in_ch * kernel * kernel, 0.0f),
      bias_(out_ch, 0.0f),
      wgrad_(weight_.size(), 0.0f),
      bgrad_(bias_.size(), 0.0f) {
  if (in_ch < 1 || out_ch < 1 || kernel < 1 || kernel % 2 == 0 || stride < 1)
    throw std::invalid_argument("Conv2d: bad configuration");
}

void Conv2d::init(Rng& rng) {
  const float bound = 1.0f / std::sqrt(static_cast<float>(in_ch_) * k_ * k_);
  uniform_fill(weight_, bound, rng);
  uniform_fill(bias_, bound, rng);
}

void Conv2d::collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".weight", &weight_, &wgrad_});
  out.push_back({prefix + ".bias", &bias_, &bgrad_});
}

void Conv2d::im2col(const float* padded, int ph, int pw, int out_h, int out_w,
                    float* col) const {
  const std::size_t positions = static_cast<std::size_t>(out_h) * out_w;
  for (int ci = 0; ci < in_ch_; ++ci) {
    const float* plane = padded + static_cast<std::size_t>(ci) * ph * pw;
    for (int ky = 0; ky < k_; ++ky)
      for (int kx = 0; kx < k_; ++kx) {
        float* row = col + ((static_cast<std::size_t>(ci) * k_ + ky) * k_ + kx) * positions;
        for (int oy = 0; oy < out_h; ++oy) {
          const float* src = plane + static_cast<std::size_t>(oy * stride_ + ky) * pw + kx;
          float* dst = row + static_cast<std::size_t>(oy) * out_w;
          if (stride_ == 1) {
            for (int ox = 0; ox < out_w; ++ox) dst[ox] = src[ox];
          } else {
            for (int ox = 0; ox < out_w; ++ox) dst[ox] = src[ox * stride_];
          }
        }
      }
  }
}

Tensor Conv2d::forward(const Tensor& x, bool train) {
  check_channels(x.c, in_ch_, "Conv2d");
  if (pad_mode_ == Padding::kReflect && pad_ > 0 && (x.h <= pad_ || x.w <= pad_))
    throw std::invalid_argument("Conv2d: input too small for reflection padding");

  const int ph = x.h + 2 * pad_;
  const int pw = x.w + 2 * pad_;
  const int out_h = (ph - k_) / stride_ + 1;
  const int out_w = (pw - k_) / stride_ + 1;
  const std::size_t positions = static_cast<std::size_t>(out_h) * out_w;
  const std::size_t krows = static_cast<std::size_t>(in_ch_) * k_ * k_;

  Tensor padded(x.n, in_ch_, ph, pw, 0.0f);
  for (int ni = 0; ni < x.n; ++ni)
    for (int ci = 0; ci < in_ch_; ++ci)
      for (int y = 0; y < ph; ++y) {
        const int sy = pad_mode_ == Padding::kReflect ? reflect_index(y - pad_, x.h)
                                                      : y - pad_;
        if (sy < 0 || sy >= x.h) continue;  // zero padding rows
        for (int xx = 0; xx < pw; ++xx) {
          const int sx = pad_mode_ == Padding::kReflect ? reflect_index(xx - pad_, x.w)
                                                        : xx - pad_;
          if (sx < 0 || sx >= x.w) continue;
          padded.at(ni, ci, y, xx) = x.at(ni, ci, sy, sx);
        }
      }

  Tensor y(x.n, out_ch_, out_h, out_w);
  std::vector<float> col(krows * positions);
  for (int ni = 0; ni < x.n; ++ni) {
    im2col(padded.sample(ni), ph, pw, out_h, out_w, col.data());
    gemm(false, false, out_ch_, static_cast<int>(positions), static_cast<int>(krows),
         1.0f, weight_.data(), static_cast<int>(krows), col.data(),
         static_cast<int>(positions), 0.0f, y.sample(ni), static_cast<int>(positions));
    float* ys = y.sample(ni);
    for (int co = 0; co < out_ch_; ++co) {
      const float b = bias_[co];
      float* row = ys + static_cast<std::size_t>(co) * positions;
      for (std::size_t p = 0; p < positions; ++p) row[p] += b;
    }
  }

  if (train) {
    padded_cache_ = std::move(padded);
    in_h_ = x.h;
    in_w_ = x.w;
  }
  return y;
}

Tensor Conv2d::backward(const Tensor& dy) {
  const int ph = padded_cache_.h;
  const int pw = padded_cache_.w;
  const int out_h = dy.h;
  const int out_w = dy.w;
  const std::size_t positions = static_cast<std::size_t>(out_h) * out_w;
  const std::size_t krows = static_cast<std::size_t>(in_ch_) * k_ * k_;

  Tensor dx(dy.n, in_ch_, in_h_, in_w_, 0.0f);
  std::vector<float> col(krows * positions);
  std::vector<float> dcol(krows * positions);
  std::vector<float> dpadded(static_cast<std::size_t>(in_ch_) * ph * pw);

  for (int ni = 0; ni < dy.n; ++ni) {
    im2col(padded_cache_.sample(ni), ph, pw, out_h, out_w, col.data());
    const float* dys = dy.sample(ni);

    // dW += dY * col^T, db += row sums of dY.
    gemm(false, true, out_ch_, static_cast<int>(krows), static_cast<int>(positions),
         1.0f, dys, static_cast<int>(positions), col.data(),
         static_cast<int>(positions), 1.0f, wgrad_.data(), static_cast<int>(krows));
    for (int co = 0; co < out_ch_; ++co) {
      const float* row = dys + static_cast<std::size_t>(co) * positions;
      double s = 0.0;
      for (std::size_t p = 0; p < positions; ++p) s += row[p];
      bgrad_[co] += static_cast<float>(s);
    }

    // dcol = W^T * dY, then fold back into the padded grad.
    gemm(true, false, static_cast<int>(krows), static_cast<int>(positions), out_ch_,
         1.0f, weight_.data(), static_cast<int>(krows), dys,
         static_cast<int>(positions), 0.0f, dcol.data(), static_cast<int>(positions));
    std::fill(dpadded.begin(), dpadded.end(), 0.0f);
    for (int ci = 0; ci < in_ch_; ++ci) {
      float* plane = dpadded.data() + static_cast<std::size_t>(ci) * ph * pw;
      for (int ky = 0; ky < k_; ++ky)
        for (int kx = 0; kx < k_; ++kx) {
          const float* row =
              dcol.data() + ((static_cast<std::size_t>(ci) * k_ + ky) * k_ + kx) * positions;
          for (int oy = 0; oy < out_h; ++oy) {
            float* dst = plane + static_cast<std::size_t>(oy * stride_ + ky) * pw + kx;
            const float* src = row + static_cast<std::size_t>(oy) * out_w;
            for (int ox = 0; ox < out_w; ++ox) dst[ox * stride_] += src[ox];
          }
        }
    }

    // Un-pad: reflected positions contribute to their mirror source.
    for (int ci = 0; ci < in_ch_; ++ci) {
      const float* plane = dpadded.data() + static_cast<std::size_t>(ci) * ph * pw;
      for (int y = 0; y < ph; ++y) {
        const int sy = pad_mode_ == Padding::kReflect ? reflect_index(y - pad_, in_h_)
                                                      : y - pad_;
        if (sy < 0 || sy >= in_h_) continue;
        for (int xx = 0; xx < pw; ++xx) {
          const int sx = pad_mode_ == Padding::kReflect ? reflect_index(xx - pad_, in_w_)
                                                        : xx - pad_;
          if (sx < 0 || sx >= in_w_) continue;
          dx.at(ni, ci, sy, sx) += plane[static_cast<std::size_t>(y) * pw + xx];
        }
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------
// DepthwiseConv2d

DepthwiseConv2d::DepthwiseConv2d(int channels, int kernel, int stride)
    : ch_(channels),
      k_(kernel),
      stride_(stride),
      pad_((kernel - 1) / 2),
      weight_(static_cast<std::size_t>(channels) * kernel * kernel, 0.0f),
      bias_(channels, 0.0f),
      wgrad_(weight_.size(), 0.0f),
      bgrad_(bias_.size(), 0.0f) {
  if (channels < 1 || kernel < 1 || kernel % 2 == 0 || stride < 1)
    throw std::invalid_argument("DepthwiseConv2d: bad configuration");
}

void DepthwiseConv2d::init(Rng& rng) {
  const float bound = 1.0f / std::sqrt(static_cast<float>(k_) * k_);
  uniform_fill(weight_, bound, rng);
  uniform_fill(bias_, bound, rng);
}

void DepthwiseConv2d::collect_params(const std::string& prefix,
                                     std::vector<ParamRef>& out) {
  out.push_back({prefix + ".weight", &weight_, &wgrad_});
  out.push_back({prefix + ".bias", &bias_, &bgrad_});
}

Tensor DepthwiseConv2d::forward(const Tensor& x, bool train) {
  check_channels(x.c, ch_, "DepthwiseConv2d");
  const int out_h = (x.h + 2 * pad_ - k_) / stride_ + 1;
  const int out_w = (x.w + 2 * pad_ - k_) / stride_ + 1;
  Tensor y(x.n, ch_, out_h, out_w);
  for (int ni = 0; ni < x.n; ++ni)
    for (int ci = 0; ci < ch_; ++ci) {
      const float* wv = weight_.data() + static_cast<std::size_t>(ci) * k_ * k_;
      for (int oy = 0; oy < out_h; ++oy)
        for (int ox = 0; ox < out_w; ++ox) {
          float acc = bias_[ci];
          const int y0 = oy * stride_ - pad_;
          const int x0 = ox * stride_ - pad_;
          for (int ky = 0; ky < k_; ++ky) {
            const int sy = y0 + ky;
            if (sy < 0 || sy >= x.h) continue;
            for (int kx = 0; kx < k_; ++kx) {
              const int sx = x0 + kx;
              if (sx < 0 || sx >= x.w) continue;
              acc += wv[ky * k_ + kx] * x.at(ni, ci, sy, sx);
            }
          }
          y.at(ni, ci, oy, ox) = acc;
        }
    }
  if (train) input_cache_ = x;
  return y;
}

Tensor DepthwiseConv2d::backward(const Tensor& dy) {
  const Tensor& x = input_cache_;
  Tensor dx(x.n, x.c, x.h, x.w, 0.0f);
  for (int ni = 0; ni < x.n; ++ni)
    for (int ci = 0; ci < ch_; ++ci) {
      float* wg = wgrad_.data() + static_cast<std::size_t>(ci) * k_ * k_;
      const float* wv = weight_.data() + static_cast<std::size_t>(ci) * k_ * k_;
      double bsum = 0.0;
      for (int oy = 0; oy < dy.h; ++oy)
        for (int ox = 0; ox < dy.w; ++ox) {
          const float g = dy.at(ni, ci, oy, ox);
          bsum += g;
          const int y0 = oy * stride_ - pad_;
          const int x0 = ox * stride_ - pad_;
          for (int ky = 0; ky < k_; ++ky) {
            const int sy = y0 + ky;
            if (sy < 0 || sy >= x.h) continue;
            for (int kx = 0; kx < k_; ++kx) {
              const int sx = x0 + kx;
              if (sx < 0 || sx >= x.w) continue;
              wg[ky * k_ + kx] += g * x.at(ni, ci, sy, sx);
              dx.at(ni, ci, sy, sx) += g * wv[ky * k_ + kx];
            }
          }
        }
      bgrad_[ci] += static_cast<float>(bsum);
    }
  return dx;
}

// ---------------------------------------------------------------------------
// InstanceNorm

InstanceNorm::InstanceNorm(int channels, float eps)
    : ch_(channels),
      eps_(eps),
      gamma_(channels, 1.0f),
      beta_(channels, 0.0f),
      ggrad_(channels, 0.0f),
      bgrad_(channels, 0.0f) {}

void InstanceNorm::collect_params(const std::string& prefix,
                                  std::vector<ParamRef>& out) {
  out.push_back({prefix + ".gamma", &gamma_, &ggrad_});
  out.push_back({prefix + ".beta", &beta_, &bgrad_});
}

Tensor InstanceNorm::forward(const Tensor& x, bool train) {
  check_channels(x.c, ch_, "InstanceNorm");
  const std::size_t plane = x.plane();
  Tensor y(x.n, x.c, x.h, x.w);
  Tensor xhat(x.n, x.c, x.h, x.w);
  std::vector<float> inv_std(static_cast<std::size_t>(x.n) * x.c);
  for (int ni = 0; ni < x.n; ++ni)
    for (int ci = 0; ci < ch_; ++ci) {
      const float* src = x.data() + (static_cast<std::size_t>(ni) * ch_ + ci) * plane;
      double sum = 0.0, sq = 0.0;
      for (std::size_t p = 0; p < plane; ++p) {
        sum += src[p];
        sq += static_cast<double>(src[p]) * src[p];
      }
      const double mean = sum / static_cast<double>(plane);
      double var = sq / static_cast<double>(plane) - mean * mean;
      if (var < 0.0) var = 0.0;
      const float istd = static_cast<float>(1.0 / std::sqrt(var + eps_));
      inv_std[static_cast<std::size_t>(ni) * ch_ + ci] = istd;
      const float m = static_cast<float>(mean);
      const float g = gamma_[ci];
      const float b = beta_[ci];
      float* xh = xhat.data() + (static_cast<std::size_t>(ni) * ch_ + ci) * plane;
      float* dst = y.data() + (static_cast<std::size_t>(ni) * ch_ + ci) * plane;
      for (std::size_t p = 0; p < plane; ++p) {
        xh[p] = (src[p] - m) * istd;
        dst[p] = g * xh[p] + b;
      }
    }
  if (train) {
    xhat_cache_ = std::move(xhat);
    inv_std_cache_ = std::move(inv_std);
  }
  return y;
}

Tensor InstanceNorm::backward(const Tensor& dy) {
  const std::size_t plane = dy.plane();
  Tensor dx(dy.n, dy.c, dy.h, dy.w);
  for (int ni = 0; ni < dy.n; ++ni)
    for (int ci = 0; ci < ch_; ++ci) {
      const std::size_t base = (static_cast<std::size_t>(ni) * ch_ + ci) * plane;
      const float* g = dy.data() + base;
      const float* xh = xhat_cache_.data() + base;
      double dsum = 0.0, dxsum = 0.0;
      for (std::size_t p = 0; p < plane; ++p) {
        dsum += g[p];
        dxsum += static_cast<double>(g[p]) * xh[p];
      }
      ggrad_[ci] += static_cast<float>(dxsum);
      bgrad_[ci] += static_cast<float>(dsum);
      const float istd = inv_std_cache_[static_cast<std::size_t>(ni) * ch_ + ci];
      const float scale = gamma_[ci] * istd;
      const float mean_dy = static_cast<float>(dsum / static_cast<double>(plane));
      const float mean_dyxh = static_cast<float>(dxsum / static_cast<double>(plane));
      float* dst = dx.data() + base;
      for (std::size_t p = 0; p < plane; ++p)
        dst[p] = scale * (g[p] - mean_dy - xh[p] * mean_dyxh);
    }
  return dx;
}

ChannelAffine::ChannelAffine(int channels)
    : ch_(channels),
      gamma_(channels, 1.0f),
      beta_(channels, 0.0f),
      ggrad_(channels, 0.0f),
      bgrad_(channels, 0.0f) {}

void ChannelAffine::collect_params(const std::string& prefix,
                                   std::vector<ParamRef>& out) {
  out.push_back({prefix + ".gamma", &gamma_, &ggrad_});
  out.push_back({prefix + ".beta", &beta_, &bgrad_});
}

Tensor ChannelAffine::forward(const Tensor& x, bool train) {
  check_channels(x.c, ch_, "ChannelAffine");
  const std::size_t plane = x.plane();
  Tensor y(x.n, x.c, x.h, x.w);
  for (int ni = 0; ni < x.n; ++ni)
    for (int ci = 0; ci < ch_; ++ci) {
      const std::size_t base = (static_cast<std::size_t>(ni) * ch_ + ci) * plane;
      const float g = gamma_[ci], b = beta_[ci];
      const float* src = x.data() + base;
      float* dst = y.data() + base;
      for (std::size_t p = 0; p < plane; ++p) dst[p] = g * src[p] + b;
    }
  if (train) input_cache_ = x;
  return y;
}

Tensor ChannelAffine::backward(const Tensor& dy) {
  const std::size_t plane = dy.plane();
  Tensor dx(dy.n, dy.c, dy.h, dy.w);
  for (int ni = 0; ni < dy.n; ++ni)
    for (int ci = 0; ci < ch_; ++ci) {
      const std::size_t base = (static_cast<std::size_t>(ni) * ch_ + ci) * plane;
      const float* g = dy.data() + base;
      const float* xs = input_cache_.data() + base;
      double dgsum = 0.0, dbsum = 0.0;
      for (std::size_t p = 0; p < plane; ++p) {
        dgsum += static_cast<double>(g[p]) * xs[p];
        dbsum += g[p];
      }
      ggrad_[ci] += static_cast<float>(dgsum);
      bgrad_[ci] += static_cast<float>(dbsum);
      const float scale = gamma_[ci];
      float* dst = dx.data() + base;
      for (std::size_t p = 0; p < plane; ++p) dst[p] = scale * g[p];
    }
  return dx;
}

// ---------------------------------------------------------------------------
// Activations

Tensor LeakyReLU::forward(const Tensor& x, bool train) {
  Tensor y(x.n, x.c, x.h, x.w);
  for (std::size_t i = 0; i < x.size(); ++i)
    y.v[i] = x.v[i] > 0.0f ? x.v[i] : slope_ * x.v[i];
  if (train) input_cache_ = x;
  return y;
}

Tensor LeakyReLU::backward(const Tensor& dy) {
  Tensor dx(dy.n, dy.c, dy.h, dy.w);
  for (std::size_t i = 0; i < dy.size(); ++i)
    dx.v[i] = input_cache_.v[i] > 0.0f ? dy.v[i] : slope_ * dy.v[i];
  return dx;
}

Tensor Sigmoid::forward(const Tensor& x, bool train) {
  Tensor y(x.n, x.c, x.h, x.w);
  for (std::size_t i = 0; i < x.size(); ++i)
    y.v[i] = 1.0f / (1.0f + std::exp(-x.v[i]));
  if (train) output_cache_ = y;
  return y;
}

Tensor Sigmoid::backward(const Tensor& dy) {
  Tensor dx(dy.n, dy.c, dy.h, dy.w);
  for (std::size_t i = 0; i < dy.size(); ++i) {
    const float s = output_cache_.v[i];
    dx.v[i] = dy.v[i] * s * (1.0f - s);
  }
  return dx;
}

// ---------------------------------------------------------------------------
// UpsampleBilinear2x

namespace {
// Source coordinate for output position o under 2x half-pixel-center scaling.
inline void up2_coords(int o, int in_size, int& i0, int& i1, float& frac) {
  const float src = (o + 0.5f) * 0.5f - 0.5f;
  if (src <= 0.0f) {
    i0 = i1 = 0;
    frac = 0.0f;
    return;
  }
  if (src >= static_cast<float>(in_size - 1)) {
    i0 = i1 = in_size - 1;
    frac = 0.0f;
    return;
  }
  i0 = static_cast<int>(src);
  i1 = i0 + 1;
  frac = src - static_cast<float>(i0);
}
}  // namespace

Tensor UpsampleBilinear2x::forward(const Tensor& x, bool train) {
  const int oh = x.h * 2;
  const int ow = x.w * 2;
  Tensor y(x.n, x.c, oh, ow);
  for (int ni = 0; ni < x.n; ++ni)
    for (int ci = 0; ci < x.c; ++ci)
      for (int oy = 0; oy < oh; ++oy) {
        int y0, y1;
        float wy;
        up2_coords(oy, x.h, y0, y1, wy);
        for (int ox = 0; ox < ow; ++ox) {
          int x0, x1;
          float wx;
          up2_coords(ox, x.w, x0, x1, wx);
          const float top =
              (1.0f - wx) * x.at(ni, ci, y0, x0) + wx * x.at(ni, ci, y0, x1);
          const float bot =
              (1.0f - wx) * x.at(ni, ci, y1, x0) + wx * x.at(ni, ci, y1, x1);
          y.at(ni, ci, oy, ox) = (1.0f - wy) * top + wy * bot;
        }
      }
  if (train) {
    in_h_ = x.h;
    in_w_ = x.w;
    n_ = x.n;
    c_ = x.c;
  }
  return y;
}

Tensor UpsampleBilinear2x::backward(const Tensor& dy) {
  Tensor dx(n_, c_, in_h_, in_w_, 0.0f);
  for (int ni = 0; ni < n_; ++ni)
    for (int ci = 0; ci < c_; ++ci)
      for (int oy = 0; oy < dy.h; ++oy) {
        int y0, y1;
        float wy;
        up2_coords(oy, in_h_, y0, y1, wy);
        for (int ox = 0; ox < dy.w; ++ox) {
          int x0, x1;
          float wx;
          up2_coords(ox, in_w_, x0, x1, wx);
          const float g = dy.at(ni, ci, oy, ox);
          dx.at(ni, ci, y0, x0) += (1.0f - wy) * (1.0f - wx) * g;
          dx.at(ni, ci, y0, x1) += (1.0f - wy) * wx * g;
          dx.at(ni, ci, y1, x0) += wy * (1.0f - wx) * g;
          dx.at(ni, ci, y1, x1) += wy * wx * g;
        }
      }
  return dx;
}

// ---------------------------------------------------------------------------
// GlobalAvgPool

Tensor GlobalAvgPool::forward(const Tensor& x, bool train) {
  Tensor y(x.n, x.c, 1, 1);
  const std::size_t plane = x.plane();
  for (int ni = 0; ni < x.n; ++ni)
    for (int ci = 0; ci < x.c; ++ci) {
      const float* src = x.data() + (static_cast<std::size_t>(ni) * x.c + ci) * plane;
      double s = 0.0;
      for (std::size_t p = 0; p < plane; ++p) s += src[p];
      y.at(ni, ci, 0, 0) = static_cast<float>(s / static_cast<double>(plane));
    }
  if (train) {
    in_h_ = x.h;
    in_w_ = x.w;
    n_ = x.n;
    c_ = x.c;
  }
  return y;
}

Tensor GlobalAvgPool::backward(const Tensor& dy) {
  Tensor dx(n_, c_, in_h_, in_w_);
  const float inv = 1.0f / (static_cast<float>(in_h_) * in_w_);
  for (int ni = 0; ni < n_; ++ni)
    for (int ci = 0; ci < c_; ++ci) {
      const float g = dy.at(ni, ci, 0, 0) * inv;
      float* dst = dx.data() +
                   (static_cast<std::size_t>(ni) * c_ + ci) * dx.plane();
      for (std::size_t p = 0; p < dx.plane(); ++p) dst[p] = g;
    }
  return dx;
}

// ---------------------------------------------------------------------------
// Linear

Linear::Linear(int in_features, int out_features)
    : in_(in_features),
      out_(out_features),
      weight_(static_cast<std::size_t>(out_features) * in_features, 0.0f),
      bias_(out_features, 0.0f),
      wgrad_(weight_.size(), 0.0f),
      bgrad_(bias_.size(), 0.0f) {
  if (in_features < 1 || out_features < 1)
    throw std::invalid_argument("Linear: bad configuration");
}

void Linear::init(Rng& rng) {
  const float bound = 1.0f / std::sqrt(static_cast<float>(in_));
  uniform_fill(weight_, bound, rng);
  uniform_fill(bias_, bound, rng);
}

void Linear::collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
  out.push_back({prefix + ".weight", &weight_, &wgrad_});
  out.push_back({prefix + ".bias", &bias_, &bgrad_});
}

Tensor Linear::forward(const Tensor& x, bool train) {
  if (static_cast<int>(x.sample_size()) != in_)
    throw std::invalid_argument("Linear: feature size mismatch");
  Tensor y(x.n, out_, 1, 1);
  gemm(false, true, x.n, out_, in_, 1.0f, x.data(), in_, weight_.data(), in_,
       0.0f, y.data(), out_);
  for (int ni = 0; ni < x.n; ++ni)
    for (int o = 0; o < out_; ++o) y.at(ni, o, 0, 0) += bias_[o];
  if (train) input_cache_ = x;
  return y;
}

Tensor Linear::backward(const Tensor& dy) {
  const Tensor& x = input_cache_;
  // dW += dY^T * X
  gemm(true, false, out_, in_, x.n, 1.0f, dy.data(), out_, x.data(), in_, 1.0f,
       wgrad_.data(), in_);
  for (int ni = 0; ni < x.n; ++ni)
    for (int o = 0; o < out_; ++o) bgrad_[o] += dy.at(ni, o, 0, 0);
  Tensor dx(x.n, x.c, x.h, x.w);
  gemm(false, false, x.n, in_, out_, 1.0f, dy.data(), out_, weight_.data(), in_,
       0.0f, dx.data(), in_);
  return dx;
}

// ---------------------------------------------------------------------------
// Softmax

Tensor Softmax::forward(const Tensor& x, bool train) {
  if (x.h != 1 || x.w != 1)
    throw std::invalid_argument("Softmax: expects 1x1 spatial extent");
  Tensor y(x.n, x.c, 1, 1);
  for (int ni = 0; ni < x.n; ++ni) {
    const float* src = x.sample(ni);
    float* dst = y.sample(ni);
    float mx = src[0];
    for (int ci = 1; ci < x.c; ++ci) mx = std::max(mx, src[ci]);
    double sum = 0.0;
    for (int ci = 0; ci < x.c; ++ci) {
      dst[ci] = std::exp(src[ci] - mx);
      sum += dst[ci];
    }
    const float inv = static_cast<float>(1.0 / sum);
    for (int ci = 0; ci < x.c; ++ci) dst[ci] *= inv;
  }
  if (train) output_cache_ = y;
  return y;
}

Tensor Softmax::backward(const Tensor& dy) {
  const Tensor& y = output_cache_;
  Tensor dx(dy.n, dy.c, 1, 1);
  for (int ni = 0; ni < dy.n; ++ni) {
    const float* g = dy.sample(ni);
    const float* p = y.sample(ni);
    double dot = 0.0;
    for (int ci = 0; ci < dy.c; ++ci) dot += static_cast<double>(g[ci]) * p[ci];
    for (int ci = 0; ci < dy.c; ++ci)
      dx.sample(ni)[ci] = p[ci] * (g[ci] - static_cast<float>(dot));
  }
  return dx;
}

}  // namespace dipstop::nn
