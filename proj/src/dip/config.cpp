#include "dipstop/dip/config.hpp"

#include <stdexcept>
#include <string>

#include "dipstop/rng.hpp"

namespace dipstop::dip {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw std::invalid_argument("DipConfig." + field + ": " + what);
}

void check_per_scale(const std::vector<int>& v, int depth, const std::string& field,
                     bool kernel) {
  require(static_cast<int>(v.size()) == depth, field,
          "expected " + std::to_string(depth) + " entries, got " +
              std::to_string(v.size()));
  for (int x : v) {
    if (kernel)
      require(x >= 1 && x % 2 == 1, field, "kernel sizes must be odd and >= 1");
    else
      require(x >= 1, field, "channel counts must be >= 1");
  }
}

}  // namespace

DipConfig DipConfig::defaults() { return with_scales(5, 128, 4); }

DipConfig DipConfig::with_scales(int depth, int filters, int skip_filters) {
  DipConfig c;
  c.depth = depth;
  c.filters_down.assign(depth, filters);
  c.filters_up.assign(depth, filters);
  c.filters_skip.assign(depth, skip_filters);
  c.kernel_down.assign(depth, 3);
  c.kernel_up.assign(depth, 3);
  c.kernel_skip.assign(depth, 1);
  return c;
}

void DipConfig::validate() const {
  require(depth >= 1, "depth", "must be >= 1");
  check_per_scale(filters_down, depth, "filters_down", false);
  check_per_scale(filters_up, depth, "filters_up", false);
  check_per_scale(filters_skip, depth, "filters_skip", false);
  check_per_scale(kernel_down, depth, "kernel_down", true);
  check_per_scale(kernel_up, depth, "kernel_up", true);
  check_per_scale(kernel_skip, depth, "kernel_skip", true);
  require(input_channels >= 1, "input_channels", "must be >= 1");
  require(input_noise_amplitude > 0.0f, "input_noise_amplitude", "must be > 0");
  require(perturb_sigma >= 0.0f, "perturb_sigma", "must be >= 0");
  require(eval_every >= 1, "eval_every", "must be >= 1");
  require(max_iterations >= eval_every, "max_iterations", "must be >= eval_every");
}

std::uint64_t DipConfig::fingerprint() const {
  std::string buf = "dip-arch-v1;";
  const auto add = [&buf](const char* tag, const std::vector<int>& v) {
    buf += tag;
    for (int x : v) buf += std::to_string(x) + ",";
    buf += ";";
  };
  buf += "d" + std::to_string(depth) + ";";
  add("fd", filters_down);
  add("fu", filters_up);
  add("fs", filters_skip);
  add("kd", kernel_down);
  add("ku", kernel_up);
  add("ks", kernel_skip);
  buf += "ic" + std::to_string(input_channels);
  return fnv1a64(buf);
}

}  // namespace dipstop::dip
