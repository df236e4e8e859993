#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dipstop::pipeline {

// Outcome of one auto-stopped denoising run against a clean reference.
struct EvalResult {
  std::string id;
  std::string camera_tag;
  int chosen_iteration = 0;
  int scored_steps = 0;
  float psnr_chosen = 0.0f;  // dB at the controller's chosen snapshot
  float psnr_best = 0.0f;    // dB at the best snapshot in the whole trace
  bool no_peak_declared = false;
};

// CSV with one row per image, grouped by camera tag, then a final average
// row. Empty input produces the header plus an average row marked n/a.
void write_report(const std::vector<EvalResult>& results,
                  const std::filesystem::path& path);

}  // namespace dipstop::pipeline
