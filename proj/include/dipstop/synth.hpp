#pragma once

#include "dipstop/image.hpp"
#include "dipstop/rng.hpp"

namespace dipstop::synth {

// Procedural clean test scene: smooth color gradient background, a few
// soft-edged ellipses and rectangles, and a mild low-frequency wave. All
// content is piecewise smooth, which suits prior-based reconstruction and
// gives PSNR oracles an unambiguous clean reference.
Image random_scene(int height, int width, Rng& rng);

// Adds white Gaussian noise of the given standard deviation (in [0,1]
// units) and clamps the result back into [0, 1].
Image add_gaussian_noise(const Image& image, float sigma, Rng& rng);

}  // namespace dipstop::synth
