#pragma once

#include <cstdint>
#include <string>

#include "rotrack/benchmark.hpp"
#include "rotrack/geometry.hpp"

namespace rotrack {

// Synthetic sequence recipe. The ground truth is the exact analytic
// sprite pose; pixel noise and the render-time centroid jitter never
// enter the ground-truth files.
struct SynthParams {
    std::string preset = "translate";  // translate | rotate | scale | combined
    int frames = 60;
    std::uint64_t seed = 1;

    int image_width = 256;
    int image_height = 160;
    double sprite_size = 32.0;
    Point2 start_center{48.0, 80.0};

    Point2 velocity{3.0, 0.0};   // pixels per frame
    double omega_deg = 0.0;      // rotation per frame
    double scale_rate = 1.0;     // multiplicative size change per frame
    double noise_sigma = 2.0;    // additive pixel noise
    double jitter_sigma = 0.0;   // render-only centroid jitter
};

// Preset defaults; flags may override individual fields afterwards.
SynthParams synth_preset(const std::string& name);

// Renders the sequence into out_dir (img/NNNN.pgm, groundtruth_rect.txt,
// groundtruth_poly.txt) and returns it loaded back through the reader.
// Throws if the sprite would leave the frame bounds.
Sequence synth_sequence(const SynthParams& params, const std::string& out_dir);

}  // namespace rotrack
