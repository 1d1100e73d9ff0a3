#pragma once

#include <string>
#include <utility>

#include "rotrack/consistency.hpp"
#include "rotrack/correlation.hpp"
#include "rotrack/geometry.hpp"
#include "rotrack/image.hpp"
#include "rotrack/rotation_bank.hpp"

namespace rotrack {

enum class TrackerMode {
    fixed_template,    // template fixed at init, rotation via the bank
    updating_template  // rolling-average exemplar, per-frame rotation triple
};

struct TrackerConfig {
    TrackerMode mode = TrackerMode::fixed_template;
    bool displacement = false;  // D
    bool scale = false;         // S
    bool rotation = false;      // R

    ConsistencyParams consistency;

    double bank_step_deg = 20.0;  // fixed mode bank spacing
    double zeta_deg = 8.0;        // updating mode rotation probe
    double sigma_rot = 1.0;
    double epsilon_px = 1.0;      // score-to-displacement ratio guard

    int exemplar_size = 64;
    int search_size = 128;
    bool windowed_features = true;

    double update_rate = 0.01;
    double lambda = 0.01;
    double label_sigma = 0.0;  // 0 picks exemplar_size / 20

    void validate() const;
};

// Flat JSON document mirroring the config fields; unknown keys are
// rejected. Missing keys keep their defaults.
TrackerConfig config_from_json(const std::string& json_text);
std::string config_to_json(const TrackerConfig& cfg);

// Expands the ablation shorthand baseline | D | DS | DSR onto the flags.
TrackerConfig apply_variant(TrackerConfig cfg, const std::string& variant);

struct FrameDiagnostics {
    double confidence = 0.0;          // winning peak score
    double path_direction_deg = 0.0;  // direction of the accepted motion
    int scale_bin = 0;                // 1-based winning pyramid bin
    double rotation_step_deg = 0.0;   // chosen probe (updating mode)
    double bank_angle_deg = 0.0;      // chosen bank entry (fixed mode)
};

struct TrackerState {
    TrackerConfig config;
    RotatedBBox box;
    Angle angle_estimate;       // absolute box angle estimate
    Angle bank_angle;           // newAngle relative to the init appearance
    Angle init_angle;
    double base_target_size = 0.0;

    FeatureMap tmpl;                 // fixed mode, rotation off
    TemplateBank<FeatureMap> bank;   // fixed mode, rotation on
    Patch model_patch;               // updating mode rolling exemplar
    Mat label;                       // updating mode regression target

    MotionState motion;
    int frame_index = 0;
    double pad_value = 0.0;
    FrameDiagnostics diag;
};

// Crops the exemplar around the ground-truth box and builds the model
// (single template, rotation bank, or correlation-filter exemplar).
TrackerState tracker_init(const Image& frame, const RotatedBBox& gt_box,
                          const TrackerConfig& config);

struct TrackOutput {
    RotatedBBox box;
    TrackerState state;
};

// One tracking step; never throws on image content, only on misuse.
TrackOutput track_frame(const TrackerState& state, const Image& frame);

}  // namespace rotrack
