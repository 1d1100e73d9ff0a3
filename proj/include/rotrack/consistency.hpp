#pragma once

#include <vector>

#include "rotrack/correlation.hpp"
#include "rotrack/geometry.hpp"

namespace rotrack {

// Inter-frame motion memory: previous centroid plus the distance and
// direction of the last accepted displacement.
struct MotionState {
    Point2 prev_centroid;
    double prev_distance = 0.0;  // d0, pixels
    Angle prev_angle;            // theta0
    bool has_prev = false;       // one centroid observed
    bool initialized = false;    // a nonzero displacement observed
};

struct ConsistencyParams {
    double w = 0.0;           // conventional centroid damping weight
    double w_theta = 0.01;    // weight given to the previous direction
    double w_d = 0.01;        // weight given to the previous distance
    double sigma_scale = 1.0;
    double scale_step = 1.0375;
    int num_scales = 3;
    double gamma = 0.59;      // size damping toward the winning scale
};

// Damped centroid update: w * prev + (1 - w) * predicted.
Point2 conventional_update(Point2 prev, Point2 predicted, double w);

// Direction blend on the circle via the shortest arc; agrees with the
// plain convex blend whenever |theta0 - theta1| < 180.
Angle angle_consistency(Angle theta0, Angle theta1, double w_theta);

// Distance blend: w_d * d0 + (1 - w_d) * d1.
double distance_consistency(double d0, double d1, double w_d);

// anchor + d at direction theta under the y-down convention.
Point2 apply_displacement(Point2 anchor, double d, Angle theta);

struct DisplacementResult {
    Point2 corrected;
    MotionState state;
};

// Full displacement-consistency chain: damped prediction, direction and
// distance blends, displacement reapplied from the previous centroid.
// Until two centroids have been seen the prediction passes through.
// Zero-displacement frames keep the previous direction and decay only
// the remembered distance.
DisplacementResult displacement_consistency(const MotionState& state, Point2 predicted,
                                            const ConsistencyParams& params);

// Gaussian weights over pyramid bins 1..n centered at mu, evaluated as
//   (1 / (sqrt(2 pi) sigma)) * exp(-((bin - mu) / sigma)^2)
// and renormalized to sum 1. Note the exponent carries no 1/2 factor,
// so sigma differs from a standard Gaussian sigma by sqrt(2).
std::vector<double> gaussian_scale_weights(int n, int mu, double sigma);

// Pointwise weighted sum of equally sized maps; the result inherits the
// scale/rotation tags of the highest-weight input.
ResponseMap fuse_response_maps(const std::vector<ResponseMap>& maps,
                               const std::vector<double>& weights);

struct ScaleDecision {
    ResponseMap fused;
    double new_size = 0.0;
    int winning_bin = 0;  // 1-based
};

// Gaussian-weighted fusion of a scale pyramid centered at the winning
// map, plus the damped size update it implies.
ScaleDecision scale_consistency(const std::vector<ResponseMap>& maps, double sigma_scale,
                                double scale_step, double gamma, double current_size);

}  // namespace rotrack
