#include "rotrack/consistency.hpp"

#include <cmath>
#include <stdexcept>

namespace rotrack {

Point2 conventional_update(Point2 prev, Point2 predicted, double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("conventional_update: w must lie in [0, 1]");
    return {w * prev.x + (1.0 - w) * predicted.x, w * prev.y + (1.0 - w) * predicted.y};
}

Angle angle_consistency(Angle theta0, Angle theta1, double w_theta) {
    if (!(w_theta >= 0.0 && w_theta <= 1.0))
        throw std::invalid_argument("angle_consistency: w_theta must lie in [0, 1]");
    const double arc = circular_diff_deg(theta0, theta1);
    return wrap_angle(theta1.degrees() + w_theta * arc);
}

double distance_consistency(double d0, double d1, double w_d) {
    if (d0 < 0.0 || d1 < 0.0)
        throw std::invalid_argument("distance_consistency: distances must be >= 0");
    if (!(w_d >= 0.0 && w_d <= 1.0))
        throw std::invalid_argument("distance_consistency: w_d must lie in [0, 1]");
    return w_d * d0 + (1.0 - w_d) * d1;
}

Point2 apply_displacement(Point2 anchor, double d, Angle theta) {
    if (d < 0.0) throw std::invalid_argument("apply_displacement: distance must be >= 0");
    return {anchor.x + d * std::cos(theta.radians()), anchor.y + d * std::sin(theta.radians())};
}

DisplacementResult displacement_consistency(const MotionState& state, Point2 predicted,
                                            const ConsistencyParams& params) {
    DisplacementResult res;
    if (!state.has_prev) {
        res.corrected = predicted;
        res.state.prev_centroid = predicted;
        res.state.has_prev = true;
        return res;
    }
    if (!state.initialized) {
        // First displacement seeds d0/theta0; a still target stays unseeded.
        res.corrected = predicted;
        res.state = state;
        res.state.prev_centroid = predicted;
        const Point2 delta = predicted - state.prev_centroid;
        const double d = norm(delta);
        if (d > 0.0) {
            res.state.prev_distance = d;
            res.state.prev_angle = wrap_angle(std::atan2(delta.y, delta.x) * 180.0 / 3.14159265358979323846);
            res.state.initialized = true;
        }
        return res;
    }

    const Point2 damped = conventional_update(state.prev_centroid, predicted, params.w);
    const Point2 delta = damped - state.prev_centroid;
    const double d1 = norm(delta);
    res.state = state;
    if (d1 == 0.0) {
        // Direction undefined: keep theta0, decay the distance memory.
        res.corrected = state.prev_centroid;
        res.state.prev_distance = distance_consistency(state.prev_distance, 0.0, params.w_d);
        return res;
    }
    const Angle theta1 = wrap_angle(std::atan2(delta.y, delta.x) * 180.0 / 3.14159265358979323846);
    const Angle theta1n = angle_consistency(state.prev_angle, theta1, params.w_theta);
    const double d1n = distance_consistency(state.prev_distance, d1, params.w_d);
    res.corrected = apply_displacement(state.prev_centroid, d1n, theta1n);
    res.state.prev_centroid = res.corrected;
    res.state.prev_distance = d1n;
    res.state.prev_angle = theta1n;
    return res;
}

std::vector<double> gaussian_scale_weights(int n, int mu, double sigma) {
    if (n < 1) throw std::invalid_argument("gaussian_scale_weights: n must be >= 1");
    if (mu < 1 || mu > n)
        throw std::invalid_argument("gaussian_scale_weights: mu must lie in [1, n]");
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_scale_weights: sigma must be positive");
    constexpr double kPi = 3.14159265358979323846;
    std::vector<double> w(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (int bin = 1; bin <= n; ++bin) {
        const double z = (bin - mu) / sigma;
        w[bin - 1] = std::exp(-z * z) / (std::sqrt(2.0 * kPi) * sigma);
        sum += w[bin - 1];
    }
    for (double& v : w) v /= sum;
    return w;
}

ResponseMap fuse_response_maps(const std::vector<ResponseMap>& maps,
                               const std::vector<double>& weights) {
    if (maps.empty()) throw std::invalid_argument("fuse_response_maps: no maps");
    if (maps.size() != weights.size())
        throw std::invalid_argument("fuse_response_maps: weight count mismatch");
    double sum = 0.0;
    for (double v : weights) sum += v;
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("fuse_response_maps: weights must sum to 1");
    for (const ResponseMap& m : maps)
        if (!m.scores.same_dims(maps[0].scores))
            throw std::invalid_argument("fuse_response_maps: map dimension mismatch");

    std::size_t best_w = 0;
    for (std::size_t i = 1; i < weights.size(); ++i)
        if (weights[i] > weights[best_w]) best_w = i;

    if (maps.size() == 1) {
        // weight is exactly 1 here; keep the scores bit-identical
        ResponseMap out = maps[0];
        return out;
    }

    Mat acc(maps[0].scores.width, maps[0].scores.height);
    for (std::size_t i = 0; i < maps.size(); ++i)
        for (std::size_t j = 0; j < acc.size(); ++j)
            acc.data[j] += weights[i] * maps[i].scores.data[j];
    return make_response(std::move(acc), maps[best_w].scale_index, maps[best_w].rotation_index);
}

ScaleDecision scale_consistency(const std::vector<ResponseMap>& maps, double sigma_scale,
                                double scale_step, double gamma, double current_size) {
    if (maps.empty()) throw std::invalid_argument("scale_consistency: empty pyramid");
    const int n = static_cast<int>(maps.size());
    int mu = 1;
    for (int i = 1; i < n; ++i)
        if (maps[i].peak.value > maps[mu - 1].peak.value) mu = i + 1;

    ScaleDecision out;
    out.winning_bin = mu;
    out.fused = fuse_response_maps(maps, gaussian_scale_weights(n, mu, sigma_scale));
    const double center = (n + 1) / 2.0;
    const double factor = std::pow(scale_step, mu - center);
    out.new_size = (1.0 - gamma) * current_size + gamma * current_size * factor;
    return out;
}

}  // namespace rotrack
