#include "rotrack/rotation_bank.hpp"

#include <algorithm>

#include "rotrack/consistency.hpp"

namespace rotrack {

std::vector<int> nearest_neighbor_indices(const std::vector<double>& nominal_deg,
                                          Angle current, int k) {
    const int n = static_cast<int>(nominal_deg.size());
    if (k < 1 || k > n)
        throw std::invalid_argument("nearest_neighbors: k exceeds the entry count");

    bool has_pos180 = false;
    for (double a : nominal_deg)
        if (a == 180.0) has_pos180 = true;

    struct Cand {
        int index;
        double dist;
        double nominal;
    };
    std::vector<Cand> cands;
    cands.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (nominal_deg[i] == -180.0 && has_pos180) continue;  // alias of +180
        cands.push_back({i, angular_distance_deg(wrap_angle(nominal_deg[i]), current),
                         nominal_deg[i]});
    }
    if (static_cast<int>(cands.size()) < k)
        throw std::invalid_argument("nearest_neighbors: k exceeds the distinct orientations");

    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (std::abs(a.nominal) != std::abs(b.nominal))
            return std::abs(a.nominal) < std::abs(b.nominal);
        return a.nominal < b.nominal;
    });
    cands.resize(static_cast<std::size_t>(k));
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.nominal < b.nominal; });

    std::vector<int> out;
    out.reserve(cands.size());
    for (const Cand& c : cands) out.push_back(c.index);
    return out;
}

ResponseMap rotation_gwa(const std::vector<ResponseMap>& maps, int center_index,
                         double sigma_rot) {
    if (maps.empty()) throw std::invalid_argument("rotation_gwa: no maps");
    const int k = static_cast<int>(maps.size());
    return fuse_response_maps(maps, gaussian_scale_weights(k, center_index, sigma_rot));
}

std::vector<RotationCandidate> top3_candidates(
    const std::vector<ResponseMap>& per_angle_maps, const std::vector<Angle>& angles,
    Point2 prev_centroid, double sigma_rot,
    const std::function<Point2(const ResponseMap&)>& to_image) {
    if (per_angle_maps.empty())
        throw std::invalid_argument("top3_candidates: no maps");
    if (per_angle_maps.size() != angles.size())
        throw std::invalid_argument("top3_candidates: angle count mismatch");

    const int k = static_cast<int>(per_angle_maps.size());
    std::vector<int> order(per_angle_maps.size());
    for (int i = 0; i < k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return per_angle_maps[a].peak.value > per_angle_maps[b].peak.value;
    });

    const int count = std::min(3, k);
    std::vector<RotationCandidate> out;
    out.reserve(count);
    for (int r = 0; r < count; ++r) {
        const int center = order[r];
        ResponseMap fused = rotation_gwa(per_angle_maps, center + 1, sigma_rot);
        RotationCandidate c;
        c.centroid = to_image(fused);
        c.peak_score = fused.peak.value;
        c.bank_angle = angles[center];
        c.displacement = distance(c.centroid, prev_centroid);
        c.center_index = center;
        out.push_back(c);
    }
    return out;
}

RatioSelection select_by_ratio(const std::vector<RotationCandidate>& candidates,
                               double epsilon) {
    if (candidates.empty())
        throw std::invalid_argument("select_by_ratio: no candidates");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("select_by_ratio: epsilon must be positive");
    int best = 0;
    double best_ratio = candidates[0].peak_score / (candidates[0].displacement + epsilon);
    for (int i = 1; i < static_cast<int>(candidates.size()); ++i) {
        const double r = candidates[i].peak_score / (candidates[i].displacement + epsilon);
        if (r > best_ratio) {
            best_ratio = r;
            best = i;
        }
    }
    return {candidates[best].centroid, candidates[best].bank_angle, best};
}

std::vector<Patch> per_frame_rotations(const Patch& exemplar, double zeta_deg) {
    if (!(zeta_deg > 0.0 && zeta_deg <= 45.0))
        throw std::invalid_argument("per_frame_rotations: zeta must lie in (0, 45]");
    std::vector<Patch> out;
    out.reserve(3);
    out.push_back(warp_rotate_scale(exemplar, wrap_angle(-zeta_deg), 1.0));
    out.push_back(exemplar);
    out.push_back(warp_rotate_scale(exemplar, wrap_angle(zeta_deg), 1.0));
    return out;
}

}  // namespace rotrack
