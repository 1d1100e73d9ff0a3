#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rotrack/correlation.hpp"
#include "rotrack/geometry.hpp"
#include "rotrack/image.hpp"

namespace rotrack {

// Ordered list of rotated templates covering -180..180 inclusive, so a
// 20 degree step yields 19 entries. The two end entries alias the same
// orientation; nominal_deg keeps the verbatim label (the Angle type
// wraps -180 to +180), and circular math treats them as one direction.
template <typename TemplateT>
struct TemplateBank {
    struct Entry {
        double nominal_deg = 0.0;
        TemplateT tmpl;
    };
    std::vector<Entry> entries;
    double step_deg = 0.0;

    int size() const { return static_cast<int>(entries.size()); }
    Angle angle_of(int index) const { return wrap_angle(entries[index].nominal_deg); }
};

// Candidate target location proposed by one rotation neighborhood.
struct RotationCandidate {
    Point2 centroid;
    double peak_score = 0.0;
    Angle bank_angle;
    double displacement = 0.0;  // from the previous centroid, pixels
    int center_index = 0;       // map the weighting was centered on
};

template <typename TemplateT>
TemplateBank<TemplateT> build_bank(const Patch& exemplar, double step_deg,
                                   const std::function<TemplateT(const Patch&)>& backend) {
    if (!(step_deg > 0.0) || std::fmod(360.0, step_deg) != 0.0)
        throw std::invalid_argument("build_bank: 360 must be divisible by the angular step");
    TemplateBank<TemplateT> bank;
    bank.step_deg = step_deg;
    const int n = static_cast<int>(std::lround(360.0 / step_deg)) + 1;
    bank.entries.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = -180.0 + i * step_deg;
        bank.entries.push_back({a, backend(warp_rotate_scale(exemplar, wrap_angle(a), 1.0))});
    }
    return bank;
}

// Indices of the k entries circularly nearest to `current`, sorted by
// nominal angle. The -180 entry is skipped when its +180 twin exists, so
// one orientation never occupies two slots.
std::vector<int> nearest_neighbor_indices(const std::vector<double>& nominal_deg,
                                          Angle current, int k);

template <typename TemplateT>
std::vector<int> nearest_neighbors(const TemplateBank<TemplateT>& bank, Angle current, int k) {
    std::vector<double> nominal;
    nominal.reserve(bank.entries.size());
    for (const auto& e : bank.entries) nominal.push_back(e.nominal_deg);
    return nearest_neighbor_indices(nominal, current, k);
}

// Gaussian-weighted fusion across rotation bins, reusing the scale
// machinery with the winning bin as the mean. center_index is 1-based.
ResponseMap rotation_gwa(const std::vector<ResponseMap>& maps, int center_index,
                         double sigma_rot);

// Builds Gaussian-weighted averages centered at the top min(3, k)
// scoring maps and extracts one candidate from each. `to_image` maps the
// peak of a response map into image coordinates.
std::vector<RotationCandidate> top3_candidates(
    const std::vector<ResponseMap>& per_angle_maps, const std::vector<Angle>& angles,
    Point2 prev_centroid, double sigma_rot,
    const std::function<Point2(const ResponseMap&)>& to_image);

struct RatioSelection {
    Point2 centroid;
    Angle new_angle;
    int index = 0;  // into the candidate list
};

// Picks the candidate maximizing score / (displacement + epsilon).
RatioSelection select_by_ratio(const std::vector<RotationCandidate>& candidates,
                               double epsilon);

// The updating-template rotation triple [-zeta, 0, +zeta]; the middle
// element is the input patch, bit identical.
std::vector<Patch> per_frame_rotations(const Patch& exemplar, double zeta_deg);

}  // namespace rotrack
