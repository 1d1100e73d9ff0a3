#include "rotrack/tracker.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace rotrack {

using ordered_json = nlohmann::ordered_json;

void TrackerConfig::validate() const {
    auto fail = [](const std::string& msg) {
        throw std::invalid_argument("config: " + msg);
    };
    if (exemplar_size < 4) fail("exemplar_size must be >= 4");
    if (search_size <= exemplar_size) fail("search_size must exceed exemplar_size");
    const ConsistencyParams& c = consistency;
    if (!(c.w >= 0.0 && c.w <= 1.0)) fail("w must lie in [0, 1]");
    if (!(c.w_theta >= 0.0 && c.w_theta <= 1.0)) fail("w_theta must lie in [0, 1]");
    if (!(c.w_d >= 0.0 && c.w_d <= 1.0)) fail("w_d must lie in [0, 1]");
    if (!(c.sigma_scale > 0.0)) fail("sigma_scale must be positive");
    if (!(c.scale_step > 1.0)) fail("scale_step must exceed 1");
    if (c.num_scales < 1) fail("num_scales must be >= 1");
    if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) fail("gamma must lie in [0, 1]");
    if (!(bank_step_deg > 0.0) || std::fmod(360.0, bank_step_deg) != 0.0)
        fail("bank_step_deg must divide 360");
    if (!(zeta_deg > 0.0 && zeta_deg <= 45.0)) fail("zeta_deg must lie in (0, 45]");
    if (!(sigma_rot > 0.0)) fail("sigma_rot must be positive");
    if (!(epsilon_px > 0.0)) fail("epsilon_px must be positive");
    if (!(update_rate >= 0.0 && update_rate <= 1.0)) fail("update_rate must lie in [0, 1]");
    if (lambda < 0.0) fail("lambda must be >= 0");
    if (label_sigma < 0.0) fail("label_sigma must be >= 0");
}

TrackerConfig config_from_json(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");

    TrackerConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "mode") {
                const std::string m = value.get<std::string>();
                if (m == "fixed_template")
                    cfg.mode = TrackerMode::fixed_template;
                else if (m == "updating_template")
                    cfg.mode = TrackerMode::updating_template;
                else
                    throw std::invalid_argument("config: unknown mode '" + m + "'");
            } else if (key == "displacement") {
                cfg.displacement = value.get<bool>();
            } else if (key == "scale") {
                cfg.scale = value.get<bool>();
            } else if (key == "rotation") {
                cfg.rotation = value.get<bool>();
            } else if (key == "w") {
                cfg.consistency.w = value.get<double>();
            } else if (key == "w_theta") {
                cfg.consistency.w_theta = value.get<double>();
            } else if (key == "w_d") {
                cfg.consistency.w_d = value.get<double>();
            } else if (key == "sigma_scale") {
                cfg.consistency.sigma_scale = value.get<double>();
            } else if (key == "scale_step") {
                cfg.consistency.scale_step = value.get<double>();
            } else if (key == "num_scales") {
                cfg.consistency.num_scales = value.get<int>();
            } else if (key == "gamma") {
                cfg.consistency.gamma = value.get<double>();
            } else if (key == "bank_step_deg") {
                cfg.bank_step_deg = value.get<double>();
            } else if (key == "zeta_deg") {
                cfg.zeta_deg = value.get<double>();
            } else if (key == "sigma_rot") {
                cfg.sigma_rot = value.get<double>();
            } else if (key == "epsilon_px") {
                cfg.epsilon_px = value.get<double>();
            } else if (key == "exemplar_size") {
                cfg.exemplar_size = value.get<int>();
            } else if (key == "search_size") {
                cfg.search_size = value.get<int>();
            } else if (key == "windowed_features") {
                cfg.windowed_features = value.get<bool>();
            } else if (key == "update_rate") {
                cfg.update_rate = value.get<double>();
            } else if (key == "lambda") {
                cfg.lambda = value.get<double>();
            } else if (key == "label_sigma") {
                cfg.label_sigma = value.get<double>();
            } else {
                throw std::invalid_argument("config: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::type_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string config_to_json(const TrackerConfig& cfg) {
    ordered_json j;
    j["mode"] = cfg.mode == TrackerMode::fixed_template ? "fixed_template" : "updating_template";
    j["displacement"] = cfg.displacement;
    j["scale"] = cfg.scale;
    j["rotation"] = cfg.rotation;
    j["w"] = cfg.consistency.w;
    j["w_theta"] = cfg.consistency.w_theta;
    j["w_d"] = cfg.consistency.w_d;
    j["sigma_scale"] = cfg.consistency.sigma_scale;
    j["scale_step"] = cfg.consistency.scale_step;
    j["num_scales"] = cfg.consistency.num_scales;
    j["gamma"] = cfg.consistency.gamma;
    j["bank_step_deg"] = cfg.bank_step_deg;
    j["zeta_deg"] = cfg.zeta_deg;
    j["sigma_rot"] = cfg.sigma_rot;
    j["epsilon_px"] = cfg.epsilon_px;
    j["exemplar_size"] = cfg.exemplar_size;
    j["search_size"] = cfg.search_size;
    j["windowed_features"] = cfg.windowed_features;
    j["update_rate"] = cfg.update_rate;
    j["lambda"] = cfg.lambda;
    j["label_sigma"] = cfg.label_sigma;
    return j.dump(2);
}

TrackerConfig apply_variant(TrackerConfig cfg, const std::string& variant) {
    if (variant == "baseline") {
        cfg.displacement = cfg.scale = cfg.rotation = false;
    } else if (variant == "D") {
        cfg.displacement = true;
        cfg.scale = cfg.rotation = false;
    } else if (variant == "DS") {
        cfg.displacement = cfg.scale = true;
        cfg.rotation = false;
    } else if (variant == "DSR") {
        cfg.displacement = cfg.scale = cfg.rotation = true;
    } else {
        throw std::invalid_argument("unknown variant '" + variant + "', expected baseline|D|DS|DSR");
    }
    return cfg;
}

namespace {

double current_target_size(const TrackerState& st) {
    return std::sqrt(st.box.width * st.box.height);
}

struct SearchContext {
    std::vector<double> src_sides;
    std::vector<FeatureMap> features;
    int out_size = 0;
};

SearchContext make_search_pyramid(const Image& frame, const TrackerState& st, int out_size,
                                  bool windowed) {
    const TrackerConfig& cfg = st.config;
    const int n = cfg.scale ? cfg.consistency.num_scales : 1;
    const double center_bin = (n + 1) / 2.0;
    // keep the search pixel density equal to the template's: the
    // exemplar maps a (2 x target) region onto exemplar_size pixels
    const double base = 2.0 * current_target_size(st) *
                        (static_cast<double>(out_size) / cfg.exemplar_size);
    SearchContext ctx;
    ctx.out_size = out_size;
    for (int i = 1; i <= n; ++i) {
        const double side = base * std::pow(cfg.consistency.scale_step, i - center_bin);
        const Patch p = extract_patch_scaled(frame, st.box.center, side, out_size, st.pad_value);
        ctx.src_sides.push_back(side);
        ctx.features.push_back(feature_transform(p, windowed));
    }
    return ctx;
}

struct EntryResult {
    ResponseMap fused;
    double new_size = 0.0;
    int scale_bin = 1;
};

EntryResult fuse_scales(std::vector<ResponseMap> maps, const TrackerState& st) {
    const TrackerConfig& cfg = st.config;
    if (!cfg.scale) {
        EntryResult er;
        er.fused = std::move(maps[0]);
        er.new_size = current_target_size(st);
        return er;
    }
    ScaleDecision d = scale_consistency(maps, cfg.consistency.sigma_scale,
                                        cfg.consistency.scale_step, cfg.consistency.gamma,
                                        current_target_size(st));
    return {std::move(d.fused), d.new_size, d.winning_bin};
}

EntryResult respond_entry_fixed(const FeatureMap& tmpl, const SearchContext& ctx,
                                const TrackerState& st, int rotation_index) {
    std::vector<ResponseMap> maps;
    maps.reserve(ctx.features.size());
    for (std::size_t i = 0; i < ctx.features.size(); ++i) {
        ResponseMap r = xcorr_fft(tmpl, ctx.features[i]);
        r.scale_index = static_cast<int>(i) + 1;
        r.rotation_index = rotation_index;
        maps.push_back(std::move(r));
    }
    return fuse_scales(std::move(maps), st);
}

Point2 valid_peak_to_image(const ResponseMap& map, const SearchContext& ctx,
                           const TrackerState& st) {
    const TrackerConfig& cfg = st.config;
    const double off = (cfg.search_size - cfg.exemplar_size) / 2.0;
    const int bin = std::max(1, map.scale_index);
    const double kappa = ctx.src_sides[bin - 1] / cfg.search_size;
    return {st.box.center.x + (map.peak.location.x - off) * kappa,
            st.box.center.y + (map.peak.location.y - off) * kappa};
}

Point2 circular_peak_to_image(const ResponseMap& map, const SearchContext& ctx,
                              const TrackerState& st) {
    const TrackerConfig& cfg = st.config;
    const double c = cfg.exemplar_size / 2;
    const int bin = std::max(1, map.scale_index);
    const double kappa = ctx.src_sides[bin - 1] / cfg.exemplar_size;
    return {st.box.center.x + (map.peak.location.x - c) * kappa,
            st.box.center.y + (map.peak.location.y - c) * kappa};
}

// Reorders an ascending-angle neighbor selection into a contiguous
// circular arc so list position reflects angular adjacency.
std::vector<int> arc_order(const TemplateBank<FeatureMap>& bank, std::vector<int> sel) {
    const int k = static_cast<int>(sel.size());
    if (k <= 2) return sel;
    int cut = 0;
    double best_gap = -1.0;
    for (int i = 0; i < k; ++i) {
        const double a = bank.entries[sel[i]].nominal_deg;
        const double b = bank.entries[sel[(i + 1) % k]].nominal_deg;
        const double gap = (i + 1 < k) ? b - a : b + 360.0 - a;
        if (gap > best_gap) {
            best_gap = gap;
            cut = (i + 1) % k;
        }
    }
    std::rotate(sel.begin(), sel.begin() + cut, sel.end());
    return sel;
}

void finish_common(TrackerState& next, const TrackerState& st, Point2 predicted,
                   double new_size, FrameDiagnostics& diag) {
    const TrackerConfig& cfg = st.config;
    Point2 final_center = predicted;
    if (cfg.displacement) {
        const DisplacementResult res =
            displacement_consistency(st.motion, predicted, cfg.consistency);
        final_center = res.corrected;
        next.motion = res.state;
    }
    const Point2 step = final_center - st.box.center;
    if (norm(step) > 0.0)
        diag.path_direction_deg =
            wrap_angle(std::atan2(step.y, step.x) * 180.0 / 3.14159265358979323846).degrees();

    next.box.center = final_center;
    if (cfg.scale) {
        const double ratio = new_size / current_target_size(st);
        next.box.width = st.box.width * ratio;
        next.box.height = st.box.height * ratio;
    }
    next.frame_index = st.frame_index + 1;
    next.diag = diag;
}

TrackOutput track_fixed(const TrackerState& st, const Image& frame) {
    TrackerState next = st;
    const TrackerConfig& cfg = st.config;
    const SearchContext ctx = make_search_pyramid(frame, st, cfg.search_size, false);

    Point2 predicted;
    double new_size = current_target_size(st);
    FrameDiagnostics diag;

    if (cfg.rotation) {
        const int distinct = std::max(1, st.bank.size() - 1);
        const int k = std::min(5, distinct);
        const std::vector<int> sel = arc_order(st.bank, nearest_neighbors(st.bank, st.bank_angle, k));

        std::vector<EntryResult> per_entry;
        std::vector<ResponseMap> fused;
        std::vector<Angle> rel_angles;
        per_entry.reserve(sel.size());
        for (int idx : sel) {
            per_entry.push_back(respond_entry_fixed(st.bank.entries[idx].tmpl, ctx, st, idx));
            fused.push_back(per_entry.back().fused);
            rel_angles.push_back(st.bank.angle_of(idx));
        }
        const auto mapper = [&](const ResponseMap& m) { return valid_peak_to_image(m, ctx, st); };
        const auto cands =
            top3_candidates(fused, rel_angles, st.box.center, cfg.sigma_rot, mapper);
        const RatioSelection pick = select_by_ratio(cands, cfg.epsilon_px);

        predicted = pick.centroid;
        next.bank_angle = pick.new_angle;
        next.angle_estimate = wrap_angle(st.init_angle.degrees() + pick.new_angle.degrees());
        next.box.angle = next.angle_estimate;
        const int center_map = cands[pick.index].center_index;
        new_size = per_entry[center_map].new_size;
        diag.confidence = cands[pick.index].peak_score;
        diag.scale_bin = per_entry[center_map].scale_bin;
        diag.bank_angle_deg = pick.new_angle.degrees();
    } else {
        const EntryResult er = respond_entry_fixed(st.tmpl, ctx, st, 0);
        predicted = valid_peak_to_image(er.fused, ctx, st);
        new_size = er.new_size;
        diag.confidence = er.fused.peak.value;
        diag.scale_bin = er.scale_bin;
    }

    finish_common(next, st, predicted, new_size, diag);
    return {next.box, std::move(next)};
}

// Circular Hann prior centered on the zero-shift bin. Correlation
// filters drift onto self-similar background without a motion prior;
// window-family trackers apply exactly this kind of damping.
Mat center_prior(int size) {
    constexpr double kPi = 3.14159265358979323846;
    const int c = size / 2;
    Mat w(size, size);
    auto h = [&](int k) {
        const int d = std::min(std::abs(k - c), size - std::abs(k - c));
        return 0.5 * (1.0 + std::cos(2.0 * kPi * d / size));
    };
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) w.at(x, y) = h(x) * h(y);
    return w;
}

TrackOutput track_updating(const TrackerState& st, const Image& frame) {
    TrackerState next = st;
    const TrackerConfig& cfg = st.config;
    const int e_size = cfg.exemplar_size;
    const SearchContext ctx = make_search_pyramid(frame, st, e_size, cfg.windowed_features);
    const Mat prior = center_prior(e_size);

    std::vector<Patch> probes;
    std::vector<double> probe_deg;
    if (cfg.rotation) {
        probes = per_frame_rotations(st.model_patch, cfg.zeta_deg);
        probe_deg = {-cfg.zeta_deg, 0.0, cfg.zeta_deg};
    } else {
        probes = {st.model_patch};
        probe_deg = {0.0};
    }

    int best = -1;
    EntryResult best_er;
    for (std::size_t r = 0; r < probes.size(); ++r) {
        const Filter filt = train_filter(feature_transform(probes[r], cfg.windowed_features),
                                         st.label, cfg.lambda);
        std::vector<ResponseMap> maps;
        maps.reserve(ctx.features.size());
        for (std::size_t i = 0; i < ctx.features.size(); ++i) {
            ResponseMap raw = filter_respond(filt, ctx.features[i]);
            for (std::size_t j = 0; j < raw.scores.size(); ++j)
                raw.scores.data[j] *= prior.data[j];
            maps.push_back(make_response(std::move(raw.scores), static_cast<int>(i) + 1,
                                         static_cast<int>(r)));
        }
        EntryResult er = fuse_scales(std::move(maps), st);
        if (best < 0 || er.fused.peak.value > best_er.fused.peak.value) {
            best = static_cast<int>(r);
            best_er = std::move(er);
        }
    }

    const Point2 predicted = circular_peak_to_image(best_er.fused, ctx, st);
    FrameDiagnostics diag;
    diag.confidence = best_er.fused.peak.value;
    diag.scale_bin = best_er.scale_bin;
    diag.rotation_step_deg = probe_deg[best];
    if (cfg.rotation) {
        next.bank_angle = wrap_angle(st.bank_angle.degrees() + probe_deg[best]);
        next.angle_estimate = wrap_angle(st.init_angle.degrees() + next.bank_angle.degrees());
        next.box.angle = next.angle_estimate;
    }

    finish_common(next, st, predicted, best_er.new_size, diag);

    // roll the appearance model at the accepted location and size
    const Patch fresh = extract_patch_scaled(frame, next.box.center,
                                             2.0 * current_target_size(next), e_size,
                                             st.pad_value);
    next.model_patch.pixels = update_model(st.model_patch.pixels, fresh.pixels, cfg.update_rate);
    return {next.box, std::move(next)};
}

}  // namespace

TrackerState tracker_init(const Image& frame, const RotatedBBox& gt_box,
                          const TrackerConfig& config) {
    config.validate();
    if (!(gt_box.width > 0.0) || !(gt_box.height > 0.0))
        throw std::invalid_argument("tracker_init: degenerate box");
    if (gt_box.center.x < 0.0 || gt_box.center.x >= frame.width() || gt_box.center.y < 0.0 ||
        gt_box.center.y >= frame.height())
        throw std::invalid_argument("tracker_init: box center outside the frame");

    TrackerState st;
    st.config = config;
    st.box = gt_box;
    st.init_angle = gt_box.angle;
    st.angle_estimate = gt_box.angle;
    st.base_target_size = std::sqrt(gt_box.width * gt_box.height);
    st.pad_value = mat_mean(frame.pixels);

    const Patch exemplar = extract_patch_scaled(frame, gt_box.center, 2.0 * st.base_target_size,
                                                config.exemplar_size, st.pad_value);
    if (config.mode == TrackerMode::fixed_template) {
        if (config.rotation) {
            const bool windowed = config.windowed_features;
            st.bank = build_bank<FeatureMap>(
                exemplar, config.bank_step_deg,
                std::function<FeatureMap(const Patch&)>(
                    [windowed](const Patch& p) { return feature_transform(p, windowed); }));
        } else {
            st.tmpl = feature_transform(exemplar, config.windowed_features);
        }
    } else {
        st.model_patch = exemplar;
        const double sigma =
            config.label_sigma > 0.0 ? config.label_sigma : config.exemplar_size / 20.0;
        st.label = gaussian_label(config.exemplar_size, sigma);
    }
    return st;
}

TrackOutput track_frame(const TrackerState& state, const Image& frame) {
    if (frame.width() <= 0 || frame.height() <= 0)
        throw std::invalid_argument("track_frame: empty frame");
    if (state.config.mode == TrackerMode::fixed_template) return track_fixed(state, frame);
    return track_updating(state, frame);
}

}  // namespace rotrack
