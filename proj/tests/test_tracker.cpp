#include <cmath>

#include "doctest.h"
#include "rotrack/benchmark.hpp"
#include "rotrack/synth.hpp"
#include "rotrack/tracker.hpp"
#include "test_util.hpp"

using namespace rotrack;

namespace {

std::vector<Image> load_frames(const Sequence& seq) {
    std::vector<Image> out;
    for (const std::string& p : seq.frame_paths) out.push_back(read_pgm_file(p));
    return out;
}

std::vector<RotatedBBox> run_track(const Sequence& seq, const std::vector<Image>& frames,
                                   const TrackerConfig& cfg) {
    TrackerState st = tracker_init(frames[0], seq.ground_truth[0], cfg);
    std::vector<RotatedBBox> boxes{st.box};
    for (std::size_t f = 1; f < frames.size(); ++f) {
        TrackOutput res = track_frame(st, frames[f]);
        st = std::move(res.state);
        boxes.push_back(res.box);
    }
    return boxes;
}

bool same_boxes(const std::vector<RotatedBBox>& a, const std::vector<RotatedBBox>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].center.x != b[i].center.x || a[i].center.y != b[i].center.y ||
            a[i].width != b[i].width || a[i].height != b[i].height ||
            a[i].angle.degrees() != b[i].angle.degrees())
            return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("tracker") {

TEST_CASE("config json round trip and unknown keys") {
    TrackerConfig cfg;
    cfg.mode = TrackerMode::updating_template;
    cfg.displacement = true;
    cfg.consistency.w_theta = 0.05;
    cfg.zeta_deg = 12.0;
    cfg.exemplar_size = 48;
    cfg.search_size = 96;

    const std::string text = config_to_json(cfg);
    const TrackerConfig back = config_from_json(text);
    CHECK(back.mode == TrackerMode::updating_template);
    CHECK(back.displacement == true);
    CHECK(back.consistency.w_theta == 0.05);
    CHECK(back.zeta_deg == 12.0);
    CHECK(back.exemplar_size == 48);
    CHECK(config_to_json(back) == text);

    CHECK_THROWS_AS(config_from_json("{\"zeta\": 8}"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json("{\"mode\": \"nope\"}"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json("not json"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json("{\"search_size\": 16}"), std::invalid_argument);
}

TEST_CASE("variant shorthand expansion") {
    TrackerConfig cfg;
    cfg = apply_variant(cfg, "DSR");
    CHECK(cfg.displacement);
    CHECK(cfg.scale);
    CHECK(cfg.rotation);
    cfg = apply_variant(cfg, "D");
    CHECK(cfg.displacement);
    CHECK_FALSE(cfg.scale);
    CHECK_FALSE(cfg.rotation);
    cfg = apply_variant(cfg, "baseline");
    CHECK_FALSE(cfg.displacement);
    cfg = apply_variant(cfg, "DS");
    CHECK(cfg.displacement);
    CHECK(cfg.scale);
    CHECK_FALSE(cfg.rotation);
    CHECK_THROWS_AS(apply_variant(cfg, "SRD"), std::invalid_argument);
}

TEST_CASE("init builds the requested model") {
    const auto dir = test_dir("tracker_init");
    SynthParams params = synth_preset("rotate");
    params.frames = 3;
    const Sequence seq = synth_sequence(params, dir.string());
    const Image first = read_pgm_file(seq.frame_paths[0]);

    TrackerConfig cfg = fast_config();
    cfg.rotation = true;
    cfg.bank_step_deg = 20.0;
    const TrackerState with_bank = tracker_init(first, seq.ground_truth[0], cfg);
    CHECK(with_bank.bank.size() == 19);
    CHECK(with_bank.bank_angle.degrees() == 0.0);
    CHECK(with_bank.angle_estimate.degrees() == seq.ground_truth[0].angle.degrees());

    cfg.rotation = false;
    const TrackerState plain = tracker_init(first, seq.ground_truth[0], cfg);
    CHECK(plain.bank.size() == 0);
    CHECK(plain.tmpl.channel_count() == 1);

    cfg.mode = TrackerMode::updating_template;
    const TrackerState updating = tracker_init(first, seq.ground_truth[0], cfg);
    CHECK(updating.model_patch.width() == cfg.exemplar_size);
    CHECK(updating.label.width == cfg.exemplar_size);

    RotatedBBox outside{{-50.0, -50.0}, 10.0, 10.0};
    CHECK_THROWS_AS(tracker_init(first, outside, cfg), std::invalid_argument);
}

TEST_CASE("static frame keeps the center for every variant") {
    const auto dir = test_dir("tracker_static");
    SynthParams params = synth_preset("rotate");
    params.frames = 4;
    params.omega_deg = 0.0;
    params.noise_sigma = 0.0;
    const Sequence seq = synth_sequence(params, dir.string());
    const auto frames = load_frames(seq);
    const std::vector<Image> still{frames[0], frames[0], frames[0]};

    for (const std::string variant : {"baseline", "D", "DS", "DSR"}) {
        for (TrackerMode mode : {TrackerMode::fixed_template, TrackerMode::updating_template}) {
            TrackerConfig cfg = apply_variant(fast_config(), variant);
            cfg.mode = mode;
            TrackerState st = tracker_init(still[0], seq.ground_truth[0], cfg);
            for (int f = 1; f < 3; ++f) {
                TrackOutput res = track_frame(st, still[f]);
                st = std::move(res.state);
                CHECK(distance(res.box.center, seq.ground_truth[0].center) <= 1.0);
            }
        }
    }
}

TEST_CASE("pure translation is tracked within a pixel") {
    const auto dir = test_dir("tracker_translate");
    SynthParams params = synth_preset("translate");
    params.frames = 10;
    params.velocity = {3.0, 0.0};
    params.noise_sigma = 0.0;
    const Sequence seq = synth_sequence(params, dir.string());
    const auto frames = load_frames(seq);

    const TrackerConfig cfg = fast_config();  // baseline, fixed template
    TrackerState st = tracker_init(frames[0], seq.ground_truth[0], cfg);
    for (std::size_t f = 1; f < frames.size(); ++f) {
        TrackOutput res = track_frame(st, frames[f]);
        st = std::move(res.state);
        CHECK(distance(res.box.center, seq.ground_truth[f].center) <= 1.0);
    }
}

TEST_CASE("trajectories are deterministic") {
    const auto dir = test_dir("tracker_determinism");
    SynthParams params = synth_preset("combined");
    params.frames = 8;
    const Sequence seq = synth_sequence(params, dir.string());
    const auto frames = load_frames(seq);

    TrackerConfig cfg = apply_variant(fast_config(), "DSR");
    const auto run1 = run_track(seq, frames, cfg);
    const auto run2 = run_track(seq, frames, cfg);
    CHECK(same_boxes(run1, run2));
}

TEST_CASE("independent states do not interact") {
    const auto dir_a = test_dir("tracker_iso_a");
    const auto dir_b = test_dir("tracker_iso_b");
    SynthParams pa = synth_preset("translate");
    pa.frames = 6;
    pa.seed = 3;
    SynthParams pb = synth_preset("rotate");
    pb.frames = 6;
    pb.seed = 4;
    const Sequence sa = synth_sequence(pa, dir_a.string());
    const Sequence sb = synth_sequence(pb, dir_b.string());
    const auto fa = load_frames(sa);
    const auto fb = load_frames(sb);

    TrackerConfig cfg = apply_variant(fast_config(), "DS");
    const auto solo_a = run_track(sa, fa, cfg);
    const auto solo_b = run_track(sb, fb, cfg);

    TrackerState st_a = tracker_init(fa[0], sa.ground_truth[0], cfg);
    TrackerState st_b = tracker_init(fb[0], sb.ground_truth[0], cfg);
    std::vector<RotatedBBox> inter_a{st_a.box}, inter_b{st_b.box};
    for (std::size_t f = 1; f < fa.size(); ++f) {
        TrackOutput ra = track_frame(st_a, fa[f]);
        TrackOutput rb = track_frame(st_b, fb[f]);
        st_a = std::move(ra.state);
        st_b = std::move(rb.state);
        inter_a.push_back(ra.box);
        inter_b.push_back(rb.box);
    }
    CHECK(same_boxes(solo_a, inter_a));
    CHECK(same_boxes(solo_b, inter_b));
}

TEST_CASE("flags off reproduces the raw correlation-peak loop bit for bit") {
    const auto dir = test_dir("tracker_baseline_recovery");
    SynthParams params = synth_preset("translate");
    params.frames = 8;
    params.noise_sigma = 1.0;
    params.jitter_sigma = 1.0;
    const Sequence seq = synth_sequence(params, dir.string());
    const auto frames = load_frames(seq);

    const TrackerConfig cfg = fast_config();
    const auto tracked = run_track(seq, frames, cfg);

    // independent re-statement of the raw pipeline on the backend ops
    const RotatedBBox gt = seq.ground_truth[0];
    const double pad = mat_mean(frames[0].pixels);
    const double target = std::sqrt(gt.width * gt.height);
    const Patch exemplar =
        extract_patch_scaled(frames[0], gt.center, 2.0 * target, cfg.exemplar_size, pad);
    const FeatureMap tmpl = feature_transform(exemplar, true);
    Point2 center = gt.center;
    for (std::size_t f = 1; f < frames.size(); ++f) {
        const double side = 4.0 * target;
        const Patch search = extract_patch_scaled(frames[f], center, side, cfg.search_size, pad);
        const ResponseMap r = xcorr_fft(tmpl, feature_transform(search, false));
        const double off = (cfg.search_size - cfg.exemplar_size) / 2.0;
        const double kappa = side / cfg.search_size;
        center = {center.x + (r.peak.location.x - off) * kappa,
                  center.y + (r.peak.location.y - off) * kappa};
        CHECK(tracked[f].center.x == center.x);
        CHECK(tracked[f].center.y == center.y);
        CHECK(tracked[f].width == gt.width);
        CHECK(tracked[f].height == gt.height);
        CHECK(tracked[f].angle.degrees() == gt.angle.degrees());
    }
}

TEST_CASE("fixed-mode DSR follows an in-plane rotation") {
    const auto dir = test_dir("tracker_rotation");
    SynthParams params = synth_preset("rotate");
    params.frames = 25;
    params.omega_deg = 4.0;
    const Sequence seq = synth_sequence(params, dir.string());
    const auto frames = load_frames(seq);

    TrackerConfig cfg = apply_variant(TrackerConfig{}, "DSR");
    TrackerState st = tracker_init(frames[0], seq.ground_truth[0], cfg);
    int close = 0, counted = 0;
    for (std::size_t f = 1; f < frames.size(); ++f) {
        TrackOutput res = track_frame(st, frames[f]);
        st = std::move(res.state);
        if (f >= 5) {
            ++counted;
            if (angular_distance_deg(res.box.angle, seq.ground_truth[f].angle) <=
                cfg.bank_step_deg / 2.0)
                ++close;
        }
    }
    CHECK(close >= counted * 8 / 10);
}

TEST_CASE("per-frame size ratio stays within the pyramid step range") {
    const auto dir = test_dir("tracker_scale");
    SynthParams params = synth_preset("scale");
    params.frames = 20;
    params.scale_rate = 1.01;
    const Sequence seq = synth_sequence(params, dir.string());
    const auto frames = load_frames(seq);

    TrackerConfig cfg = apply_variant(fast_config(), "DS");
    const auto boxes = run_track(seq, frames, cfg);
    const int n = cfg.consistency.num_scales;
    const double span = std::pow(cfg.consistency.scale_step, (n - 1) / 2.0);
    const double g = cfg.consistency.gamma;
    const double lo = (1.0 - g) + g / span;
    const double hi = (1.0 - g) + g * span;
    for (std::size_t f = 1; f < boxes.size(); ++f) {
        const double ratio = boxes[f].width / boxes[f - 1].width;
        CHECK(ratio >= lo - 1e-9);
        CHECK(ratio <= hi + 1e-9);
        CHECK(boxes[f].width / boxes[f].height ==
              doctest::Approx(boxes[0].width / boxes[0].height).epsilon(1e-9));
    }
}

TEST_CASE("per-frame angle change is bounded by the rotation machinery") {
    const auto dir = test_dir("tracker_anglebound");
    SynthParams params = synth_preset("rotate");
    params.frames = 15;
    const Sequence seq = synth_sequence(params, dir.string());
    const auto frames = load_frames(seq);

    TrackerConfig cfg = apply_variant(TrackerConfig{}, "DSR");
    const auto fixed_boxes = run_track(seq, frames, cfg);
    for (std::size_t f = 1; f < fixed_boxes.size(); ++f)
        CHECK(angular_distance_deg(fixed_boxes[f].angle, fixed_boxes[f - 1].angle) <=
              2.0 * cfg.bank_step_deg + 1e-9);

    cfg.mode = TrackerMode::updating_template;
    cfg.zeta_deg = 8.0;
    const auto cf_boxes = run_track(seq, frames, cfg);
    for (std::size_t f = 1; f < cf_boxes.size(); ++f)
        CHECK(angular_distance_deg(cf_boxes[f].angle, cf_boxes[f - 1].angle) <=
              cfg.zeta_deg + 1e-9);
}

}  // TEST_SUITE
