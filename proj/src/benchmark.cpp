#include "rotrack/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rotrack/image.hpp"

namespace rotrack {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

bool numeric_key(const std::string& stem, long long& key) {
    // last run of digits in the stem orders the frames
    int end = -1;
    for (int i = static_cast<int>(stem.size()) - 1; i >= 0; --i) {
        if (std::isdigit(static_cast<unsigned char>(stem[i]))) {
            end = i;
            break;
        }
    }
    if (end < 0) return false;
    int begin = end;
    while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
    key = std::stoll(stem.substr(begin, end - begin + 1));
    return true;
}

std::vector<double> parse_numbers(const std::string& line) {
    std::string s = line;
    for (char& c : s)
        if (c == ',' || c == '\t') c = ' ';
    std::istringstream in(s);
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    return out;
}

RotatedBBox box_from_rect_line(const std::vector<double>& v) {
    const double x = v[0], y = v[1], w = v[2], h = v[3];
    if (!(w > 0.0) || !(h > 0.0)) throw std::runtime_error("non-positive box size");
    // 1-based integer top-left: center = x - 1 + (w - 1) / 2
    return RotatedBBox{{x - 1.0 + (w - 1.0) / 2.0, y - 1.0 + (h - 1.0) / 2.0}, w, h, Angle{}};
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const int n = static_cast<int>(pts.size());
    if (n < 3) return pts;
    auto cross = [](Point2 o, Point2 a, Point2 b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Point2> hull(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const int lower = k + 1;
    for (int i = n - 2; i >= 0; --i) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

RotatedBBox min_area_rect(const std::vector<Point2>& pts) {
    const std::vector<Point2> hull = convex_hull(pts);
    if (hull.size() < 3) {
        // degenerate polygon; report it upstream with line context
        throw std::runtime_error("degenerate polygon");
    }
    double best_area = 1e300;
    RotatedBBox best{{0, 0}, 1, 1};
    const int n = static_cast<int>(hull.size());
    for (int i = 0; i < n; ++i) {
        const Point2 e = hull[(i + 1) % n] - hull[i];
        const double len = norm(e);
        if (len == 0.0) continue;
        const double ux = e.x / len, uy = e.y / len;
        double lo_u = 1e300, hi_u = -1e300, lo_v = 1e300, hi_v = -1e300;
        for (const Point2& p : hull) {
            const double u = p.x * ux + p.y * uy;
            const double v = -p.x * uy + p.y * ux;
            lo_u = std::min(lo_u, u);
            hi_u = std::max(hi_u, u);
            lo_v = std::min(lo_v, v);
            hi_v = std::max(hi_v, v);
        }
        const double w = hi_u - lo_u, h = hi_v - lo_v;
        if (w * h < best_area) {
            best_area = w * h;
            const double cu = (lo_u + hi_u) / 2.0, cv = (lo_v + hi_v) / 2.0;
            const Point2 center{cu * ux - cv * uy, cu * uy + cv * ux};
            best = RotatedBBox{center, w, h,
                               wrap_angle(std::atan2(uy, ux) * 180.0 / 3.14159265358979323846)};
        }
    }
    return best;
}

RotatedBBox box_from_poly_line(const std::vector<double>& v) {
    std::vector<Point2> pts;
    for (int i = 0; i < 4; ++i) pts.push_back({v[2 * i], v[2 * i + 1]});

    // exact rectangles keep the full orientation encoded by the corner
    // order; anything else falls back to the minimal-area box
    const Point2 e1 = pts[1] - pts[0];
    const Point2 e2 = pts[3] - pts[0];
    const Point2 e3 = pts[2] - pts[1];
    const double dot = e1.x * e2.x + e1.y * e2.y;
    const bool rectangular = std::abs(dot) <= 1e-6 * std::max(1.0, norm(e1) * norm(e2)) &&
                             std::abs(norm(e3) - norm(e2)) <= 1e-6 * std::max(1.0, norm(e2));
    if (rectangular && norm(e1) > 0.0 && norm(e2) > 0.0) {
        const Point2 center{(pts[0].x + pts[2].x) / 2.0, (pts[0].y + pts[2].y) / 2.0};
        return RotatedBBox{center, norm(e1), norm(e2),
                           wrap_angle(std::atan2(e1.y, e1.x) * 180.0 / 3.14159265358979323846)};
    }
    return min_area_rect(pts);
}

std::vector<RotatedBBox> load_gt_file(const std::string& path, bool poly) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<RotatedBBox> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const std::vector<double> nums = parse_numbers(line);
        const std::size_t need = poly ? 8 : 4;
        if (nums.size() != need)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(need) + " numbers, got " +
                                     std::to_string(nums.size()));
        try {
            out.push_back(poly ? box_from_poly_line(nums) : box_from_rect_line(nums));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

Sequence load_sequence(const std::string& dir) {
    const fs::path root(dir);
    const fs::path img_dir = root / "img";
    if (!fs::is_directory(img_dir))
        throw std::runtime_error("load_sequence: missing img/ directory under " + dir);

    struct Frame {
        long long key;
        std::string path;
    };
    std::vector<Frame> frames;
    for (const auto& entry : fs::directory_iterator(img_dir)) {
        if (!entry.is_regular_file()) continue;
        long long key = 0;
        if (!numeric_key(entry.path().stem().string(), key))
            throw std::runtime_error("load_sequence: frame name without a number: " +
                                     entry.path().filename().string());
        frames.push_back({key, entry.path().string()});
    }
    if (frames.size() < 2)
        throw std::runtime_error("load_sequence: need at least 2 frames in " + dir);
    std::sort(frames.begin(), frames.end(),
              [](const Frame& a, const Frame& b) { return a.key < b.key; });

    Sequence seq;
    seq.name = root.filename().string();
    if (seq.name.empty()) seq.name = root.parent_path().filename().string();
    for (const Frame& f : frames) seq.frame_paths.push_back(f.path);

    const fs::path poly = root / "groundtruth_poly.txt";
    const fs::path rect = root / "groundtruth_rect.txt";
    if (fs::exists(poly)) {
        seq.ground_truth = load_gt_file(poly.string(), true);
        seq.rotated_gt = true;
    } else if (fs::exists(rect)) {
        seq.ground_truth = load_gt_file(rect.string(), false);
        seq.rotated_gt = false;
    } else {
        throw std::runtime_error("MissingGroundTruth: no groundtruth_rect.txt in " + dir);
    }
    if (seq.ground_truth.empty())
        throw std::runtime_error("MissingGroundTruth: empty ground truth in " + dir);
    if (seq.ground_truth.size() != seq.frame_paths.size())
        throw std::runtime_error("load_sequence: " + std::to_string(seq.frame_paths.size()) +
                                 " frames but " + std::to_string(seq.ground_truth.size()) +
                                 " ground-truth lines in " + dir);
    return seq;
}

std::vector<double> success_curve(const std::vector<double>& ious) {
    std::vector<double> curve(101, 0.0);
    if (ious.empty()) return curve;
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        int count = 0;
        for (double v : ious)
            if (v > t) ++count;
        curve[i] = static_cast<double>(count) / static_cast<double>(ious.size());
    }
    return curve;
}

double precision_at(const std::vector<double>& errors, double threshold_px) {
    if (errors.empty()) return 0.0;
    int count = 0;
    for (double v : errors)
        if (v <= threshold_px) ++count;
    return static_cast<double>(count) / static_cast<double>(errors.size());
}

std::vector<double> precision_curve(const std::vector<double>& errors) {
    std::vector<double> curve(51, 0.0);
    for (int t = 0; t <= 50; ++t) curve[t] = precision_at(errors, static_cast<double>(t));
    return curve;
}

double auc_of(const std::vector<double>& success) {
    double s = 0.0;
    for (double v : success) s += v;
    return success.empty() ? 0.0 : s / static_cast<double>(success.size());
}

namespace {

void score_frame(const RotatedBBox& pred, const RotatedBBox& gt, bool rotated_gt,
                 EvalResult& out) {
    double iou;
    if (rotated_gt) {
        iou = iou_rotated(pred, gt);
    } else {
        iou = iou_axis_aligned(axis_aligned_hull(pred), gt);
    }
    out.boxes.push_back(pred);
    out.ious.push_back(iou);
    out.center_errors.push_back(center_error(pred, gt));
}

// One pass from a 0-based start frame to the end of the sequence.
void run_segment(const Sequence& seq, const TrackerConfig& config, int start,
                 EvalResult& out) {
    const Image first = read_pgm_file(seq.frame_paths[start]);
    TrackerState state = tracker_init(first, seq.ground_truth[start], config);
    score_frame(state.box, seq.ground_truth[start], seq.rotated_gt, out);
    for (std::size_t f = start + 1; f < seq.frame_paths.size(); ++f) {
        const Image frame = read_pgm_file(seq.frame_paths[f]);
        TrackOutput res = track_frame(state, frame);
        state = std::move(res.state);
        score_frame(res.box, seq.ground_truth[f], seq.rotated_gt, out);
    }
}

void finish_result(EvalResult& out) {
    out.frames = static_cast<int>(out.ious.size());
    out.success = success_curve(out.ious);
    out.precision = precision_curve(out.center_errors);
    out.auc = auc_of(out.success);
    out.precision_at_20 = precision_at(out.center_errors, 20.0);
}

}  // namespace

EvalResult run_ope(const Sequence& seq, const TrackerConfig& config) {
    return run_tre(seq, config, 1);
}

EvalResult run_tre(const Sequence& seq, const TrackerConfig& config, int segments) {
    if (segments < 1) throw std::invalid_argument("run_tre: segments must be >= 1");
    const int length = static_cast<int>(seq.frame_paths.size());
    std::vector<int> starts;
    for (int i = 0; i < segments; ++i) {
        const int start1 = 1 + static_cast<int>(std::floor(static_cast<double>(i) * length /
                                                           segments));
        if (start1 > length - 1)
            throw std::invalid_argument("run_tre: sequence too short for " +
                                        std::to_string(segments) + " segments");
        starts.push_back(start1 - 1);
    }

    const auto t0 = std::chrono::steady_clock::now();
    EvalResult out;
    for (int start : starts) run_segment(seq, config, start, out);
    finish_result(out);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

CompareReport compare_results(const std::vector<NamedResult>& baseline,
                              const std::vector<NamedResult>& variant) {
    if (baseline.size() != variant.size())
        throw std::invalid_argument("compare: result counts differ");
    auto sorted = [](std::vector<NamedResult> v) {
        std::sort(v.begin(), v.end(),
                  [](const NamedResult& a, const NamedResult& b) { return a.name < b.name; });
        return v;
    };
    const auto base = sorted(baseline);
    const auto var = sorted(variant);
    CompareReport rep;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base[i].name != var[i].name)
            throw std::invalid_argument("compare: sequence sets differ ('" + base[i].name +
                                        "' vs '" + var[i].name + "')");
        CompareEntry e;
        e.name = base[i].name;
        e.auc_baseline = base[i].auc;
        e.auc_variant = var[i].auc;
        e.precision_baseline = base[i].precision_at_20;
        e.precision_variant = var[i].precision_at_20;
        rep.entries.push_back(e);

        const double da = e.auc_variant - e.auc_baseline;
        const double dp = e.precision_variant - e.precision_baseline;
        rep.mean_auc_delta += da;
        rep.mean_precision_delta += dp;
        (da > 0 ? rep.auc_positive : da < 0 ? rep.auc_negative : rep.auc_zero) += 1;
        (dp > 0 ? rep.precision_positive : dp < 0 ? rep.precision_negative : rep.precision_zero) += 1;
    }
    if (!rep.entries.empty()) {
        rep.mean_auc_delta /= static_cast<double>(rep.entries.size());
        rep.mean_precision_delta /= static_cast<double>(rep.entries.size());
    }
    return rep;
}

std::string compare_to_json(const CompareReport& report) {
    ordered_json j;
    j["sequences"] = ordered_json::array();
    for (const CompareEntry& e : report.entries) {
        ordered_json row;
        row["name"] = e.name;
        row["auc_baseline"] = e.auc_baseline;
        row["auc_variant"] = e.auc_variant;
        row["auc_delta"] = e.auc_variant - e.auc_baseline;
        row["precision_baseline"] = e.precision_baseline;
        row["precision_variant"] = e.precision_variant;
        row["precision_delta"] = e.precision_variant - e.precision_baseline;
        j["sequences"].push_back(row);
    }
    j["mean_auc_delta"] = report.mean_auc_delta;
    j["mean_precision_delta"] = report.mean_precision_delta;
    j["sign_test"] = {
        {"auc_positive", report.auc_positive},
        {"auc_negative", report.auc_negative},
        {"auc_zero", report.auc_zero},
        {"precision_positive", report.precision_positive},
        {"precision_negative", report.precision_negative},
        {"precision_zero", report.precision_zero},
    };
    return j.dump(2);
}

std::string compare_table(const CompareReport& report) {
    std::ostringstream out;
    double auc_b = 0.0, auc_v = 0.0, pr_b = 0.0, pr_v = 0.0;
    for (const CompareEntry& e : report.entries) {
        auc_b += e.auc_baseline;
        auc_v += e.auc_variant;
        pr_b += e.precision_baseline;
        pr_v += e.precision_variant;
    }
    const double n = report.entries.empty() ? 1.0 : static_cast<double>(report.entries.size());
    out << "Tracker    Success(AUC)  Precision(20px)\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "baseline   %10.4f  %12.4f\n", auc_b / n, pr_b / n);
    out << buf;
    std::snprintf(buf, sizeof buf, "variant    %10.4f  %12.4f\n", auc_v / n, pr_v / n);
    out << buf;
    std::snprintf(buf, sizeof buf, "delta      %+10.4f  %+12.4f\n", (auc_v - auc_b) / n,
                  (pr_v - pr_b) / n);
    out << buf;
    out << "sign test: AUC +" << report.auc_positive << "/-" << report.auc_negative << "/="
        << report.auc_zero << ", precision +" << report.precision_positive << "/-"
        << report.precision_negative << "/=" << report.precision_zero << " over "
        << report.entries.size() << " sequences\n";
    return out.str();
}

std::string eval_to_json(const EvalResult& result, const TrackerConfig& config,
                         const std::string& sequence_name) {
    ordered_json j;
    j["sequence"] = sequence_name;
    j["config"] = ordered_json::parse(config_to_json(config));
    j["frames"] = result.frames;
    j["boxes"] = ordered_json::array();
    for (const RotatedBBox& b : result.boxes)
        j["boxes"].push_back({b.center.x, b.center.y, b.width, b.height, b.angle.degrees()});
    j["ious"] = result.ious;
    j["center_errors"] = result.center_errors;
    j["success"] = result.success;
    j["precision"] = result.precision;
    j["auc"] = result.auc;
    j["precision_at_20"] = result.precision_at_20;
    return j.dump(2);
}

std::string eval_to_csv(const EvalResult& result) {
    std::ostringstream out;
    out << "iou_threshold,success,center_threshold,precision\n";
    char buf[160];
    for (int i = 0; i <= 100; ++i) {
        const double t_iou = i / 100.0;
        const double t_px = i * 0.5;
        std::snprintf(buf, sizeof buf, "%.2f,%.17g,%.1f,%.17g\n", t_iou, result.success[i], t_px,
                      precision_at(result.center_errors, t_px));
        out << buf;
    }
    return out.str();
}

}  // namespace rotrack
