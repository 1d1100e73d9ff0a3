#include "rotrack/synth.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rotrack/image.hpp"

namespace rotrack {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SplitMix64 {
    std::uint64_t s;
    std::uint64_t next_u64() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double next01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double next_gauss() {
        // Box-Muller; u clamped away from 0
        const double u = std::max(next01(), 1e-300);
        const double v = next01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
    }
};

// Coarse seeded noise upsampled bilinearly: smooth texture that stays
// correlated under small rotations.
Mat smooth_noise(std::uint64_t seed, int cells_x, int cells_y, int out_w, int out_h,
                 double lo, double hi) {
    SplitMix64 rng{seed};
    Image coarse(cells_x, cells_y);
    for (double& v : coarse.pixels.data) v = lo + (hi - lo) * rng.next01();
    Mat out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            const double sx = (x + 0.5) / out_w * cells_x - 0.5;
            const double sy = (y + 0.5) / out_h * cells_y - 0.5;
            const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, cells_x - 1);
            const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, cells_y - 1);
            const int x1 = std::min(x0 + 1, cells_x - 1);
            const int y1 = std::min(y0 + 1, cells_y - 1);
            const double fx = std::clamp(sx - x0, 0.0, 1.0);
            const double fy = std::clamp(sy - y0, 0.0, 1.0);
            const double top = coarse.at(x0, y0) * (1 - fx) + coarse.at(x1, y0) * fx;
            const double bot = coarse.at(x0, y1) * (1 - fx) + coarse.at(x1, y1) * fx;
            out.at(x, y) = top * (1 - fy) + bot * fy;
        }
    }
    return out;
}

double sample_clamped(const Mat& m, double x, double y) {
    x = std::clamp(x, 0.0, static_cast<double>(m.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(m.height - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, m.width - 1);
    const int y1 = std::min(y0 + 1, m.height - 1);
    const double fx = x - x0, fy = y - y0;
    const double top = m.at(x0, y0) * (1 - fx) + m.at(x1, y0) * fx;
    const double bot = m.at(x0, y1) * (1 - fx) + m.at(x1, y1) * fx;
    return top * (1 - fy) + bot * fy;
}

struct Pose {
    Point2 center;
    double size;
    Angle angle;
};

Pose pose_at(const SynthParams& p, int frame) {
    Pose pose;
    pose.center = {p.start_center.x + p.velocity.x * frame,
                   p.start_center.y + p.velocity.y * frame};
    pose.size = p.sprite_size * std::pow(p.scale_rate, frame);
    pose.angle = wrap_angle(p.omega_deg * frame);
    return pose;
}

}  // namespace

SynthParams synth_preset(const std::string& name) {
    SynthParams p;
    p.preset = name;
    if (name == "translate") {
        p.image_width = 256;
        p.image_height = 160;
        p.start_center = {48.0, 80.0};
        p.velocity = {3.0, 0.0};
    } else if (name == "rotate") {
        p.image_width = 160;
        p.image_height = 160;
        p.start_center = {80.0, 80.0};
        p.velocity = {0.0, 0.0};
        p.omega_deg = 4.0;
    } else if (name == "scale") {
        p.image_width = 192;
        p.image_height = 192;
        p.start_center = {96.0, 96.0};
        p.velocity = {0.0, 0.0};
        p.scale_rate = 1.01;
    } else if (name == "combined") {
        p.image_width = 256;
        p.image_height = 192;
        p.start_center = {56.0, 96.0};
        p.velocity = {2.0, 1.0};
        p.omega_deg = 2.0;
        p.scale_rate = 1.005;
    } else {
        throw std::invalid_argument("unknown preset '" + name +
                                    "', expected translate|rotate|scale|combined");
    }
    return p;
}

Sequence synth_sequence(const SynthParams& params, const std::string& out_dir) {
    if (params.frames < 2) throw std::invalid_argument("synth: need at least 2 frames");
    if (!(params.sprite_size >= 8.0)) throw std::invalid_argument("synth: sprite too small");

    const int tex_n = 48;
    const Mat sprite_tex = smooth_noise(params.seed * 2654435761ull + 1, 8, 8, tex_n, tex_n,
                                        0.0, 255.0);
    const Mat background = smooth_noise(params.seed * 2654435761ull + 2, params.image_width / 16,
                                        params.image_height / 16, params.image_width,
                                        params.image_height, 80.0, 176.0);

    const fs::path root(out_dir);
    fs::create_directories(root / "img");

    std::ofstream rect_file(root / "groundtruth_rect.txt", std::ios::trunc);
    std::ofstream poly_file(root / "groundtruth_poly.txt", std::ios::trunc);
    if (!rect_file || !poly_file)
        throw std::runtime_error("synth: cannot write ground truth under " + out_dir);

    for (int f = 0; f < params.frames; ++f) {
        const Pose pose = pose_at(params, f);

        SplitMix64 frame_rng{(params.seed << 20) ^ (static_cast<std::uint64_t>(f) * 0x9E37ull)};
        Point2 render_center = pose.center;
        // the first frame seeds the tracker, so its pose is exact; the
        // jitter models per-frame measurement disturbance afterwards
        if (params.jitter_sigma > 0.0 && f > 0) {
            render_center.x += params.jitter_sigma * frame_rng.next_gauss();
            render_center.y += params.jitter_sigma * frame_rng.next_gauss();
        }

        // bounds check on the rendered polygon
        const RotatedBBox rendered{render_center, pose.size, pose.size, pose.angle};
        for (Point2 c : rendered.corners()) {
            if (c.x < 1.0 || c.y < 1.0 || c.x > params.image_width - 2.0 ||
                c.y > params.image_height - 2.0)
                throw std::runtime_error("synth: sprite leaves the frame bounds at frame " +
                                         std::to_string(f + 1));
        }

        Image frame(params.image_width, params.image_height);
        const double half = pose.size / 2.0;
        const double ca = std::cos(pose.angle.radians());
        const double sa = std::sin(pose.angle.radians());
        for (int y = 0; y < params.image_height; ++y) {
            for (int x = 0; x < params.image_width; ++x) {
                const double dx = x - render_center.x;
                const double dy = y - render_center.y;
                const double lx = dx * ca + dy * sa;
                const double ly = -dx * sa + dy * ca;
                double v;
                if (std::abs(lx) <= half && std::abs(ly) <= half) {
                    const double tx = (lx / pose.size + 0.5) * (tex_n - 1);
                    const double ty = (ly / pose.size + 0.5) * (tex_n - 1);
                    v = sample_clamped(sprite_tex, tx, ty);
                } else {
                    v = background.at(x, y);
                }
                if (params.noise_sigma > 0.0) v += params.noise_sigma * frame_rng.next_gauss();
                frame.at(x, y) = std::clamp(v, 0.0, 255.0);
            }
        }

        char name[32];
        std::snprintf(name, sizeof name, "%04d.pgm", f + 1);
        write_pgm_file(frame, (root / "img" / name).string());

        // ground truth records the analytic pose, never the jitter
        const double w = pose.size, h = pose.size;
        const RotatedBBox gt{pose.center, w, h, pose.angle};
        const auto cs = gt.corners();
        char line[256];
        std::snprintf(line, sizeof line,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", cs[0].x, cs[0].y,
                      cs[1].x, cs[1].y, cs[2].x, cs[2].y, cs[3].x, cs[3].y);
        poly_file << line;

        const RotatedBBox hull = axis_aligned_hull(gt);
        const long wi = std::lround(hull.width);
        const long hi = std::lround(hull.height);
        const long xi = std::lround(hull.center.x - (wi - 1) / 2.0) + 1;
        const long yi = std::lround(hull.center.y - (hi - 1) / 2.0) + 1;
        std::snprintf(line, sizeof line, "%ld,%ld,%ld,%ld\n", xi, yi, wi, hi);
        rect_file << line;
    }
    rect_file.close();
    poly_file.close();

    return load_sequence(out_dir);
}

}  // namespace rotrack
