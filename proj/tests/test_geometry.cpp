#include <cmath>
#include <cstdint>
#include <random>

#include "doctest.h"
#include "rotrack/geometry.hpp"

using namespace rotrack;

namespace {

// Deterministic generator for the point-sampling oracle.
struct SplitMix64 {
    std::uint64_t s;
    double next01() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

bool point_in_box(const RotatedBBox& b, Point2 p) {
    const double c = std::cos(b.angle.radians());
    const double s = std::sin(b.angle.radians());
    const double dx = p.x - b.center.x;
    const double dy = p.y - b.center.y;
    const double lx = dx * c + dy * s;
    const double ly = -dx * s + dy * c;
    return std::abs(lx) <= b.width / 2.0 && std::abs(ly) <= b.height / 2.0;
}

// Stratified Monte-Carlo IoU: one jittered sample per grid cell over the
// joint bounding rectangle; the ratio of hit counts estimates IoU.
double mc_iou(const RotatedBBox& a, const RotatedBBox& b, int grid, std::uint64_t seed) {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const RotatedBBox* box : {&a, &b}) {
        for (Point2 p : box->corners()) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    }
    SplitMix64 rng{seed};
    long inter = 0, uni = 0;
    const double cw = (x1 - x0) / grid, ch = (y1 - y0) / grid;
    for (int gy = 0; gy < grid; ++gy) {
        for (int gx = 0; gx < grid; ++gx) {
            const Point2 p{x0 + (gx + rng.next01()) * cw, y0 + (gy + rng.next01()) * ch};
            const bool ia = point_in_box(a, p);
            const bool ib = point_in_box(b, p);
            inter += (ia && ib) ? 1 : 0;
            uni += (ia || ib) ? 1 : 0;
        }
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

RotatedBBox random_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(0.0, 6.0);
    std::uniform_real_distribution<double> dim(0.5, 4.0);
    std::uniform_real_distribution<double> ang(-180.0, 180.0);
    return RotatedBBox{{pos(rng), pos(rng)}, dim(rng), dim(rng), wrap_angle(ang(rng))};
}

RotatedBBox rotate_about(const RotatedBBox& b, Point2 pivot, double deg) {
    const double r = deg * 3.14159265358979323846 / 180.0;
    const double c = std::cos(r), s = std::sin(r);
    const Point2 d = b.center - pivot;
    const Point2 nc{pivot.x + d.x * c - d.y * s, pivot.y + d.x * s + d.y * c};
    return RotatedBBox{nc, b.width, b.height, wrap_angle(b.angle.degrees() + deg)};
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("wrap_angle examples and domain") {
    CHECK(wrap_angle(190.0).degrees() == doctest::Approx(-170.0));
    CHECK(wrap_angle(-180.0).degrees() == 180.0);
    CHECK(wrap_angle(0.0).degrees() == 0.0);
    CHECK(wrap_angle(540.0).degrees() == 180.0);
    CHECK(wrap_angle(-360.0).degrees() == 0.0);
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("wrap_angle is idempotent") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        const double once = wrap_angle(x).degrees();
        CHECK(wrap_angle(once).degrees() == once);
        CHECK(once > -180.0);
        CHECK(once <= 180.0);
    }
}

TEST_CASE("corner polygon area matches width*height") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
        const RotatedBBox b = random_box(rng);
        const auto cs = b.corners();
        double a2 = 0.0;
        for (int k = 0; k < 4; ++k) {
            const Point2& u = cs[k];
            const Point2& v = cs[(k + 1) % 4];
            a2 += u.x * v.y - v.x * u.y;
        }
        const double area = std::abs(a2) / 2.0;
        CHECK(area == doctest::Approx(b.area()).epsilon(1e-9));
    }
}

TEST_CASE("iou_axis_aligned examples") {
    const RotatedBBox a{{1.0, 1.0}, 2.0, 2.0};
    const RotatedBBox b{{2.0, 2.0}, 2.0, 2.0};
    CHECK(iou_axis_aligned(a, a) == doctest::Approx(1.0));
    CHECK(iou_axis_aligned(a, b) == doctest::Approx(1.0 / 7.0));
    const RotatedBBox far{{100.0, 100.0}, 2.0, 2.0};
    CHECK(iou_axis_aligned(a, far) == 0.0);
    const RotatedBBox rot{{1.0, 1.0}, 2.0, 2.0, wrap_angle(10.0)};
    CHECK_THROWS_AS(iou_axis_aligned(a, rot), std::invalid_argument);
}

TEST_CASE("iou_rotated basic examples") {
    const RotatedBBox b{{3.0, 4.0}, 2.0, 1.0, wrap_angle(33.0)};
    CHECK(iou_rotated(b, b) == doctest::Approx(1.0).epsilon(1e-9));

    const RotatedBBox sq0{{0.0, 0.0}, 1.0, 1.0};
    const RotatedBBox sq45{{0.0, 0.0}, 1.0, 1.0, wrap_angle(45.0)};
    const double analytic = iou_rotated(sq0, sq45);
    CHECK(analytic == doctest::Approx(0.7071).epsilon(2e-3));
    CHECK(std::abs(analytic - mc_iou(sq0, sq45, 1000, 77)) <= 1e-3);

    const RotatedBBox farbox{{50.0, 0.0}, 1.0, 1.0, wrap_angle(13.0)};
    CHECK(iou_rotated(sq0, farbox) == 0.0);

    CHECK_THROWS_AS(iou_rotated(sq0, RotatedBBox{}), std::invalid_argument);
}

TEST_CASE("iou_rotated is symmetric and matches axis-aligned at angle 0") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        RotatedBBox a = random_box(rng);
        RotatedBBox b = random_box(rng);
        CHECK(iou_rotated(a, b) == iou_rotated(b, a));

        a.angle = Angle{};
        b.angle = Angle{};
        CHECK(std::abs(iou_rotated(a, b) - iou_axis_aligned(a, b)) <= 1e-9);
    }
}

TEST_CASE("iou_rotated is rotation equivariant") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> ang(-180.0, 180.0);
    for (int i = 0; i < 100; ++i) {
        const RotatedBBox a = random_box(rng);
        const RotatedBBox b = random_box(rng);
        const double base = iou_rotated(a, b);
        const double deg = ang(rng);
        const Point2 pivot{3.0, 3.0};
        const double turned = iou_rotated(rotate_about(a, pivot, deg), rotate_about(b, pivot, deg));
        CHECK(std::abs(base - turned) <= 1e-9);
    }
}

TEST_CASE("iou_rotated agrees with the Monte-Carlo oracle on 200 random pairs") {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 200; ++i) {
        const RotatedBBox a = random_box(rng);
        const RotatedBBox b = random_box(rng);
        const double exact = iou_rotated(a, b);
        const double sampled = mc_iou(a, b, 700, 1000 + i);
        CHECK(std::abs(exact - sampled) <= 2e-3);
    }
}

TEST_CASE("center_error examples") {
    const RotatedBBox a{{0.0, 0.0}, 1.0, 1.0};
    const RotatedBBox b{{3.0, 4.0}, 2.0, 5.0, wrap_angle(20.0)};
    CHECK(center_error(a, a) == 0.0);
    CHECK(center_error(a, b) == doctest::Approx(5.0));
    const RotatedBBox c{{1.0, 1.0}, 1.0, 1.0};
    const RotatedBBox d{{1.0, 2.0}, 1.0, 1.0};
    CHECK(center_error(c, d) == doctest::Approx(1.0));
}

TEST_CASE("axis_aligned_hull contains the box") {
    const RotatedBBox b{{5.0, 5.0}, 4.0, 2.0, wrap_angle(30.0)};
    const RotatedBBox hull = axis_aligned_hull(b);
    CHECK(hull.angle.degrees() == 0.0);
    for (Point2 p : b.corners()) {
        CHECK(p.x >= hull.center.x - hull.width / 2.0 - 1e-12);
        CHECK(p.x <= hull.center.x + hull.width / 2.0 + 1e-12);
        CHECK(p.y >= hull.center.y - hull.height / 2.0 - 1e-12);
        CHECK(p.y <= hull.center.y + hull.height / 2.0 + 1e-12);
    }
}

TEST_CASE("angular_distance_mod") {
    CHECK(angular_distance_mod(10.0, 100.0, 90.0) == doctest::Approx(0.0));
    CHECK(angular_distance_mod(-170.0, 10.0, 180.0) == doctest::Approx(0.0));
    CHECK(angular_distance_mod(5.0, 0.0, 90.0) == doctest::Approx(5.0));
}

}  // TEST_SUITE
