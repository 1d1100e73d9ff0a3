#include "rotrack/geometry.hpp"

#include <algorithm>
#include <vector>

namespace rotrack {

Angle Angle::from_degrees(double deg) {
    if (!std::isfinite(deg))
        throw std::invalid_argument("wrap_angle: non-finite input");
    double r = std::fmod(deg, 360.0);
    if (r <= -180.0)
        r += 360.0;
    else if (r > 180.0)
        r -= 360.0;
    if (r == 0.0) r = 0.0;  // normalize -0.0
    return Angle{r};
}

Angle wrap_angle(double deg) { return Angle::from_degrees(deg); }

double circular_diff_deg(Angle a, Angle b) {
    return wrap_angle(a.degrees() - b.degrees()).degrees();
}

double angular_distance_deg(Angle a, Angle b) {
    return std::abs(circular_diff_deg(a, b));
}

double angular_distance_mod(double a_deg, double b_deg, double period) {
    if (period <= 0.0)
        throw std::invalid_argument("angular_distance_mod: period must be positive");
    double d = std::fmod(std::abs(a_deg - b_deg), period);
    return std::min(d, period - d);
}

RotatedBBox::RotatedBBox(Point2 c, double w, double h, Angle a)
    : center(c), width(w), height(h), angle(a) {
    if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(w) || !std::isfinite(h))
        throw std::invalid_argument("RotatedBBox: width and height must be positive");
    if (!std::isfinite(c.x) || !std::isfinite(c.y))
        throw std::invalid_argument("RotatedBBox: non-finite center");
}

std::array<Point2, 4> RotatedBBox::corners() const {
    const double c = std::cos(angle.radians());
    const double s = std::sin(angle.radians());
    const double hw = width / 2.0;
    const double hh = height / 2.0;
    const std::array<Point2, 4> local = {
        Point2{-hw, -hh}, Point2{hw, -hh}, Point2{hw, hh}, Point2{-hw, hh}};
    std::array<Point2, 4> out{};
    for (int i = 0; i < 4; ++i) {
        out[i] = {center.x + local[i].x * c - local[i].y * s,
                  center.y + local[i].x * s + local[i].y * c};
    }
    return out;
}

namespace {

double polygon_area(const std::vector<Point2>& p) {
    double a = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& u = p[i];
        const Point2& v = p[(i + 1) % n];
        a += u.x * v.y - v.x * u.y;
    }
    return std::abs(a) / 2.0;
}

// Sutherland-Hodgman: clip subject polygon against the half-plane to the
// left of edge a->b (for a counter-clockwise clip polygon).
std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, Point2 a, Point2 b) {
    auto side = [&](Point2 p) {
        return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    };
    std::vector<Point2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point2 cur = poly[i];
        Point2 nxt = poly[(i + 1) % n];
        double sc = side(cur);
        double sn = side(nxt);
        if (sc >= 0.0) out.push_back(cur);
        if ((sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0)) {
            double t = sc / (sc - sn);
            out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
        }
    }
    return out;
}

// Ensures counter-clockwise orientation under the y-down convention
// (signed area computed in raw coordinates).
std::vector<Point2> oriented_ccw(const std::array<Point2, 4>& q) {
    std::vector<Point2> p(q.begin(), q.end());
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point2& u = p[i];
        const Point2& v = p[(i + 1) % p.size()];
        a += u.x * v.y - v.x * u.y;
    }
    if (a < 0.0) std::reverse(p.begin(), p.end());
    return p;
}

double convex_intersection_area(const RotatedBBox& a, const RotatedBBox& b) {
    std::vector<Point2> subject = oriented_ccw(a.corners());
    std::vector<Point2> clip = oriented_ccw(b.corners());
    for (std::size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
        subject = clip_halfplane(subject, clip[i], clip[(i + 1) % clip.size()]);
    }
    if (subject.size() < 3) return 0.0;
    return polygon_area(subject);
}

}  // namespace

double iou_axis_aligned(const RotatedBBox& a, const RotatedBBox& b) {
    if (a.angle.degrees() != 0.0 || b.angle.degrees() != 0.0)
        throw std::invalid_argument("iou_axis_aligned: boxes carry a rotation, use iou_rotated");
    const double ax0 = a.center.x - a.width / 2.0, ax1 = a.center.x + a.width / 2.0;
    const double ay0 = a.center.y - a.height / 2.0, ay1 = a.center.y + a.height / 2.0;
    const double bx0 = b.center.x - b.width / 2.0, bx1 = b.center.x + b.width / 2.0;
    const double by0 = b.center.y - b.height / 2.0, by1 = b.center.y + b.height / 2.0;
    const double iw = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
    const double ih = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
    const double inter = iw * ih;
    const double uni = a.area() + b.area() - inter;
    return inter <= 0.0 ? 0.0 : inter / uni;
}

namespace {

// Clipping is asymmetric in roundoff; evaluating both orders the same
// way keeps iou(a, b) == iou(b, a) bit-exact.
bool box_before(const RotatedBBox& a, const RotatedBBox& b) {
    const double ka[5] = {a.center.x, a.center.y, a.width, a.height, a.angle.degrees()};
    const double kb[5] = {b.center.x, b.center.y, b.width, b.height, b.angle.degrees()};
    for (int i = 0; i < 5; ++i) {
        if (ka[i] < kb[i]) return true;
        if (ka[i] > kb[i]) return false;
    }
    return true;
}

}  // namespace

double iou_rotated(const RotatedBBox& a_in, const RotatedBBox& b_in) {
    const RotatedBBox& a = box_before(a_in, b_in) ? a_in : b_in;
    const RotatedBBox& b = box_before(a_in, b_in) ? b_in : a_in;
    if (a.area() <= 0.0 || b.area() <= 0.0)
        throw std::invalid_argument("iou_rotated: degenerate box");
    const double inter = convex_intersection_area(a, b);
    if (inter <= 0.0) return 0.0;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

double center_error(const RotatedBBox& a, const RotatedBBox& b) {
    return distance(a.center, b.center);
}

RotatedBBox axis_aligned_hull(const RotatedBBox& b) {
    if (b.angle.degrees() == 0.0) return b;
    const auto cs = b.corners();
    double x0 = cs[0].x, x1 = cs[0].x, y0 = cs[0].y, y1 = cs[0].y;
    for (const Point2& p : cs) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    return RotatedBBox{{(x0 + x1) / 2.0, (y0 + y1) / 2.0}, x1 - x0, y1 - y0, Angle{}};
}

}  // namespace rotrack
