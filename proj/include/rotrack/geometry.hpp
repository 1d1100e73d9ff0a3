#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace rotrack {

// Coordinate convention used throughout: image coordinates, x to the
// right, y increasing downward. Angles are in degrees, measured
// counter-clockwise in the mathematical sense applied to this grid, so a
// displacement at +90 deg moves downward on screen.

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// An angle kept wrapped into (-180, 180]; -180 maps to +180.
class Angle {
  public:
    Angle() = default;
    static Angle from_degrees(double deg);

    double degrees() const { return deg_; }
    double radians() const { return deg_ * kPi / 180.0; }

    friend bool operator==(Angle a, Angle b) { return a.deg_ == b.deg_; }

  private:
    explicit Angle(double wrapped) : deg_(wrapped) {}
    static constexpr double kPi = 3.14159265358979323846;
    double deg_ = 0.0;
};

// Wraps an arbitrary finite degree value into (-180, 180].
Angle wrap_angle(double deg);

// Shortest signed arc from b to a, in (-180, 180].
double circular_diff_deg(Angle a, Angle b);

// Absolute circular distance in [0, 180].
double angular_distance_deg(Angle a, Angle b);

// Minimal absolute difference between two orientations that are
// equivalent modulo `period` degrees (e.g. 90 for a square box).
double angular_distance_mod(double a_deg, double b_deg, double period);

// Oriented box: center, size and rotation about the center.
// The axis-aligned case is angle = 0.
struct RotatedBBox {
    Point2 center;
    double width = 0.0;
    double height = 0.0;
    Angle angle;

    RotatedBBox() = default;
    RotatedBBox(Point2 c, double w, double h, Angle a = Angle{});

    double area() const { return width * height; }

    // Corner order at angle 0: top-left, top-right, bottom-right,
    // bottom-left; rotation preserves the order.
    std::array<Point2, 4> corners() const;
};

// Intersection over union for axis-aligned boxes only; both angles must
// be exactly 0 (use iou_rotated otherwise).
double iou_axis_aligned(const RotatedBBox& a, const RotatedBBox& b);

// Intersection over union via convex polygon clipping.
double iou_rotated(const RotatedBBox& a, const RotatedBBox& b);

// Euclidean distance between box centers.
double center_error(const RotatedBBox& a, const RotatedBBox& b);

// Smallest axis-aligned box containing the rotated box.
RotatedBBox axis_aligned_hull(const RotatedBBox& b);

}  // namespace rotrack
