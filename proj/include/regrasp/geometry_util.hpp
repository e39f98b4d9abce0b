#pragma once

#include "regrasp/transform.hpp"

#include <array>
#include <vector>

namespace regrasp {

struct TriangleMesh;

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);
double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
double segment_triangle_distance(const Vec3& p0, const Vec3& p1, const Vec3& a, const Vec3& b,
                                 const Vec3& c);

// Box with an arbitrary rigid pose; `half` are the local half-extents.
struct OrientedBox {
    Transform pose = Transform::Identity();
    Vec3 half = Vec3::Zero();

    std::array<Vec3, 8> corners() const;
    bool contains(const Vec3& p, double tol = 0.0) const;
};

// Exact separating-axis test (3 box axes, triangle normal, 9 edge crosses).
bool box_triangle_intersect(const OrientedBox& box, const Vec3& a, const Vec3& b, const Vec3& c);

bool box_mesh_intersect(const OrientedBox& box, const TriangleMesh& mesh);

// Flat-capped cylinder from `base` along `axis` (unit) for `length`.
// The intersection test treats it as the enclosing capsule, which can only
// over-report contact near the caps.
struct Cylinder {
    Vec3 base = Vec3::Zero();
    Vec3 axis = Vec3::UnitZ();
    double length = 0.0;
    double radius = 0.0;

    bool contains(const Vec3& p, double tol = 0.0) const;
};

bool cylinder_triangle_intersect(const Cylinder& cyl, const Vec3& a, const Vec3& b, const Vec3& c);

// 2D helpers for support polygons (convex, CCW).
double point_in_convex_polygon_margin(const Vec2& p, const std::vector<Vec2>& poly);
std::vector<Vec2> convex_hull_2d(std::vector<Vec2> points);
Vec2 polygon_centroid(const std::vector<Vec2>& poly);
double polygon_principal_angle(const std::vector<Vec2>& poly);

}  // namespace regrasp
