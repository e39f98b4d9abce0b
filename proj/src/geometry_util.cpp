#include "regrasp/geometry_util.hpp"

#include "regrasp/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace regrasp {

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    Vec3 ab = b - a;
    double len2 = ab.squaredNorm();
    if (len2 < 1e-30) return (p - a).norm();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

// Ericson, "Real-Time Collision Detection", closest points of two segments.
double segment_segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
    double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    double s, t;
    if (a < 1e-30 && e < 1e-30) return r.norm();
    if (a < 1e-30) {
        s = 0.0;
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        double c = d1.dot(r);
        if (e < 1e-30) {
            t = 0.0;
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            double b = d1.dot(d2);
            double denom = a * e - b * b;
            s = denom > 1e-30 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;
    Vec3 bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
    Vec3 cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
    double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    return (p - closest_point_on_triangle(p, a, b, c)).norm();
}

double segment_triangle_distance(const Vec3& p0, const Vec3& p1, const Vec3& a, const Vec3& b,
                                 const Vec3& c) {
    // Zero if the segment pierces the triangle interior.
    Vec3 n = (b - a).cross(c - a);
    double n2 = n.squaredNorm();
    if (n2 > 1e-30) {
        double da = n.dot(p0 - a), db = n.dot(p1 - a);
        if (da * db <= 0.0 && std::abs(da - db) > 1e-30) {
            double t = da / (da - db);
            Vec3 x = p0 + t * (p1 - p0);
            // barycentric inside test
            Vec3 v0 = b - a, v1 = c - a, v2 = x - a;
            double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
            double d20 = v2.dot(v0), d21 = v2.dot(v1);
            double denom = d00 * d11 - d01 * d01;
            if (std::abs(denom) > 1e-30) {
                double v = (d11 * d20 - d01 * d21) / denom;
                double w = (d00 * d21 - d01 * d20) / denom;
                if (v >= 0.0 && w >= 0.0 && v + w <= 1.0) return 0.0;
            }
        }
    }
    double best = std::min(point_triangle_distance(p0, a, b, c),
                           point_triangle_distance(p1, a, b, c));
    best = std::min(best, segment_segment_distance(p0, p1, a, b));
    best = std::min(best, segment_segment_distance(p0, p1, b, c));
    best = std::min(best, segment_segment_distance(p0, p1, c, a));
    return best;
}

std::array<Vec3, 8> OrientedBox::corners() const {
    std::array<Vec3, 8> out;
    for (int i = 0; i < 8; ++i)
        out[i] = pose * Vec3(i & 1 ? half.x() : -half.x(), i & 2 ? half.y() : -half.y(),
                             i & 4 ? half.z() : -half.z());
    return out;
}

bool OrientedBox::contains(const Vec3& p, double tol) const {
    Vec3 local = pose.inverse() * p;
    return std::abs(local.x()) <= half.x() + tol && std::abs(local.y()) <= half.y() + tol &&
           std::abs(local.z()) <= half.z() + tol;
}

// Akenine-Moller triangle/AABB in the box frame.
bool box_triangle_intersect(const OrientedBox& box, const Vec3& a, const Vec3& b, const Vec3& c) {
    Transform inv = box.pose.inverse();
    Vec3 v0 = inv * a, v1 = inv * b, v2 = inv * c;
    const Vec3& h = box.half;

    auto axis_separates = [&](const Vec3& axis) {
        double len2 = axis.squaredNorm();
        if (len2 < 1e-30) return false;
        double p0 = axis.dot(v0), p1 = axis.dot(v1), p2 = axis.dot(v2);
        double r = h.x() * std::abs(axis.x()) + h.y() * std::abs(axis.y()) +
                   h.z() * std::abs(axis.z());
        double lo = std::min({p0, p1, p2}), hi = std::max({p0, p1, p2});
        return lo > r || hi < -r;
    };

    // box face normals
    if (axis_separates(Vec3::UnitX()) || axis_separates(Vec3::UnitY()) ||
        axis_separates(Vec3::UnitZ()))
        return false;
    // triangle normal
    Vec3 e0 = v1 - v0, e1 = v2 - v1, e2 = v0 - v2;
    if (axis_separates(e0.cross(e1))) return false;
    // 9 cross axes
    const Vec3 units[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    for (const Vec3& u : units)
        for (const Vec3& e : {e0, e1, e2})
            if (axis_separates(u.cross(e))) return false;
    return true;
}

bool box_mesh_intersect(const OrientedBox& box, const TriangleMesh& mesh) {
    for (int i = 0; i < mesh.triangle_count(); ++i)
        if (box_triangle_intersect(box, mesh.triangle_vertex(i, 0), mesh.triangle_vertex(i, 1),
                                   mesh.triangle_vertex(i, 2)))
            return true;
    return false;
}

bool Cylinder::contains(const Vec3& p, double tol) const {
    Vec3 d = p - base;
    double along = d.dot(axis);
    if (along < -tol || along > length + tol) return false;
    return (d - along * axis).norm() <= radius + tol;
}

bool cylinder_triangle_intersect(const Cylinder& cyl, const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 tip = cyl.base + cyl.length * cyl.axis;
    return segment_triangle_distance(cyl.base, tip, a, b, c) <= cyl.radius;
}

double point_in_convex_polygon_margin(const Vec2& p, const std::vector<Vec2>& poly) {
    // Positive inside: min distance to any edge line, measured inward for a
    // CCW polygon. Negative outside.
    double margin = std::numeric_limits<double>::infinity();
    int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        Vec2 a = poly[i], b = poly[(i + 1) % n];
        Vec2 e = b - a;
        double len = e.norm();
        if (len < 1e-15) continue;
        // inward normal of a CCW edge is (-ey, ex)
        Vec2 inward(-e.y() / len, e.x() / len);
        margin = std::min(margin, inward.dot(p - a));
    }
    return margin;
}

std::vector<Vec2> convex_hull_2d(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) {
                              return (a - b).norm() < 1e-12;
                          }),
              pts.end());
    int n = static_cast<int>(pts.size());
    if (n < 3) return pts;
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Vec2> hull(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-15) --k;
        hull[k++] = pts[i];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-15) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;  // CCW
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
    double a2 = 0.0;
    Vec2 acc = Vec2::Zero();
    int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        double cr = p.x() * q.y() - q.x() * p.y();
        a2 += cr;
        acc += cr * (p + q);
    }
    if (std::abs(a2) < 1e-18) {
        acc = Vec2::Zero();
        for (const auto& p : poly) acc += p;
        return acc / std::max(n, 1);
    }
    return acc / (3.0 * a2);
}

double polygon_principal_angle(const std::vector<Vec2>& poly) {
    // Second area moments about the centroid; principal axis from the 2x2
    // covariance eigenvector. Near-isotropic polygons keep angle 0.
    Vec2 c = polygon_centroid(poly);
    double ixx = 0, iyy = 0, ixy = 0;
    int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        Vec2 p = poly[i] - c, q = poly[(i + 1) % n] - c;
        double cr = p.x() * q.y() - q.x() * p.y();
        ixx += cr * (p.y() * p.y() + p.y() * q.y() + q.y() * q.y());
        iyy += cr * (p.x() * p.x() + p.x() * q.x() + q.x() * q.x());
        ixy += cr * (p.x() * q.y() + 2 * p.x() * p.y() + 2 * q.x() * q.y() + q.x() * p.y());
    }
    ixx /= 12.0;
    iyy /= 12.0;
    ixy /= 24.0;
    // covariance-like matrix of the region: [[iyy, ixy], [ixy, ixx]]
    double diff = iyy - ixx;
    if (std::abs(diff) < 1e-15 && std::abs(ixy) < 1e-15) return 0.0;
    double angle = 0.5 * std::atan2(2.0 * ixy, diff);
    // Normalize to (-pi/2, pi/2] so +x alignment is unambiguous.
    if (angle <= -M_PI / 2) angle += M_PI;
    if (angle > M_PI / 2) angle -= M_PI;
    return angle;
}

}  // namespace regrasp
