#include "regrasp/hull.hpp"

#include "regrasp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace regrasp {

double ConvexHull::volume() const {
    double vol6 = 0.0;
    for (const auto& f : faces)
        vol6 += points[f[0]].dot(points[f[1]].cross(points[f[2]]));
    return vol6 / 6.0;
}

Vec3 ConvexHull::face_normal(int f) const {
    const auto& t = faces[f];
    return (points[t[1]] - points[t[0]]).cross(points[t[2]] - points[t[0]]).normalized();
}

double ConvexHull::signed_distance(const Vec3& p) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t f = 0; f < faces.size(); ++f)
        worst = std::max(worst, face_normal(static_cast<int>(f)).dot(p - points[faces[f][0]]));
    return worst;
}

bool ConvexHull::contains(const Vec3& p, double tol) const {
    return signed_distance(p) <= tol;
}

namespace {

struct HullFace {
    std::array<int, 3> v;
    Vec3 normal;
    double offset;  // normal . x = offset on the plane
    bool alive = true;
};

}  // namespace

ConvexHull convex_hull(const std::vector<Vec3>& input) {
    const int n = static_cast<int>(input.size());
    if (n < 4) throw DegenerateError("convex hull needs at least 4 points");

    Vec3 lo = input[0], hi = input[0];
    for (const auto& p : input) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double scale = std::max((hi - lo).norm(), 1e-12);
    const double eps = 1e-12 * scale;
    // Points this close to a face plane count as on it; keeps the final hull
    // within the 1e-9 containment contract with margin.
    const double lift_eps = 1e-10 * scale;

    // Initial simplex: extremes along x, then farthest from the line, then
    // farthest from the plane.
    int i0 = 0, i1 = 0;
    for (int i = 1; i < n; ++i) {
        if (input[i].x() < input[i0].x()) i0 = i;
        if (input[i].x() > input[i1].x()) i1 = i;
    }
    if ((input[i1] - input[i0]).norm() < eps) {
        // all equal along x; pick any two distinct points
        for (int i = 1; i < n; ++i)
            if ((input[i] - input[0]).norm() > eps) {
                i0 = 0;
                i1 = i;
                break;
            }
    }
    if ((input[i1] - input[i0]).norm() < eps)
        throw DegenerateError("convex hull input is a single point");
    int i2 = -1;
    double best = eps;
    Vec3 d01 = (input[i1] - input[i0]).normalized();
    for (int i = 0; i < n; ++i) {
        Vec3 r = input[i] - input[i0];
        double dist = (r - r.dot(d01) * d01).norm();
        if (dist > best) {
            best = dist;
            i2 = i;
        }
    }
    if (i2 < 0) throw DegenerateError("convex hull input is collinear");
    int i3 = -1;
    best = eps;
    Vec3 plane_n = (input[i1] - input[i0]).cross(input[i2] - input[i0]).normalized();
    for (int i = 0; i < n; ++i) {
        double dist = std::abs(plane_n.dot(input[i] - input[i0]));
        if (dist > best) {
            best = dist;
            i3 = i;
        }
    }
    if (i3 < 0) throw DegenerateError("convex hull input is coplanar");

    std::vector<HullFace> face_pool;
    auto add_face = [&](int a, int b, int c, const Vec3& inside) {
        HullFace f;
        f.v = {a, b, c};
        Vec3 nrm = (input[b] - input[a]).cross(input[c] - input[a]);
        if (nrm.dot(inside - input[a]) > 0) {
            std::swap(f.v[1], f.v[2]);
            nrm = -nrm;
        }
        f.normal = nrm.normalized();
        f.offset = f.normal.dot(input[f.v[0]]);
        face_pool.push_back(f);
    };
    Vec3 inner = (input[i0] + input[i1] + input[i2] + input[i3]) / 4.0;
    add_face(i0, i1, i2, inner);
    add_face(i0, i1, i3, inner);
    add_face(i0, i2, i3, inner);
    add_face(i1, i2, i3, inner);

    for (int p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        std::vector<int> visible;
        for (size_t f = 0; f < face_pool.size(); ++f)
            if (face_pool[f].alive &&
                face_pool[f].normal.dot(input[p]) - face_pool[f].offset > lift_eps)
                visible.push_back(static_cast<int>(f));
        if (visible.empty()) continue;

        // Horizon: directed edges of visible faces whose reverse edge is not
        // on a visible face.
        std::map<std::pair<int, int>, int> edge_count;
        for (int f : visible) {
            const auto& v = face_pool[f].v;
            for (int e = 0; e < 3; ++e) edge_count[{v[e], v[(e + 1) % 3]}]++;
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& [edge, cnt] : edge_count) {
            (void)cnt;
            if (!edge_count.count({edge.second, edge.first})) horizon.push_back(edge);
        }
        for (int f : visible) face_pool[f].alive = false;
        for (const auto& [a, b] : horizon) add_face(a, b, p, inner);
    }

    // Compact to the final vertex set, canonicalize face order.
    ConvexHull hull;
    std::map<int, int> remap;
    std::vector<std::array<int, 3>> raw_faces;
    for (const auto& f : face_pool) {
        if (!f.alive) continue;
        std::array<int, 3> tri = f.v;
        for (int& idx : tri) {
            auto it = remap.find(idx);
            if (it == remap.end()) {
                it = remap.emplace(idx, static_cast<int>(hull.points.size())).first;
                hull.points.push_back(input[idx]);
                hull.source_indices.push_back(idx);
            }
            idx = it->second;
        }
        // rotate so the smallest hull index leads, preserving winding
        int lead = static_cast<int>(std::min_element(tri.begin(), tri.end()) - tri.begin());
        std::array<int, 3> canon = {tri[lead], tri[(lead + 1) % 3], tri[(lead + 2) % 3]};
        raw_faces.push_back(canon);
    }
    std::sort(raw_faces.begin(), raw_faces.end());
    hull.faces = std::move(raw_faces);
    return hull;
}

}  // namespace regrasp
