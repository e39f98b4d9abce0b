#include "regrasp/mesh.hpp"

#include "regrasp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <tuple>

namespace regrasp {

Vec3 TriangleMesh::triangle_centroid(int tri) const {
    const auto& t = triangles[tri];
    return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

static Vec3 face_cross(const TriangleMesh& m, const std::array<int, 3>& t) {
    return (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
}

void TriangleMesh::finalize() {
    const int nt = triangle_count();
    face_normals.assign(nt, Vec3::Zero());
    face_areas.assign(nt, 0.0);
    total_area = 0.0;
    for (int i = 0; i < nt; ++i) {
        Vec3 c = face_cross(*this, triangles[i]);
        double len = c.norm();
        face_areas[i] = 0.5 * len;
        total_area += face_areas[i];
        face_normals[i] = len > 0 ? Vec3(c / len) : Vec3::UnitZ();
    }

    // Edge-adjacency. Key is the sorted vertex pair; non-manifold edges
    // simply link all incident triangles.
    adjacency.assign(nt, {});
    std::map<std::pair<int, int>, std::vector<int>> edge_tris;
    for (int i = 0; i < nt; ++i) {
        for (int e = 0; e < 3; ++e) {
            int a = triangles[i][e], b = triangles[i][(e + 1) % 3];
            edge_tris[{std::min(a, b), std::max(a, b)}].push_back(i);
        }
    }
    for (const auto& [edge, tris] : edge_tris) {
        for (size_t a = 0; a < tris.size(); ++a)
            for (size_t b = a + 1; b < tris.size(); ++b) {
                adjacency[tris[a]].push_back(tris[b]);
                adjacency[tris[b]].push_back(tris[a]);
            }
    }
    for (auto& nb : adjacency) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }

    // Volume centroid by signed tetrahedra against the origin. Falls back to
    // the area-weighted surface centroid for open or flat inputs.
    double vol6 = 0.0;
    Vec3 moment = Vec3::Zero();
    for (const auto& t : triangles) {
        const Vec3& a = vertices[t[0]];
        const Vec3& b = vertices[t[1]];
        const Vec3& c = vertices[t[2]];
        double det = a.dot(b.cross(c));
        vol6 += det;
        moment += det * (a + b + c);  // tet centroid is (a+b+c+0)/4
    }
    double scale_ref = std::pow(std::max(total_area, 1e-30), 1.5);
    if (std::abs(vol6 / 6.0) > 1e-9 * scale_ref) {
        com = moment / (4.0 * vol6);
    } else {
        Vec3 acc = Vec3::Zero();
        for (int i = 0; i < nt; ++i) acc += face_areas[i] * triangle_centroid(i);
        com = total_area > 0 ? Vec3(acc / total_area) : Vec3::Zero();
    }
}

void TriangleMesh::clean_and_finalize() {
    constexpr double kWeldTol = 1e-7;
    std::map<std::tuple<int64_t, int64_t, int64_t>, int> grid;
    std::vector<Vec3> welded;
    std::vector<int> remap(vertices.size());
    for (size_t i = 0; i < vertices.size(); ++i) {
        const Vec3& v = vertices[i];
        auto key = std::make_tuple(static_cast<int64_t>(std::llround(v.x() / kWeldTol)),
                                   static_cast<int64_t>(std::llround(v.y() / kWeldTol)),
                                   static_cast<int64_t>(std::llround(v.z() / kWeldTol)));
        auto it = grid.find(key);
        if (it == grid.end()) {
            grid.emplace(key, static_cast<int>(welded.size()));
            remap[i] = static_cast<int>(welded.size());
            welded.push_back(v);
        } else {
            remap[i] = it->second;
        }
    }

    std::vector<std::array<int, 3>> kept;
    kept.reserve(triangles.size());
    for (auto t : triangles) {
        for (int& idx : t) {
            if (idx < 0 || idx >= static_cast<int>(remap.size()))
                throw InvalidInputError("triangle references vertex " + std::to_string(idx) +
                                        " out of range");
            idx = remap[idx];
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
        Vec3 c = (welded[t[1]] - welded[t[0]]).cross(welded[t[2]] - welded[t[0]]);
        if (0.5 * c.norm() < 1e-14) continue;  // zero-area sliver
        kept.push_back(t);
    }
    if (kept.empty()) throw InvalidInputError("mesh has no non-degenerate triangles");

    vertices = std::move(welded);
    triangles = std::move(kept);
    finalize();
}

TriangleMesh TriangleMesh::transformed(const Transform& tf) const {
    TriangleMesh out = *this;
    for (auto& v : out.vertices) v = tf * v;
    for (auto& n : out.face_normals) n = tf.linear() * n;
    out.com = tf * com;
    return out;
}

void TriangleMesh::scale(double factor) {
    for (auto& v : vertices) v *= factor;
    finalize();
}

double TriangleMesh::bounding_radius() const {
    double r2 = 0.0;
    for (const auto& v : vertices) r2 = std::max(r2, (v - com).squaredNorm());
    return std::sqrt(r2);
}

void TriangleMesh::bounds(Vec3& lo, Vec3& hi) const {
    lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    hi = -lo;
    for (const auto& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
}

RayHit raycast(const TriangleMesh& mesh, const Vec3& origin, const Vec3& dir, double t_min) {
    RayHit best;
    best.t = std::numeric_limits<double>::infinity();
    for (int i = 0; i < mesh.triangle_count(); ++i) {
        // Moller-Trumbore
        const Vec3& v0 = mesh.triangle_vertex(i, 0);
        Vec3 e1 = mesh.triangle_vertex(i, 1) - v0;
        Vec3 e2 = mesh.triangle_vertex(i, 2) - v0;
        Vec3 p = dir.cross(e2);
        double det = e1.dot(p);
        if (std::abs(det) < 1e-15) continue;
        double inv = 1.0 / det;
        Vec3 s = origin - v0;
        double u = s.dot(p) * inv;
        if (u < -1e-9 || u > 1.0 + 1e-9) continue;
        Vec3 q = s.cross(e1);
        double v = dir.dot(q) * inv;
        if (v < -1e-9 || u + v > 1.0 + 1e-9) continue;
        double t = e2.dot(q) * inv;
        if (t > t_min && t < best.t) {
            best.hit = true;
            best.t = t;
            best.triangle = i;
            best.point = origin + t * dir;
        }
    }
    return best;
}

TriangleMesh make_box(const Vec3& h, const Vec3& c) {
    TriangleMesh m;
    for (int i = 0; i < 8; ++i)
        m.vertices.push_back(c + Vec3(i & 1 ? h.x() : -h.x(), i & 2 ? h.y() : -h.y(),
                                      i & 4 ? h.z() : -h.z()));
    // Outward-wound quads, two triangles each.
    const int quads[6][4] = {{0, 2, 3, 1},   // -z
                             {4, 5, 7, 6},   // +z
                             {0, 1, 5, 4},   // -y
                             {2, 6, 7, 3},   // +y
                             {0, 4, 6, 2},   // -x
                             {1, 3, 7, 5}};  // +x
    for (const auto& q : quads) {
        m.triangles.push_back({q[0], q[1], q[2]});
        m.triangles.push_back({q[0], q[2], q[3]});
    }
    m.finalize();
    return m;
}

TriangleMesh make_cylinder(double radius, double height, int sides, const Vec3& c) {
    TriangleMesh m;
    const double hz = height / 2.0;
    for (int i = 0; i < sides; ++i) {
        double a = 2.0 * M_PI * i / sides;
        m.vertices.push_back(c + Vec3(radius * std::cos(a), radius * std::sin(a), -hz));
        m.vertices.push_back(c + Vec3(radius * std::cos(a), radius * std::sin(a), +hz));
    }
    int bot_center = static_cast<int>(m.vertices.size());
    m.vertices.push_back(c + Vec3(0, 0, -hz));
    int top_center = static_cast<int>(m.vertices.size());
    m.vertices.push_back(c + Vec3(0, 0, +hz));
    for (int i = 0; i < sides; ++i) {
        int j = (i + 1) % sides;
        int b0 = 2 * i, t0 = 2 * i + 1, b1 = 2 * j, t1 = 2 * j + 1;
        // side quad, outward
        m.triangles.push_back({b0, b1, t1});
        m.triangles.push_back({b0, t1, t0});
        m.triangles.push_back({bot_center, b1, b0});
        m.triangles.push_back({top_center, t0, t1});
    }
    m.finalize();
    return m;
}

// L-shaped prism: an `leg` x `leg` square with a (leg-thickness)^2 corner cut
// away, extruded `depth` along z. Centered on its bounding box.
TriangleMesh make_lbracket(double leg, double thickness, double depth) {
    const double x0 = -leg / 2, y0 = -leg / 2, z0 = -depth / 2;
    const double x1 = leg / 2, y1 = leg / 2, z1 = depth / 2;
    const double xi = x0 + thickness, yi = y0 + thickness;
    // Concave hexagon, CCW when seen from +z.
    const double px[6] = {x0, x1, x1, xi, xi, x0};
    const double py[6] = {y0, y0, yi, yi, y1, y1};
    TriangleMesh m;
    for (int i = 0; i < 6; ++i) m.vertices.push_back(Vec3(px[i], py[i], z0));
    for (int i = 0; i < 6; ++i) m.vertices.push_back(Vec3(px[i], py[i], z1));
    // Fan triangulations that stay inside the L (fan from vertex 0 works for
    // this hexagon: splits into 0-1-2, 0-2-3, 0-3-4, 0-4-5).
    const int fan[4][3] = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}};
    for (const auto& f : fan) {
        m.triangles.push_back({f[0], f[2], f[1]});              // bottom, -z out
        m.triangles.push_back({f[0] + 6, f[1] + 6, f[2] + 6});  // top, +z out
    }
    for (int i = 0; i < 6; ++i) {
        int j = (i + 1) % 6;
        m.triangles.push_back({i, j, j + 6});
        m.triangles.push_back({i, j + 6, i + 6});
    }
    m.finalize();
    return m;
}

TriangleMesh make_icosphere(double radius, int subdivisions, const Vec3& c) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                               {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                               {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (auto& v : verts) v.normalize();
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m2 = (verts[a] + verts[b]).normalized();
            verts.push_back(m2);
            int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        for (const auto& f : faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    TriangleMesh m;
    for (const auto& v : verts) m.vertices.push_back(c + radius * v);
    m.triangles = faces;
    m.finalize();
    return m;
}

}  // namespace regrasp
