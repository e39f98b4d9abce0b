#pragma once

#include "regrasp/transform.hpp"

#include <array>
#include <vector>

namespace regrasp {

// Indexed triangle soup with per-face derived data. All lengths in meters.
// `finalize()` must be called after editing vertices/triangles; loaders and
// the synthetic-shape helpers do this for you.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;

    // Derived, filled by finalize():
    std::vector<Vec3> face_normals;        // unit, from winding
    std::vector<double> face_areas;
    std::vector<std::vector<int>> adjacency;  // edge-adjacent triangle ids
    double total_area = 0.0;
    Vec3 com = Vec3::Zero();               // uniform-density centroid

    int triangle_count() const { return static_cast<int>(triangles.size()); }
    int vertex_count() const { return static_cast<int>(vertices.size()); }

    Vec3 triangle_vertex(int tri, int corner) const { return vertices[triangles[tri][corner]]; }
    Vec3 triangle_centroid(int tri) const;

    // Welds duplicate vertices (1e-7 m grid), drops degenerate triangles,
    // recomputes normals/areas/adjacency/com. Throws InvalidInputError if
    // nothing remains.
    void clean_and_finalize();

    // Recompute derived data only (no welding).
    void finalize();

    TriangleMesh transformed(const Transform& tf) const;
    void scale(double factor);

    // Radius of the bounding sphere centered at com.
    double bounding_radius() const;

    // Smallest axis-aligned bounding box.
    void bounds(Vec3& lo, Vec3& hi) const;
};

// First hit of a ray against the mesh, ignoring hits closer than t_min.
struct RayHit {
    bool hit = false;
    double t = 0.0;
    int triangle = -1;
    Vec3 point = Vec3::Zero();
};
RayHit raycast(const TriangleMesh& mesh, const Vec3& origin, const Vec3& dir, double t_min);

// Synthetic solids used by fixtures and bundled data generation.
TriangleMesh make_box(const Vec3& half_extents, const Vec3& center = Vec3::Zero());
TriangleMesh make_cylinder(double radius, double height, int sides, const Vec3& center = Vec3::Zero());
TriangleMesh make_lbracket(double leg, double thickness, double depth);
TriangleMesh make_icosphere(double radius, int subdivisions, const Vec3& center = Vec3::Zero());

}  // namespace regrasp
