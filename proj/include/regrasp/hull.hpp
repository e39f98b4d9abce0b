#pragma once

#include "regrasp/transform.hpp"

#include <array>
#include <vector>

namespace regrasp {

// Watertight convex polyhedron. Faces are outward-wound triangles indexing
// into `points`; `source_indices` maps hull vertices back to the input.
struct ConvexHull {
    std::vector<Vec3> points;
    std::vector<std::array<int, 3>> faces;
    std::vector<int> source_indices;

    double volume() const;
    Vec3 face_normal(int f) const;
    // Signed distance of p to the farthest face plane; <= 0 means inside.
    double signed_distance(const Vec3& p) const;
    bool contains(const Vec3& p, double tol = 1e-9) const;
};

// Incremental hull over the input order (deterministic output). Throws
// DegenerateError when the points span fewer than 3 dimensions.
ConvexHull convex_hull(const std::vector<Vec3>& points);

}  // namespace regrasp
