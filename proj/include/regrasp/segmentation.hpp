#pragma once

#include "regrasp/mesh.hpp"

#include <vector>

namespace regrasp {

// Edge-connected cluster of near-coplanar triangles. Over-segmentation may
// assign one triangle to several facets.
struct Facet {
    std::vector<int> triangle_ids;  // sorted, unique
    int seed_id = -1;
    Vec3 normal = Vec3::UnitZ();    // area-weighted mean of member normals
    double area = 0.0;
    // Boundary edges chained into loops; each edge is a vertex-index pair in
    // walk order.
    std::vector<std::vector<std::pair<int, int>>> boundary_loops;

    bool contains(int tri) const;
};

// Grows one facet per seed triangle by breadth-first expansion over mesh
// adjacency, admitting neighbors whose normal deviates from the seed's by at
// most `tau`. Triangles are never claimed: every triangle not yet covered by
// any facet starts a new seed (ascending index), so facets overlap and the
// union covers the whole mesh. Facets with identical member sets are merged.
std::vector<Facet> oversegment(const TriangleMesh& mesh, double tau);

// Baseline that removes claimed triangles from the pool, producing an exact
// partition (the uneven-segments behavior over-segmentation fixes).
std::vector<Facet> segment_conventional(const TriangleMesh& mesh, double tau);

// Shortest distance from a point to the facet's boundary edges.
double distance_to_facet_boundary(const TriangleMesh& mesh, const Facet& facet, const Vec3& p);

}  // namespace regrasp
