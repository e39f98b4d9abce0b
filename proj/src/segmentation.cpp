#include "regrasp/segmentation.hpp"

#include "regrasp/errors.hpp"
#include "regrasp/geometry_util.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace regrasp {

bool Facet::contains(int tri) const {
    return std::binary_search(triangle_ids.begin(), triangle_ids.end(), tri);
}

namespace {

void fill_derived(const TriangleMesh& mesh, Facet& f) {
    std::sort(f.triangle_ids.begin(), f.triangle_ids.end());
    f.area = 0.0;
    Vec3 n = Vec3::Zero();
    for (int t : f.triangle_ids) {
        f.area += mesh.face_areas[t];
        n += mesh.face_areas[t] * mesh.face_normals[t];
    }
    f.normal = n.norm() > 1e-15 ? Vec3(n.normalized()) : mesh.face_normals[f.seed_id];

    // Boundary = edges used by exactly one member triangle (counting
    // multiplicity). Directed edges so loops come out in winding order.
    std::set<int> members(f.triangle_ids.begin(), f.triangle_ids.end());
    std::map<std::pair<int, int>, int> edge_use;
    for (int t : f.triangle_ids) {
        for (int e = 0; e < 3; ++e) {
            int a = mesh.triangles[t][e], b = mesh.triangles[t][(e + 1) % 3];
            edge_use[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    std::map<int, std::vector<std::pair<int, int>>> from_vertex;
    for (int t : f.triangle_ids) {
        for (int e = 0; e < 3; ++e) {
            int a = mesh.triangles[t][e], b = mesh.triangles[t][(e + 1) % 3];
            if (edge_use[{std::min(a, b), std::max(a, b)}] == 1)
                from_vertex[a].push_back({a, b});
        }
    }
    f.boundary_loops.clear();
    std::set<std::pair<int, int>> used;
    for (auto& [start_v, edges] : from_vertex) {
        for (auto& first : edges) {
            if (used.count(first)) continue;
            std::vector<std::pair<int, int>> loop;
            auto cur = first;
            while (!used.count(cur)) {
                used.insert(cur);
                loop.push_back(cur);
                auto it = from_vertex.find(cur.second);
                if (it == from_vertex.end()) break;
                bool found = false;
                for (auto& cand : it->second)
                    if (!used.count(cand)) {
                        cur = cand;
                        found = true;
                        break;
                    }
                if (!found) break;
            }
            if (!loop.empty()) f.boundary_loops.push_back(std::move(loop));
        }
    }
}

Facet grow_facet(const TriangleMesh& mesh, int seed, double tau, const std::vector<char>* pool) {
    Facet f;
    f.seed_id = seed;
    const Vec3 seed_normal = mesh.face_normals[seed];
    std::vector<char> visited(mesh.triangle_count(), 0);
    std::deque<int> queue{seed};
    visited[seed] = 1;
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        f.triangle_ids.push_back(t);
        for (int nb : mesh.adjacency[t]) {
            if (visited[nb]) continue;
            if (pool && !(*pool)[nb]) continue;
            if (angle_between(mesh.face_normals[nb], seed_normal) > tau) continue;
            visited[nb] = 1;
            queue.push_back(nb);
        }
    }
    fill_derived(mesh, f);
    return f;
}

void check_tau(double tau) {
    if (!(tau > 0.0 && tau < M_PI / 2.0))
        throw InvalidInputError("coplanarity threshold must lie in (0, pi/2)");
}

}  // namespace

std::vector<Facet> oversegment(const TriangleMesh& mesh, double tau) {
    check_tau(tau);
    std::vector<Facet> facets;
    std::vector<char> covered(mesh.triangle_count(), 0);
    std::set<std::vector<int>> seen;
    for (int seed = 0; seed < mesh.triangle_count(); ++seed) {
        if (covered[seed]) continue;
        Facet f = grow_facet(mesh, seed, tau, nullptr);
        for (int t : f.triangle_ids) covered[t] = 1;
        if (seen.insert(f.triangle_ids).second) facets.push_back(std::move(f));
    }
    return facets;
}

std::vector<Facet> segment_conventional(const TriangleMesh& mesh, double tau) {
    check_tau(tau);
    std::vector<Facet> facets;
    std::vector<char> pool(mesh.triangle_count(), 1);
    for (int seed = 0; seed < mesh.triangle_count(); ++seed) {
        if (!pool[seed]) continue;
        Facet f = grow_facet(mesh, seed, tau, &pool);
        for (int t : f.triangle_ids) pool[t] = 0;
        facets.push_back(std::move(f));
    }
    return facets;
}

double distance_to_facet_boundary(const TriangleMesh& mesh, const Facet& facet, const Vec3& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& loop : facet.boundary_loops)
        for (const auto& [a, b] : loop)
            best = std::min(best, point_segment_distance(p, mesh.vertices[a], mesh.vertices[b]));
    return best;
}

}  // namespace regrasp
