#include "regrasp/sampling.hpp"

#include "regrasp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace regrasp {

std::vector<SamplePoint> sample_surface(const TriangleMesh& mesh, const std::vector<Facet>& facets,
                                        double density, uint64_t rng_seed, int max_samples) {
    if (density <= 0) throw InvalidInputError("sampling density must be positive");
    long long want = std::llround(density * mesh.total_area);
    int count = static_cast<int>(std::min<long long>(want, max_samples));
    std::vector<SamplePoint> samples;
    if (count <= 0 || mesh.triangle_count() == 0) return samples;

    std::vector<double> cumulative(mesh.face_areas.size());
    double acc = 0.0;
    for (size_t i = 0; i < mesh.face_areas.size(); ++i) {
        acc += mesh.face_areas[i];
        cumulative[i] = acc;
    }

    // triangle id -> facets that contain it
    std::vector<std::vector<int>> tri_facets(mesh.triangle_count());
    for (size_t f = 0; f < facets.size(); ++f)
        for (int t : facets[f].triangle_ids) tri_facets[t].push_back(static_cast<int>(f));

    Rng rng(rng_seed);
    samples.reserve(count);
    for (int i = 0; i < count; ++i) {
        double u = rng.uniform() * acc;
        int tri = static_cast<int>(std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                                   cumulative.begin());
        tri = std::min(tri, mesh.triangle_count() - 1);
        // uniform barycentric via square-root trick
        double r1 = std::sqrt(rng.uniform());
        double r2 = rng.uniform();
        double b0 = 1.0 - r1, b1 = r1 * (1.0 - r2), b2 = r1 * r2;
        SamplePoint s;
        s.position = b0 * mesh.triangle_vertex(tri, 0) + b1 * mesh.triangle_vertex(tri, 1) +
                     b2 * mesh.triangle_vertex(tri, 2);
        s.normal = mesh.face_normals[tri];
        s.triangle_id = tri;
        s.facet_ids = tri_facets[tri];
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace regrasp
