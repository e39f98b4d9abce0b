#pragma once

#include "regrasp/mesh.hpp"
#include "regrasp/segmentation.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace regrasp {

// mt19937_64 with explicit bit-to-double conversion so streams are identical
// across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    double uniform() { return (gen_() >> 11) * 0x1.0p-53; }  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    uint64_t next() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

struct SamplePoint {
    Vec3 position;
    Vec3 normal;       // host triangle normal
    int triangle_id = -1;
    std::vector<int> facet_ids;  // indices into the segmentation, sorted
};

// round(density * total_area) points, capped at `max_samples`; triangles
// drawn area-weighted, positions uniform by barycentric sampling. facet_ids
// are filled by distributing each sample to every facet containing its host
// triangle.
std::vector<SamplePoint> sample_surface(const TriangleMesh& mesh, const std::vector<Facet>& facets,
                                        double density, uint64_t rng_seed,
                                        int max_samples = 10000);

}  // namespace regrasp
