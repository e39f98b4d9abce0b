#include "doctest.h"

#include "regrasp/geometry_util.hpp"
#include "regrasp/mesh.hpp"
#include "regrasp/sampling.hpp"
#include "regrasp/segmentation.hpp"

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

using namespace regrasp;

namespace {

// Independent flood fill: grow from `seed` over edge adjacency admitting
// triangles whose normal is within tau of the seed normal, restricted to the
// still-available pool (nullptr = all triangles available).
std::set<int> flood_from(const TriangleMesh& mesh, int seed, double tau,
                         const std::set<int>* pool) {
    std::set<int> out{seed};
    std::deque<int> queue{seed};
    const Vec3& n0 = mesh.face_normals[seed];
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (int nb : mesh.adjacency[t]) {
            if (out.count(nb)) continue;
            if (pool && !pool->count(nb)) continue;
            if (std::acos(std::clamp(n0.dot(mesh.face_normals[nb]), -1.0, 1.0)) > tau) continue;
            out.insert(nb);
            queue.push_back(nb);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("cube at 5 degrees: both modes give the six faces") {
    TriangleMesh cube = make_box(Vec3(0.5, 0.5, 0.5));
    double tau = 5.0 * M_PI / 180.0;

    for (auto facets : {oversegment(cube, tau), segment_conventional(cube, tau)}) {
        REQUIRE(facets.size() == 6);
        std::set<int> all;
        for (const Facet& f : facets) {
            CHECK(f.triangle_ids.size() == 2);
            const Vec3& n0 = cube.face_normals[f.triangle_ids[0]];
            const Vec3& n1 = cube.face_normals[f.triangle_ids[1]];
            CHECK(n0.dot(n1) == doctest::Approx(1.0));
            all.insert(f.triangle_ids.begin(), f.triangle_ids.end());
        }
        CHECK(all.size() == 12);
    }
}

TEST_CASE("cylinder over-segmentation matches an independent per-seed flood fill") {
    TriangleMesh cyl = make_cylinder(0.03, 0.12, 32);
    double tau = 15.0 * M_PI / 180.0;
    std::vector<Facet> facets = oversegment(cyl, tau);

    // Coverage of every triangle.
    std::set<int> covered;
    for (const Facet& f : facets) covered.insert(f.triangle_ids.begin(), f.triangle_ids.end());
    CHECK(static_cast<int>(covered.size()) == cyl.triangle_count());

    // Each facet is exactly the flood fill from its seed over all triangles.
    for (const Facet& f : facets) {
        std::set<int> expect = flood_from(cyl, f.seed_id, tau, nullptr);
        std::set<int> got(f.triangle_ids.begin(), f.triangle_ids.end());
        CHECK(got == expect);
        for (int t : f.triangle_ids) {
            double dev = std::acos(std::clamp(
                cyl.face_normals[f.seed_id].dot(cyl.face_normals[t]), -1.0, 1.0));
            CHECK(dev <= tau + 1e-12);
        }
    }

    // Side facets genuinely overlap: membership counts exceed the partition.
    size_t membership = 0;
    for (const Facet& f : facets) membership += f.triangle_ids.size();
    CHECK(membership > covered.size());
}

TEST_CASE("conventional segmentation is an exact partition that matches pooled flood fill") {
    TriangleMesh cyl = make_cylinder(0.03, 0.12, 32);
    double tau = 15.0 * M_PI / 180.0;
    std::vector<Facet> facets = segment_conventional(cyl, tau);

    std::vector<int> all;
    for (const Facet& f : facets) all.insert(all.end(), f.triangle_ids.begin(), f.triangle_ids.end());
    std::sort(all.begin(), all.end());
    std::vector<int> expect(cyl.triangle_count());
    for (int i = 0; i < cyl.triangle_count(); ++i) expect[i] = i;
    CHECK(all == expect);  // partition: each triangle exactly once

    // Replay the claimed-pool growth.
    std::set<int> pool;
    for (int i = 0; i < cyl.triangle_count(); ++i) pool.insert(i);
    for (const Facet& f : facets) {
        REQUIRE(pool.count(f.seed_id));
        std::set<int> expect_members = flood_from(cyl, f.seed_id, tau, &pool);
        std::set<int> got(f.triangle_ids.begin(), f.triangle_ids.end());
        CHECK(got == expect_members);
        for (int t : got) pool.erase(t);
    }
    CHECK(pool.empty());
}

TEST_CASE("wide tau degrades conventional segmentation to few non-planar facets") {
    TriangleMesh cyl = make_cylinder(0.03, 0.12, 32);
    auto narrow = segment_conventional(cyl, 15.0 * M_PI / 180.0);
    auto wide = segment_conventional(cyl, 89.0 * M_PI / 180.0);
    CHECK(wide.size() < narrow.size());

    // The biggest wide facet spans a normal range far beyond planar.
    double worst = 0.0;
    for (const Facet& f : wide)
        for (int a : f.triangle_ids)
            for (int b : f.triangle_ids)
                worst = std::max(worst, std::acos(std::clamp(
                                            cyl.face_normals[a].dot(cyl.face_normals[b]), -1.0, 1.0)));
    CHECK(worst > M_PI / 4);
}

TEST_CASE("over-segmentation total membership dominates the conventional partition") {
    for (double tau_deg : {5.0, 10.0, 20.0}) {
        double tau = tau_deg * M_PI / 180.0;
        for (auto mesh : {make_cylinder(0.05, 0.1, 24), make_icosphere(0.2, 2),
                          make_lbracket(0.08, 0.03, 0.04)}) {
            size_t over = 0, conv = 0;
            for (const Facet& f : oversegment(mesh, tau)) over += f.triangle_ids.size();
            for (const Facet& f : segment_conventional(mesh, tau)) conv += f.triangle_ids.size();
            CHECK(over >= conv);
            CHECK(conv == static_cast<size_t>(mesh.triangle_count()));
        }
    }
}

TEST_CASE("surface sampling: count, area weighting, facet attribution, determinism") {
    TriangleMesh cube = make_box(Vec3(0.5, 0.5, 0.5));
    std::vector<Facet> facets = oversegment(cube, 5.0 * M_PI / 180.0);

    std::vector<SamplePoint> samples = sample_surface(cube, facets, 100.0, 42);
    CHECK(samples.size() == 600);

    // Face histogram within 4 sigma of the binomial expectation.
    std::vector<int> per_face(6, 0);
    for (const SamplePoint& s : samples) {
        REQUIRE(s.facet_ids.size() == 1);
        per_face[s.facet_ids[0]]++;
        // Sample sits on its host triangle.
        Vec3 a = cube.triangle_vertex(s.triangle_id, 0), b = cube.triangle_vertex(s.triangle_id, 1),
             c = cube.triangle_vertex(s.triangle_id, 2);
        CHECK(point_triangle_distance(s.position, a, b, c) < 1e-9);
        CHECK((s.normal - cube.face_normals[s.triangle_id]).norm() == 0.0);
    }
    double sigma = std::sqrt(600.0 * (1.0 / 6.0) * (5.0 / 6.0));
    for (int count : per_face) CHECK(std::abs(count - 100.0) <= 4.0 * sigma);

    // Degenerate density and cap behavior.
    CHECK(sample_surface(cube, facets, 1e-9, 42).empty());
    CHECK(sample_surface(cube, facets, 1e9, 42, 500).size() == 500);

    // Bitwise determinism.
    auto again = sample_surface(cube, facets, 100.0, 42);
    REQUIRE(again.size() == samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        CHECK(again[i].triangle_id == samples[i].triangle_id);
        CHECK((again[i].position - samples[i].position).norm() == 0.0);
    }

    // Overlapping facets: every sample lists every containing facet.
    TriangleMesh cyl = make_cylinder(0.03, 0.12, 32);
    std::vector<Facet> cfacets = oversegment(cyl, 15.0 * M_PI / 180.0);
    for (const SamplePoint& s : sample_surface(cyl, cfacets, 20000.0, 7)) {
        std::vector<int> expect;
        for (size_t f = 0; f < cfacets.size(); ++f)
            if (cfacets[f].contains(s.triangle_id)) expect.push_back(static_cast<int>(f));
        CHECK(s.facet_ids == expect);
    }
}
