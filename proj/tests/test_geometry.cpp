#include "doctest.h"

#include "regrasp/errors.hpp"
#include "regrasp/geometry_util.hpp"
#include "regrasp/hull.hpp"
#include "regrasp/mesh.hpp"
#include "regrasp/mesh_io.hpp"
#include "regrasp/sampling.hpp"
#include "regrasp/transform.hpp"

#include "test_support.hpp"

#include <cstring>
#include <set>
#include <sstream>

using namespace regrasp;
using testsupport::TempPath;

namespace {

std::string unit_cube_obj() {
    std::ostringstream o;
    o << "# unit cube\n";
    for (int z : {0, 1})
        for (int y : {0, 1})
            for (int x : {0, 1})
                o << "v " << x - 0.5 << " " << y - 0.5 << " " << z - 0.5 << "\n";
    // CCW-outward faces, 1-based indices (verts ordered x fastest, then y, z).
    o << "f 1 3 4\nf 1 4 2\n";      // z = -0.5, normal -z
    o << "f 5 6 8\nf 5 8 7\n";      // z = +0.5, normal +z
    o << "f 1 2 6\nf 1 6 5\n";      // y = -0.5
    o << "f 3 7 8\nf 3 8 4\n";      // y = +0.5
    o << "f 1 5 7\nf 1 7 3\n";      // x = -0.5
    o << "f 2 4 8\nf 2 8 6\n";      // x = +0.5
    return o.str();
}

// Independent centroid oracle: volume-weighted sum of signed tetrahedron
// centroids against the origin.
Vec3 centroid_by_tetrahedra(const TriangleMesh& mesh) {
    double vol = 0.0;
    Vec3 acc = Vec3::Zero();
    for (const auto& tri : mesh.triangles) {
        const Vec3&a = mesh.vertices[tri[0]], &b = mesh.vertices[tri[1]], &c = mesh.vertices[tri[2]];
        double v = a.dot(b.cross(c)) / 6.0;
        vol += v;
        acc += v * (a + b + c) / 4.0;
    }
    return acc / vol;
}

}  // namespace

TEST_CASE("obj cube loads with exact area and centroid") {
    TempPath tmp(".obj");
    testsupport::write_file(tmp.str(), unit_cube_obj());
    TriangleMesh mesh = load_mesh(tmp.str());
    CHECK(mesh.vertex_count() == 8);
    CHECK(mesh.triangle_count() == 12);
    CHECK(mesh.total_area == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(mesh.com.norm() < 1e-12);
}

TEST_CASE("per-face duplicated vertices weld back to the shared set") {
    TriangleMesh cube = make_box(Vec3(0.5, 0.5, 0.5));
    TriangleMesh split;
    for (const auto& tri : cube.triangles) {
        int base = static_cast<int>(split.vertices.size());
        for (int k = 0; k < 3; ++k) split.vertices.push_back(cube.vertices[tri[k]]);
        split.triangles.push_back({base, base + 1, base + 2});
    }
    REQUIRE(split.vertices.size() == 36);
    split.clean_and_finalize();
    CHECK(split.vertex_count() == 8);
    CHECK(split.triangle_count() == 12);
    CHECK(split.total_area == doctest::Approx(6.0));
}

TEST_CASE("icosphere centroid matches the signed-tetrahedron oracle") {
    TriangleMesh ball = make_icosphere(0.5, 3, Vec3(0.3, -0.2, 0.1));
    Vec3 oracle = centroid_by_tetrahedra(ball);
    CHECK((ball.com - oracle).norm() < 1e-9);
    CHECK((ball.com - Vec3(0.3, -0.2, 0.1)).norm() < 1e-6);
}

TEST_CASE("stl readers accept both encodings and reject junk") {
    TriangleMesh cube = make_box(Vec3(0.5, 0.5, 0.5));

    SUBCASE("ascii") {
        std::ostringstream o;
        o << "solid cube\n";
        for (int t = 0; t < cube.triangle_count(); ++t) {
            const Vec3& n = cube.face_normals[t];
            o << " facet normal " << n.x() << " " << n.y() << " " << n.z() << "\n";
            o << "  outer loop\n";
            for (int k = 0; k < 3; ++k) {
                Vec3 v = cube.triangle_vertex(t, k);
                o << "   vertex " << v.x() << " " << v.y() << " " << v.z() << "\n";
            }
            o << "  endloop\n endfacet\n";
        }
        o << "endsolid cube\n";
        TempPath tmp(".stl");
        testsupport::write_file(tmp.str(), o.str());
        TriangleMesh loaded = load_mesh(tmp.str());
        CHECK(loaded.vertex_count() == 8);
        CHECK(loaded.triangle_count() == 12);
    }

    SUBCASE("binary") {
        std::string blob(80, '\0');
        uint32_t n = static_cast<uint32_t>(cube.triangle_count());
        blob.append(reinterpret_cast<const char*>(&n), 4);
        for (int t = 0; t < cube.triangle_count(); ++t) {
            float rec[12] = {};
            for (int k = 0; k < 3; ++k) rec[k] = static_cast<float>(cube.face_normals[t][k]);
            for (int k = 0; k < 3; ++k) {
                Vec3 v = cube.triangle_vertex(t, k);
                for (int j = 0; j < 3; ++j) rec[3 + 3 * k + j] = static_cast<float>(v[j]);
            }
            blob.append(reinterpret_cast<const char*>(rec), 48);
            blob.append("\0\0", 2);
        }
        TempPath tmp(".stl");
        testsupport::write_file(tmp.str(), blob);
        TriangleMesh loaded = load_mesh(tmp.str());
        CHECK(loaded.vertex_count() == 8);
        CHECK(loaded.triangle_count() == 12);
    }

    SUBCASE("malformed obj raises a located parse error") {
        TempPath tmp(".obj");
        testsupport::write_file(tmp.str(), "v 0 0 0\nv 1 0 0\nf 1 2 9\n");
        CHECK_THROWS_AS(load_mesh(tmp.str()), ParseError);
    }
}

TEST_CASE("raycast reports the first hit past t_min") {
    TriangleMesh cube = make_box(Vec3(0.5, 0.5, 0.5));
    RayHit hit = raycast(cube, Vec3(-2, 0.1, 0.05), Vec3::UnitX(), 1e-7);
    REQUIRE(hit.hit);
    CHECK(hit.t == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(hit.point.x() == doctest::Approx(-0.5));

    // From the surface inward, skipping the self-face via t_min.
    RayHit through = raycast(cube, Vec3(-0.5, 0.1, 0.05), Vec3::UnitX(), 1e-7);
    REQUIRE(through.hit);
    CHECK(through.t == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_FALSE(raycast(cube, Vec3(0, 0, 2), Vec3::UnitZ(), 1e-7).hit);
}

TEST_CASE("convex hull: cube corners, interior points, half-space law") {
    std::vector<Vec3> corners;
    for (int x : {0, 1})
        for (int y : {0, 1})
            for (int z : {0, 1}) corners.emplace_back(x - 0.5, y - 0.5, z - 0.5);

    ConvexHull hull = convex_hull(corners);
    CHECK(hull.points.size() == 8);
    CHECK(hull.faces.size() == 12);
    CHECK(hull.volume() == doctest::Approx(1.0).epsilon(1e-12));

    auto with_inside = corners;
    with_inside.emplace_back(0.1, 0.0, -0.2);
    with_inside.emplace_back(0.0, 0.0, 0.0);
    ConvexHull hull2 = convex_hull(with_inside);
    CHECK(hull2.points.size() == 8);
    CHECK(hull2.volume() == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(3);
    std::vector<Vec3> ball;
    for (int i = 0; i < 100; ++i) {
        Vec3 p(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        if (p.norm() <= 1.0) ball.push_back(p);
        else --i;
    }
    ConvexHull bh = convex_hull(ball);
    for (const Vec3& p : ball) CHECK(bh.signed_distance(p) <= 1e-9);

    CHECK_THROWS_AS(convex_hull({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)}),
                    DegenerateError);
}

TEST_CASE("hull sanity: volume bounded by box, mesh com inside vertex hull") {
    for (auto mesh : {make_icosphere(0.4, 2), make_lbracket(0.08, 0.03, 0.04),
                      make_cylinder(0.03, 0.12, 16)}) {
        ConvexHull hull = convex_hull(mesh.vertices);
        Vec3 lo, hi;
        mesh.bounds(lo, hi);
        CHECK(hull.volume() <= (hi - lo).prod() + 1e-12);
        CHECK(hull.contains(mesh.com, 1e-9));
    }
}

TEST_CASE("pose encoding round-trips doubles bitwise") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        Transform t = testsupport::random_pose(rng, 10.0);
        Transform back = decode_pose(encode_pose(t));
        CHECK(std::memcmp(t.matrix().data(), back.matrix().data(), 16 * sizeof(double)) == 0);
    }
    for (double v : {0.1, 1.0 / 3.0, -0.0, 1e-300, 6.02e23, 0.049999999999999996}) {
        double back = std::stod(format_double(v));
        CHECK(std::memcmp(&v, &back, sizeof v) == 0);
    }
}

TEST_CASE("rotation helpers") {
    Rng rng(12);
    for (int i = 0; i < 20; ++i) {
        Vec3 axis(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        if (axis.norm() < 1e-6) continue;
        axis.normalize();
        Vec3 perp = stable_perpendicular(axis);
        CHECK(std::abs(perp.dot(axis)) < 1e-12);
        CHECK(perp.norm() == doctest::Approx(1.0));
        CHECK((stable_perpendicular(axis) - perp).norm() == 0.0);  // deterministic

        Vec3 from = stable_perpendicular(Vec3(axis.y(), axis.z(), axis.x()).normalized());
        Mat3 r = rotation_between(from, axis);
        CHECK((r * from - axis).norm() < 1e-12);
        CHECK(rotation_error(r, r) < 1e-12);
    }
    CHECK(rotation_error(Mat3::Identity(), rot_z(0.3).linear()) == doctest::Approx(0.3));
}

TEST_CASE("convex polygon margin is signed and exact on a square") {
    std::vector<Vec2> square = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    CHECK(point_in_convex_polygon_margin(Vec2(0, 0), square) == doctest::Approx(1.0));
    CHECK(point_in_convex_polygon_margin(Vec2(0.6, 0), square) == doctest::Approx(0.4));
    CHECK(point_in_convex_polygon_margin(Vec2(1.0, 0), square) == doctest::Approx(0.0));
    CHECK(point_in_convex_polygon_margin(Vec2(1.5, 0), square) < 0.0);
}

TEST_CASE("box-triangle SAT agrees with constructive cases and sampling") {
    OrientedBox box;
    box.pose = translate(Vec3(0, 0, 0));
    box.half = Vec3(0.5, 0.5, 0.5);

    // Vertex inside.
    CHECK(box_triangle_intersect(box, Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(2, 2, 0)));
    // Pierces a face without any vertex inside.
    CHECK(box_triangle_intersect(box, Vec3(-2, 0, 0.2), Vec3(2, 2, 0.2), Vec3(2, -2, 0.2)));
    // Fully outside.
    CHECK_FALSE(box_triangle_intersect(box, Vec3(2, 0, 0), Vec3(3, 0, 0), Vec3(2, 1, 0)));

    // Randomized one-sided oracle: a sampled triangle point inside the box
    // forces SAT-positive; SAT-negative forbids sampled containment.
    Rng rng(21);
    for (int i = 0; i < 300; ++i) {
        OrientedBox b;
        b.pose = testsupport::random_pose(rng, 0.5);
        b.half = Vec3(rng.uniform(0.05, 0.4), rng.uniform(0.05, 0.4), rng.uniform(0.05, 0.4));
        Vec3 a(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        Vec3 c(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        Vec3 d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        bool sat = box_triangle_intersect(b, a, c, d);
        bool sampled_hit = false;
        for (int s = 0; s < 200 && !sampled_hit; ++s) {
            double u = rng.uniform(), v = rng.uniform();
            if (u + v > 1.0) { u = 1.0 - u; v = 1.0 - v; }
            sampled_hit = b.contains(a + u * (c - a) + v * (d - a), -1e-9);
        }
        if (sampled_hit) CHECK(sat);
    }
}

TEST_CASE("cylinder-triangle test is conservative and rejects far geometry") {
    Cylinder cyl{Vec3(0, 0, 0), Vec3::UnitZ(), 1.0, 0.1};
    CHECK(cylinder_triangle_intersect(cyl, Vec3(0.05, 0, 0.5), Vec3(1, 0, 0.5), Vec3(1, 1, 0.5)));
    CHECK_FALSE(
        cylinder_triangle_intersect(cyl, Vec3(0.5, 0, 0.5), Vec3(1, 0, 0.5), Vec3(1, 1, 0.5)));

    Rng rng(22);
    for (int i = 0; i < 300; ++i) {
        Cylinder c{Vec3(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)),
                   Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)),
                   rng.uniform(0.1, 0.6), rng.uniform(0.02, 0.2)};
        if (c.axis.norm() < 1e-6) continue;
        c.axis.normalize();
        Vec3 a(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        Vec3 b(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        Vec3 d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        bool hit = cylinder_triangle_intersect(c, a, b, d);
        for (int s = 0; s < 100; ++s) {
            double u = rng.uniform(), v = rng.uniform();
            if (u + v > 1.0) { u = 1.0 - u; v = 1.0 - v; }
            Vec3 p = a + u * (b - a) + v * (d - a);
            if (c.contains(p, -1e-9)) {
                CHECK(hit);  // containment implies reported intersection
                break;
            }
        }
    }
}
