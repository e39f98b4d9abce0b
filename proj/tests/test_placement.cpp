#include "doctest.h"

#include "regrasp/geometry_util.hpp"
#include "regrasp/mesh_io.hpp"
#include "regrasp/errors.hpp"
#include "regrasp/placement.hpp"

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace regrasp;
using testsupport::data_path;

namespace {

// Canonical-frame invariants every placement must satisfy for its mesh.
void check_canonical(const TriangleMesh& mesh, const Placement& pl) {
    double min_z = 1e18;
    for (const Vec3& v : mesh.vertices) min_z = std::min(min_z, (pl.rotmat * v).z());
    CHECK(std::abs(min_z) < 1e-9);  // support plane at z = 0

    Vec2 centroid = polygon_centroid(pl.support_polygon);
    CHECK(centroid.norm() < 1e-9);  // polygon centroid at the origin

    double theta = polygon_principal_angle(pl.support_polygon);
    double folded = std::abs(std::remainder(theta, M_PI));
    CHECK((folded < 1e-6 || std::abs(folded - M_PI / 2) < 1e-6));

    Vec3 com_t = pl.rotmat * mesh.com;
    CHECK(com_t.z() > 0.0);
    double margin = point_in_convex_polygon_margin(Vec2(com_t.x(), com_t.y()),
                                                   pl.support_polygon);
    CHECK(margin > 0.0);
    CHECK(pl.stability == doctest::Approx(margin / com_t.z()).epsilon(1e-9));

    // Every polygon vertex is the footprint of some mesh vertex resting on
    // the plane.
    for (const Vec2& p : pl.support_polygon) {
        double best = 1e18;
        for (const Vec3& v : mesh.vertices) {
            Vec3 t = pl.rotmat * v;
            best = std::min(best, std::abs(t.z()) + (Vec2(t.x(), t.y()) - p).norm());
        }
        CHECK(best < 1e-9);
    }
}

}  // namespace

TEST_CASE("cube rests on its six faces with unit stability") {
    TriangleMesh cube = make_box(Vec3(0.025, 0.025, 0.025));
    auto placements = stable_placements(cube);
    REQUIRE(placements.size() == 6);

    std::set<int> down_axes;  // which object axis points down, per placement
    for (const Placement& pl : placements) {
        CHECK(pl.stability == doctest::Approx(1.0).epsilon(1e-9));
        REQUIRE(pl.support_polygon.size() == 4);
        for (const Vec2& p : pl.support_polygon) {
            CHECK(std::abs(std::abs(p.x()) - 0.025) < 1e-9);
            CHECK(std::abs(std::abs(p.y()) - 0.025) < 1e-9);
        }
        check_canonical(cube, pl);
        Vec3 down = pl.rotmat.linear().transpose() * Vec3(0, 0, -1);
        for (int k = 0; k < 3; ++k)
            if (std::abs(std::abs(down[k]) - 1.0) < 1e-9)
                down_axes.insert(down[k] > 0 ? k : k + 3);
    }
    CHECK(down_axes.size() == 6);

    for (size_t i = 0; i < placements.size(); ++i)
        CHECK(placements[i].id == static_cast<int>(i));
}

TEST_CASE("unstable end placements are rejected by the threshold") {
    // 2 x 2 x 20 cm column: standing stability 0.01/0.1 = 0.1 < 0.15.
    TriangleMesh column = make_box(Vec3(0.01, 0.01, 0.1));
    auto placements = stable_placements(column);
    CHECK(placements.size() == 4);
    for (const Placement& pl : placements) {
        CHECK(pl.stability == doctest::Approx(1.0).epsilon(1e-9));
        check_canonical(column, pl);
    }

    // Lowering the threshold below 0.1 readmits the two ends.
    CHECK(stable_placements(column, 0.05).size() == 6);
}

TEST_CASE("threshold comparison is strict: prism ends sit exactly at 0.15") {
    TriangleMesh prism = load_mesh(data_path("meshes/prism.obj"));
    // End faces: margin 0.015 over com height 0.1 -- exactly the default
    // threshold, so they must be dropped.
    CHECK(stable_placements(prism).size() == 4);
    CHECK(stable_placements(prism, 0.14).size() == 6);
    for (const Placement& pl : stable_placements(prism)) check_canonical(prism, pl);
}

TEST_CASE("canonical invariants hold for bundled meshes") {
    for (const char* name : {"meshes/cylinder32.obj", "meshes/lbracket.obj",
                             "meshes/tallbox.obj", "meshes/cube.obj"}) {
        TriangleMesh mesh = load_mesh(data_path(name));
        auto placements = stable_placements(mesh);
        CHECK(!placements.empty());
        for (const Placement& pl : placements) check_canonical(mesh, pl);
    }
}

TEST_CASE("placement grips keep exactly the grasps that clear the table") {
    TriangleMesh cube = make_box(Vec3(0.025, 0.025, 0.025));
    GripperModel gripper;
    GraspPlanParams params;
    params.density = 30000;
    params.rng_seed = 7;
    FreeGraspPlan plan = plan_free_grasps(cube, gripper, params);
    REQUIRE(!plan.grasps.empty());
    auto placements = stable_placements(cube);
    REQUIRE(placements.size() == 6);

    size_t total = 0, dropped = 0;
    for (const Placement& pl : placements) {
        auto grips = placement_grips(pl, plan.grasps, gripper, 0.0);
        total += grips.size();

        // Brute-force recheck: a grasp survives iff no hand-box corner dips
        // below the table.
        std::set<int> expect;
        for (const GraspConfig& g : plan.grasps) {
            Transform pose = pl.rotmat * g.hand_pose;
            bool below = false;
            for (const OrientedBox& b : gripper.hand_boxes(pose, g.jaw_width))
                for (const Vec3& c : b.corners())
                    if (c.z() < -1e-12) below = true;
            if (!below) expect.insert(g.id);
        }
        dropped += plan.grasps.size() - expect.size();

        std::set<int> got;
        for (const FreeTabletopGrip& grip : grips) {
            got.insert(grip.freeairgrip_id);
            CHECK(grip.placement_id == pl.id);
            const GraspConfig& src = plan.grasps[grip.freeairgrip_id];
            CHECK(grip.jaw_width == src.jaw_width);
            CHECK((grip.hand_pose.matrix() - (pl.rotmat * src.hand_pose).matrix())
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
        }
        CHECK(got == expect);
        for (size_t i = 0; i < grips.size(); ++i)
            CHECK(grips[i].id == static_cast<int>(i));
    }
    CHECK(total > 0);
    CHECK(dropped > 0);  // some grasps must be blocked by the table
}

TEST_CASE("tabletop discretization is the full cartesian product") {
    TriangleMesh cube = make_box(Vec3(0.025, 0.025, 0.025));
    GripperModel gripper;
    GraspPlanParams params;
    params.density = 30000;
    params.rng_seed = 7;
    FreeGraspPlan plan = plan_free_grasps(cube, gripper, params);
    auto placements = stable_placements(cube);
    std::vector<std::vector<FreeTabletopGrip>> grips;
    for (const Placement& pl : placements)
        grips.push_back(placement_grips(pl, plan.grasps, gripper, 0.0));

    std::vector<Vec2> grid;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) grid.emplace_back(0.1 * i, 0.15 * j - 0.2);
    std::vector<double> angles;
    for (int k = 0; k < 4; ++k) angles.push_back(2.0 * M_PI * k / 4);

    TabletopData data = tabletop_discretize(placements, grips, grid, angles);

    SUBCASE("counting law") {
        CHECK(data.placements.size() == placements.size() * grid.size() * angles.size());
        size_t expect_grips = 0;
        for (const auto& g : grips) expect_grips += g.size() * grid.size() * angles.size();
        CHECK(data.grips.size() == expect_grips);

        // Per-instance grip counts match the placement's grip list.
        std::map<int, size_t> per_instance;
        for (const TabletopGrip& tg : data.grips) ++per_instance[tg.tabletopplacement_id];
        for (const TabletopPlacement& tp : data.placements) {
            size_t n = grips[tp.placement_id].size();
            size_t got = per_instance.count(tp.id) ? per_instance[tp.id] : 0;
            CHECK(got == n);
        }
    }

    SUBCASE("identity cell reproduces the canonical pose") {
        TabletopData one = tabletop_discretize(placements, grips, {Vec2(0, 0)}, {0.0});
        REQUIRE(one.placements.size() == placements.size());
        for (size_t i = 0; i < one.placements.size(); ++i) {
            CHECK((one.placements[i].world_pose.matrix() - placements[i].rotmat.matrix())
                      .cwiseAbs()
                      .maxCoeff() < 1e-15);
        }
    }

    SUBCASE("every world pose and grip follows the delta chain") {
        for (const TabletopPlacement& tp : data.placements) {
            const Placement& pl = placements[tp.placement_id];
            size_t gi = 0, ai = tp.angle_id;
            for (; gi < grid.size(); ++gi)
                if ((grid[gi] - tp.position).norm() == 0.0) break;
            REQUIRE(gi < grid.size());
            Transform delta = translate(Vec3(grid[gi].x(), grid[gi].y(), 0.0)) * rot_z(angles[ai]);
            CHECK((tp.world_pose.matrix() - (delta * pl.rotmat).matrix()).cwiseAbs().maxCoeff() ==
                  0.0);

            // Rest check: the object still touches z = 0 after the move.
            double min_z = 1e18;
            for (const Vec3& v : cube.vertices) min_z = std::min(min_z, (tp.world_pose * v).z());
            CHECK(std::abs(min_z) < 1e-9);
        }

        for (const TabletopGrip& tg : data.grips) {
            const TabletopPlacement& tp = data.placements[tg.tabletopplacement_id];
            // Undoing the world pose recovers the free grasp in object frame.
            Transform back = tp.world_pose.inverse() * tg.hand_pose;
            const GraspConfig& src = plan.grasps[tg.freeairgrip_id];
            CHECK((back.matrix() - src.hand_pose.matrix()).cwiseAbs().maxCoeff() < 1e-9);
            CHECK(tg.jaw_width == src.jaw_width);
        }
    }

    SUBCASE("ids are dense and ordered") {
        for (size_t i = 0; i < data.placements.size(); ++i)
            CHECK(data.placements[i].id == static_cast<int>(i));
        for (size_t i = 0; i < data.grips.size(); ++i)
            CHECK(data.grips[i].id == static_cast<int>(i));
    }

    SUBCASE("bad inputs are rejected") {
        CHECK_THROWS_AS(tabletop_discretize(placements, grips, {}, angles), InvalidInputError);
        CHECK_THROWS_AS(tabletop_discretize(placements, grips, grid, {}), InvalidInputError);
        grips.pop_back();
        CHECK_THROWS_AS(tabletop_discretize(placements, grips, grid, angles), InvalidInputError);
    }
}
