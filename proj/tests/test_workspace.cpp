#include "doctest.h"

#include "regrasp/errors.hpp"
#include "regrasp/workspace.hpp"

#include "test_support.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace regrasp;
using testsupport::TempPath;
using testsupport::data_path;
using testsupport::write_file;

namespace {

// Writes <dir>/ws.cfg plus a local gripper file, so relative resolution gets
// exercised alongside absolute paths.
std::string write_workspace(const std::string& dir, const std::string& extra) {
    std::filesystem::create_directories(dir);
    write_file(dir + "/g.cfg",
               "max_jaw_width = 0.08\n"
               "min_jaw_width = 0.0\n"
               "pad_half_extents = 0.01 0.01\n"
               "pad_sweep_cylinder_radius = 0.015\n"
               "finger_box = 0.02 0.012 0.008\n"
               "palm_box = 0.02 0.035 0.05\n"
               "palm_offset = 0.06\n"
               "friction_half_angle = 0.2967\n");
    std::ostringstream cfg;
    cfg << "object = " << data_path("meshes/cube.obj") << "\n";
    cfg << "gripper = g.cfg\n";
    cfg << "robot = " << data_path("configs/robot6.cfg") << "\n";
    cfg << extra;
    std::string path = dir + "/ws.cfg";
    write_file(path, cfg.str());
    return path;
}

}  // namespace

TEST_CASE("workspace defaults, relative resolution, and derived grids") {
    TempPath dir;
    std::string path = write_workspace(dir.str(), "");
    WorkspaceConfig ws = WorkspaceConfig::load(path);

    CHECK(ws.object_name == "cube");  // mesh stem
    CHECK(ws.object_scale == 1.0);
    CHECK(ws.store_path == dir.str() + "/regrasp.db");
    CHECK(ws.gripper.max_jaw_width == 0.08);
    REQUIRE(ws.robots.size() == 1);
    CHECK(ws.robots[0].name == "arm6");
    CHECK(ws.table_width == 0.6);
    CHECK(ws.table_depth == 0.9);
    CHECK(ws.grid_nx == 7);
    CHECK(ws.grid_ny == 13);
    CHECK(ws.angle_count == 8);
    CHECK(ws.stability_threshold == 0.15);
    CHECK(ws.plan.rotation_samples == 8);
    CHECK(ws.plan.tau == doctest::Approx(10.0 * M_PI / 180.0));
    CHECK(ws.plan.antipodal_tolerance == doctest::Approx(10.0 * M_PI / 180.0));
    CHECK(ws.plan.segmentation == SegmentationMode::OverSegment);
    CHECK(ws.plan.d_min == -1.0);
    CHECK(ws.retraction.handx_distance == 0.05);
    CHECK(ws.retraction.worldz_distance == 0.05);
    CHECK(ws.ik.seeds == 8);
    CHECK(ws.threads == 1);

    std::vector<Vec2> grid = ws.grid();
    REQUIRE(grid.size() == 91);
    CHECK(grid[0].x() == doctest::Approx(-0.3 + 0.6 / 14).epsilon(1e-12));
    CHECK(grid[0].y() == doctest::Approx(-0.45 + 0.9 / 26).epsilon(1e-12));
    CHECK(grid[1].x() - grid[0].x() == doctest::Approx(0.6 / 7));  // row-major in x
    CHECK(grid[1].y() == grid[0].y());
    CHECK(grid[7].x() == grid[0].x());
    CHECK(grid[7].y() - grid[0].y() == doctest::Approx(0.9 / 13));
    Vec2 sum = Vec2::Zero();
    for (const Vec2& c : grid) {
        sum += c;
        CHECK(std::abs(c.x()) <= 0.3);
        CHECK(std::abs(c.y()) <= 0.45);
    }
    CHECK(sum.norm() / grid.size() < 1e-12);  // cells cover the table symmetrically
    CHECK(grid.back().x() == doctest::Approx(-grid[0].x()));
    CHECK(grid.back().y() == doctest::Approx(-grid[0].y()));

    std::vector<double> angles = ws.angles();
    REQUIRE(angles.size() == 8);
    for (int k = 0; k < 8; ++k) CHECK(angles[k] == doctest::Approx(2.0 * M_PI * k / 8));

    TriangleMesh mesh = ws.load_object();
    CHECK(mesh.triangle_count() == 12);
    double extent = 0.0;
    for (const Vec3& v : mesh.vertices) extent = std::max(extent, v.cwiseAbs().maxCoeff());
    CHECK(extent == doctest::Approx(0.025));
}

TEST_CASE("overrides replace file values which replace defaults") {
    TempPath dir;
    std::string path = write_workspace(dir.str(), "grid_nx = 5\nangle_count = 4\n");
    WorkspaceConfig ws = WorkspaceConfig::load(
        path, {{"grid_nx", "3"}, {"object_scale", "2.0"}, {"store", "other.db"}});
    CHECK(ws.grid_nx == 3);      // override beats the file
    CHECK(ws.angle_count == 4);  // file beats the default
    CHECK(ws.grid_ny == 13);     // default survives
    CHECK(ws.store_path == dir.str() + "/other.db");
    CHECK(ws.object_scale == 2.0);
    TriangleMesh mesh = ws.load_object();
    double extent = 0.0;
    for (const Vec3& v : mesh.vertices) extent = std::max(extent, v.cwiseAbs().maxCoeff());
    CHECK(extent == doctest::Approx(0.05));
    CHECK(ws.grid().size() == 3 * 13);
    CHECK(ws.angles().size() == 4);
}

TEST_CASE("invalid workspace values are rejected") {
    TempPath dir;
    std::string path = write_workspace(dir.str(), "");
    auto load_with = [&](const char* k, const char* v) {
        return WorkspaceConfig::load(path, {{k, v}});
    };
    CHECK_THROWS_AS(load_with("grid_nx", "0"), InvalidInputError);
    CHECK_THROWS_AS(load_with("grid_ny", "-2"), InvalidInputError);
    CHECK_THROWS_AS(load_with("angle_count", "0"), InvalidInputError);
    CHECK_THROWS_AS(load_with("tau_deg", "95"), InvalidInputError);
    CHECK_THROWS_AS(load_with("tau_deg", "0"), InvalidInputError);
    CHECK_THROWS_AS(load_with("antipodal_tolerance_deg", "90"), InvalidInputError);
    CHECK_THROWS_AS(load_with("segmentation", "banana"), InvalidInputError);
    CHECK_THROWS_AS(load_with("density", "-5"), InvalidInputError);
    CHECK_THROWS_AS(load_with("max_samples", "0"), InvalidInputError);
    CHECK_THROWS_AS(load_with("rotation_samples", "0"), InvalidInputError);
    CHECK_THROWS_AS(load_with("stability_threshold", "1.0"), InvalidInputError);
    CHECK_THROWS_AS(load_with("stability_threshold", "-0.1"), InvalidInputError);
    CHECK_THROWS_AS(load_with("handx_distance", "-0.01"), InvalidInputError);
    CHECK_THROWS_AS(load_with("worldz_distance", "-1"), InvalidInputError);
    CHECK(load_with("segmentation", "conventional").plan.segmentation ==
          SegmentationMode::Conventional);
    CHECK(load_with("stability_threshold", "0").stability_threshold == 0.0);
}

TEST_CASE("several robots load from prefixed keys") {
    TempPath dir;
    std::string path = write_workspace(
        dir.str(), "robot.2 = " + data_path("configs/robot7.cfg") + "\n");
    WorkspaceConfig ws = WorkspaceConfig::load(path);
    REQUIRE(ws.robots.size() == 2);
    CHECK(ws.robots[0].name == "arm6");
    CHECK(ws.robots[1].name == "arm7");
    CHECK(ws.robots[0].dof() == 6);
    CHECK(ws.robots[1].dof() == 7);
}

TEST_CASE("run_precompute fills the store with consistent counts") {
    TempPath dir;
    std::string path = write_workspace(dir.str(),
                                       "density = 30000\n"
                                       "rng_seed = 7\n"
                                       "rotation_samples = 2\n"
                                       "grid_nx = 1\n"
                                       "grid_ny = 1\n"
                                       "angle_count = 1\n"
                                       "store = ws.db\n");
    WorkspaceConfig ws = WorkspaceConfig::load(path);
    Store store(ws.store_path);
    PrecomputeResult r = run_precompute(ws, store);

    CHECK(r.n_triangles == 12);
    CHECK(r.n_free_grasps > 10);
    CHECK(r.n_free_placements == 6);
    REQUIRE(r.grips_per_placement.size() == 6);
    int64_t total_grips = 0;
    int nonempty = 0;
    for (int g : r.grips_per_placement) {
        CHECK(g >= 0);
        nonempty += g > 0;
        total_grips += g;
    }
    CHECK(nonempty >= 3);  // two roll samples leave some placements gripless
    CHECK(total_grips > 0);
    CHECK(r.n_tabletopplacements == 6);  // 6 placements x 1 cell x 1 angle
    CHECK(r.n_tabletopgrips == total_grips);
    REQUIRE(r.feasible_per_robot.count("arm6") == 1);
    int64_t feasible = r.feasible_per_robot.at("arm6");
    CHECK(feasible >= 0);
    CHECK(feasible <= r.n_tabletopgrips);
    CHECK(r.t_free_grasps >= 0.0);
    CHECK(r.t_placements >= 0.0);
    CHECK(r.t_tabletop_ik >= 0.0);
    CHECK(r.t_save >= 0.0);
    CHECK(r.ids.object_id >= 1);

    auto counts = store.table_counts();
    CHECK(counts.at("object") == 1);
    CHECK(counts.at("robot") == 1);
    CHECK(counts.at("freeairgrip") == r.n_free_grasps);
    CHECK(counts.at("freetabletopplacement") == 6);
    CHECK(counts.at("freetabletopgrip") == total_grips);
    CHECK(counts.at("angle") == 1);
    CHECK(counts.at("tabletopplacements") == 6);
    CHECK(counts.at("tabletopgrips") == r.n_tabletopgrips);
    CHECK(counts.at("ikret") == 1);
    CHECK(counts.at("ik") == r.n_tabletopgrips);

    // The robot-filtered grip rows match the feasible tally.
    REQUIRE(store.robots().size() == 1);
    auto rows = store.load_grip_nodes(r.ids.object_id, store.robots().front().first);
    CHECK(static_cast<int64_t>(rows.size()) == feasible);

    // Rerunning replaces the object rather than duplicating it.
    PrecomputeResult r2 = run_precompute(ws, store);
    CHECK(r2.n_free_grasps == r.n_free_grasps);
    CHECK(r2.n_tabletopgrips == r.n_tabletopgrips);
    CHECK(r2.feasible_per_robot.at("arm6") == feasible);
    auto counts2 = store.table_counts();
    CHECK(counts2.at("object") == 1);
    CHECK(counts2.at("freeairgrip") == r.n_free_grasps);
    CHECK(counts2.at("tabletopgrips") == r.n_tabletopgrips);
    CHECK(counts2.at("ik") == r.n_tabletopgrips);
}
