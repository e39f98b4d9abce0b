#include "regrasp/workspace.hpp"

#include "regrasp/errors.hpp"
#include "regrasp/mesh_io.hpp"
#include "regrasp/parallel.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

namespace regrasp {

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

WorkspaceConfig WorkspaceConfig::load(
    const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
    ConfigFile cfg = ConfigFile::parse_file(path);
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    std::string dir = std::filesystem::path(path).parent_path().string();

    WorkspaceConfig ws;
    ws.object_path = resolve(dir, cfg.get_string("object"));
    ws.object_name = cfg.get_string(
        "object_name", std::filesystem::path(ws.object_path).stem().string());
    ws.object_scale = cfg.get_double("object_scale", 1.0);

    ws.gripper = GripperModel::from_config(
        ConfigFile::parse_file(resolve(dir, cfg.get_string("gripper"))));

    std::vector<std::string> robot_keys;
    if (cfg.has("robot")) robot_keys.push_back("robot");
    for (const std::string& k : cfg.keys_with_prefix("robot.")) robot_keys.push_back(k);
    for (const std::string& k : robot_keys)
        ws.robots.push_back(
            RobotModel::from_config(ConfigFile::parse_file(resolve(dir, cfg.get_string(k)))));

    ws.store_path = resolve(dir, cfg.get_string("store", "regrasp.db"));

    ws.table_width = cfg.get_double("table_width", 0.6);
    ws.table_depth = cfg.get_double("table_depth", 0.9);
    ws.grid_nx = cfg.get_int("grid_nx", 7);
    ws.grid_ny = cfg.get_int("grid_ny", 13);
    ws.angle_count = cfg.get_int("angle_count", 8);
    if (ws.grid_nx < 1 || ws.grid_ny < 1 || ws.angle_count < 1)
        throw InvalidInputError("grid_nx, grid_ny and angle_count must be >= 1");

    ws.retraction.handx_distance = cfg.get_double("handx_distance", 0.05);
    ws.retraction.worldz_distance = cfg.get_double("worldz_distance", 0.05);
    if (ws.retraction.handx_distance < 0.0 || ws.retraction.worldz_distance < 0.0)
        throw InvalidInputError("retraction distances must be >= 0");

    double tau_deg = cfg.get_double("tau_deg", 10.0);
    if (tau_deg <= 0.0 || tau_deg >= 90.0) throw InvalidInputError("tau_deg must be in (0, 90)");
    ws.plan.tau = tau_deg * M_PI / 180.0;
    std::string seg = cfg.get_string("segmentation", "overseg");
    if (seg == "overseg")
        ws.plan.segmentation = SegmentationMode::OverSegment;
    else if (seg == "conventional")
        ws.plan.segmentation = SegmentationMode::Conventional;
    else
        throw InvalidInputError("segmentation must be 'overseg' or 'conventional'");
    ws.plan.density = cfg.get_double("density", 400.0);
    ws.plan.max_samples = cfg.get_int("max_samples", 10000);
    if (ws.plan.density <= 0.0 || ws.plan.max_samples < 1)
        throw InvalidInputError("density and max_samples must be positive");
    double anti_deg = cfg.get_double("antipodal_tolerance_deg", 10.0);
    if (anti_deg <= 0.0 || anti_deg >= 90.0)
        throw InvalidInputError("antipodal_tolerance_deg must be in (0, 90)");
    ws.plan.antipodal_tolerance = anti_deg * M_PI / 180.0;
    ws.plan.rotation_samples = cfg.get_int("rotation_samples", 8);
    if (ws.plan.rotation_samples < 1) throw InvalidInputError("rotation_samples must be >= 1");
    ws.plan.d_min = cfg.get_double("d_min", -1.0);
    ws.plan.d_max = cfg.get_double("d_max", -1.0);
    ws.plan.merge_radius = cfg.get_double("merge_radius", -1.0);
    ws.plan.max_lever = cfg.get_double("max_lever", -1.0);
    ws.plan.approach_clearance = cfg.get_double("approach_clearance", 0.002);
    ws.plan.rng_seed = static_cast<uint64_t>(cfg.get_int("rng_seed", 0));

    ws.stability_threshold = cfg.get_double("stability_threshold", 0.15);
    if (ws.stability_threshold < 0.0 || ws.stability_threshold >= 1.0)
        throw InvalidInputError("stability_threshold must be in [0, 1)");

    ws.ik.seeds = cfg.get_int("ik_seeds", 8);
    ws.ik.max_iterations = cfg.get_int("ik_max_iterations", 200);
    ws.ik.tol_pos = cfg.get_double("ik_tol_pos", 1e-3);
    ws.ik.tol_rot = cfg.get_double("ik_tol_rot", 1e-2);
    ws.ik.damping = cfg.get_double("ik_damping", 1e-3);

    ws.threads = cfg.get_int("threads", 1);
    ws.plan.threads = ws.threads;
    return ws;
}

std::vector<Vec2> WorkspaceConfig::grid() const {
    std::vector<Vec2> out;
    out.reserve(static_cast<size_t>(grid_nx) * grid_ny);
    for (int iy = 0; iy < grid_ny; ++iy) {
        for (int ix = 0; ix < grid_nx; ++ix) {
            double x = (ix + 0.5) / grid_nx * table_width - 0.5 * table_width;
            double y = (iy + 0.5) / grid_ny * table_depth - 0.5 * table_depth;
            out.emplace_back(x, y);
        }
    }
    return out;
}

std::vector<double> WorkspaceConfig::angles() const {
    std::vector<double> out;
    for (int k = 0; k < angle_count; ++k) out.push_back(2.0 * M_PI * k / angle_count);
    return out;
}

TriangleMesh WorkspaceConfig::load_object() const {
    TriangleMesh mesh = load_mesh(object_path);
    if (object_scale != 1.0) mesh.scale(object_scale);
    return mesh;
}

PrecomputeResult run_precompute(const WorkspaceConfig& cfg, Store& store) {
    PrecomputeResult result;
    TriangleMesh mesh = cfg.load_object();
    result.n_triangles = mesh.triangle_count();

    double t0 = now_seconds();
    FreeGraspPlan plan = plan_free_grasps(mesh, cfg.gripper, cfg.plan);
    result.t_free_grasps = now_seconds() - t0;
    result.n_free_grasps = static_cast<int>(plan.grasps.size());

    t0 = now_seconds();
    std::vector<Placement> placements = stable_placements(mesh, cfg.stability_threshold);
    std::vector<std::vector<FreeTabletopGrip>> grips;
    grips.reserve(placements.size());
    for (const Placement& p : placements) {
        grips.push_back(placement_grips(p, plan.grasps, cfg.gripper));
        result.grips_per_placement.push_back(static_cast<int>(grips.back().size()));
    }
    TabletopData tabletop = tabletop_discretize(placements, grips, cfg.grid(), cfg.angles());
    result.t_placements = now_seconds() - t0;
    result.n_free_placements = static_cast<int>(placements.size());
    result.n_tabletopplacements = static_cast<int64_t>(tabletop.placements.size());
    result.n_tabletopgrips = static_cast<int64_t>(tabletop.grips.size());

    t0 = now_seconds();
    std::vector<RobotIk> ik_blocks;
    for (const RobotModel& robot : cfg.robots) {
        RobotIk block;
        block.robot_name = robot.name;
        block.rows.resize(tabletop.grips.size());
        parallel_for(static_cast<int>(tabletop.grips.size()), cfg.threads, [&](int i) {
            const TabletopGrip& g = tabletop.grips[i];
            IkFeasibility feas = grip_feasibility(robot, g.hand_pose, cfg.retraction, cfg.ik);
            feas.tabletopgrip_id = g.id;
            block.rows[i] = feas;
        });
        int64_t feasible = 0;
        for (const IkFeasibility& f : block.rows)
            if (f.feasibility && f.feasibility_handx && f.feasibility_handxworldz) ++feasible;
        result.feasible_per_robot[robot.name] = feasible;
        ik_blocks.push_back(std::move(block));
    }
    result.t_tabletop_ik = now_seconds() - t0;

    t0 = now_seconds();
    store.ensure_ikret(cfg.retraction);
    result.ids = store.save_pipeline(cfg.object_name, plan.grasps, placements, grips,
                                     cfg.angles(), tabletop, ik_blocks);
    result.t_save = now_seconds() - t0;
    return result;
}

}  // namespace regrasp
