#include "regrasp/errors.hpp"
#include "regrasp/graph.hpp"
#include "regrasp/mesh_io.hpp"
#include "regrasp/store.hpp"
#include "regrasp/workspace.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace regrasp;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// --store flag > REGRASP_STORE env > config `store` key.
std::string resolve_store_path(const std::string& flag, const std::string& from_config) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("REGRASP_STORE"); env && *env) return env;
    return from_config;
}

std::vector<std::pair<std::string, std::string>> parse_overrides(
    const std::vector<std::string>& sets) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const std::string& s : sets) {
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw InvalidInputError("--set expects key=value, got '" + s + "'");
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return out;
}

// Pose argument: either "placement:<row-id>[:<x>:<y>:<yaw>]" against the
// stored free placements, or 12 whitespace-separated numbers.
Transform parse_pose_arg(const std::string& text, const Store& store, int64_t object_id) {
    if (text.rfind("placement:", 0) == 0) {
        std::string rest = text.substr(10);
        for (char& c : rest)
            if (c == ':') c = ' ';
        std::istringstream in(rest);
        int64_t id;
        double x = 0.0, y = 0.0, yaw = 0.0;
        if (!(in >> id)) throw InvalidInputError("bad placement pose argument '" + text + "'");
        in >> x >> y >> yaw;
        for (const FreePlacementRow& row : store.load_free_placements(object_id))
            if (row.id == id) return translate(Vec3(x, y, 0.0)) * rot_z(yaw) * row.rotmat;
        throw InvalidInputError("placement row " + std::to_string(id) +
                                " not found for this object");
    }
    return decode_pose(text);
}

int64_t require_object(const Store& store, const std::string& name) {
    if (auto id = store.find_object(name)) return *id;
    throw StoreError("object '" + name + "' is not in the store; run precompute first");
}

int64_t resolve_robot(const Store& store, const std::string& name) {
    auto robots = store.robots();
    if (!name.empty()) {
        for (const auto& [id, n] : robots)
            if (n == name) return id;
        throw InvalidInputError("robot '" + name + "' is not in the store");
    }
    if (robots.size() == 1) return robots.front().first;
    throw InvalidInputError(robots.empty() ? "store has no robots; run precompute first"
                                           : "store has several robots; pass --robot <name>");
}

const RobotModel& robot_model_by_name(const WorkspaceConfig& cfg, const std::string& name) {
    if (name.empty() && cfg.robots.size() == 1) return cfg.robots.front();
    for (const RobotModel& r : cfg.robots)
        if (r.name == name) return r;
    throw InvalidInputError("robot '" + name + "' is not in the workspace config");
}

int cmd_precompute(const std::string& config_path, const std::string& store_flag,
                   const std::vector<std::string>& sets, int threads_flag, bool quiet_timings) {
    WorkspaceConfig cfg = WorkspaceConfig::load(config_path, parse_overrides(sets));
    if (threads_flag > 0) {
        cfg.threads = threads_flag;
        cfg.plan.threads = threads_flag;
    }
    std::string store_path = resolve_store_path(store_flag, cfg.store_path);

    Store store(store_path);
    PrecomputeResult r = run_precompute(cfg, store);

    std::cout << "object " << cfg.object_name << "\n";
    std::cout << "#-tri " << r.n_triangles << "\n";
    std::cout << "#-fg " << r.n_free_grasps << "\n";
    if (!quiet_timings) std::cout << "t-fg " << r.t_free_grasps << "\n";
    std::cout << "#-fp " << r.n_free_placements << "\n";
    std::cout << "#-fpg ";
    for (size_t i = 0; i < r.grips_per_placement.size(); ++i)
        std::cout << (i ? "," : "") << r.grips_per_placement[i];
    std::cout << "\n";
    if (!quiet_timings) std::cout << "t-fp " << r.t_placements << "\n";
    std::cout << "#-tp " << r.n_tabletopplacements << "\n";
    std::cout << "#-tpg " << r.n_tabletopgrips << "\n";
    for (const auto& [robot, feasible] : r.feasible_per_robot)
        std::cout << "#-tpg-ik[" << robot << "] " << feasible << "\n";
    if (!quiet_timings) {
        std::cout << "t-tpgik " << r.t_tabletop_ik << "\n";
        std::cout << "t-save " << r.t_save << "\n";
    }
    std::cout << "store " << store_path << "\n";
    return 0;
}

int cmd_reorient(const std::string& config_path, const std::string& store_flag,
                 const std::string& robot_name, const std::string& init_arg,
                 const std::string& goal_arg, const std::string& out_path, bool quiet_timings) {
    WorkspaceConfig cfg = WorkspaceConfig::load(config_path);
    std::string store_path = resolve_store_path(store_flag, cfg.store_path);
    Store store(store_path);

    int64_t object_id = require_object(store, cfg.object_name);
    int64_t robot_id = resolve_robot(store, robot_name);
    const RobotModel& robot = robot_model_by_name(cfg, robot_name);
    TriangleMesh mesh = cfg.load_object();

    Transform init_pose = parse_pose_arg(init_arg, store, object_id);
    Transform goal_pose = parse_pose_arg(goal_arg, store, object_id);

    QueryContext ctx;
    ctx.mesh = &mesh;
    ctx.gripper = &cfg.gripper;
    ctx.robot = &robot;
    ctx.ik = cfg.ik;
    ctx.retraction = cfg.retraction;

    double t0 = now_seconds();
    ManipulationSequence seq =
        plan_reorientation(store, object_id, robot_id, init_pose, goal_pose, ctx);
    double gs = now_seconds() - t0;

    std::string doc = export_sequence_json(seq);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw InvalidInputError("cannot write sequence file '" + out_path + "'");
        out << doc;
    } else {
        std::cout << doc;
    }
    std::cout << "steps " << seq.steps.size() << "\n";
    std::cout << "nr " << seq.regrasp_count << "\n";
    if (!quiet_timings) std::cout << "gs " << gs << "\n";
    return 0;
}

void export_csv_tables(const Store& store, const std::string& table, const std::string& out) {
    namespace fs = std::filesystem;
    if (!table.empty()) {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw InvalidInputError("cannot write '" + out + "'");
        f << store.export_csv(table);
        return;
    }
    fs::create_directories(out);
    for (const std::string& name : Store::table_names()) {
        std::ofstream f(fs::path(out) / (name + ".csv"), std::ios::binary);
        if (!f) throw InvalidInputError("cannot write into '" + out + "'");
        f << store.export_csv(name);
    }
}

void export_placements_scene(const Store& store, const WorkspaceConfig& cfg,
                             const std::string& out) {
    int64_t object_id = require_object(store, cfg.object_name);
    TriangleMesh mesh = cfg.load_object();
    double spacing = 2.5 * mesh.bounding_radius();
    ObjSceneWriter scene(out);
    int i = 0;
    for (const FreePlacementRow& row : store.load_free_placements(object_id)) {
        Transform shift = translate(Vec3(0.0, spacing * i++, 0.0));
        scene.add_mesh("placement_" + std::to_string(row.id),
                       mesh.transformed(shift * row.rotmat));
    }
    scene.close();
}

void export_grasps_scene(const Store& store, const WorkspaceConfig& cfg, int64_t placement_row,
                         const std::string& out) {
    int64_t object_id = require_object(store, cfg.object_name);
    TriangleMesh mesh = cfg.load_object();

    const std::vector<FreePlacementRow> placements = store.load_free_placements(object_id);
    const FreePlacementRow* placement = nullptr;
    for (const FreePlacementRow& row : placements)
        if (row.id == placement_row) placement = &row;
    if (!placement) {
        if (placement_row >= 0 || placements.empty())
            throw InvalidInputError("placement row " + std::to_string(placement_row) +
                                    " not found; pass --placement <id>");
        placement = &placements.front();
    }

    ObjSceneWriter scene(out);
    scene.add_mesh("object", mesh.transformed(placement->rotmat));
    for (const FreeTabletopGripRow& grip : store.load_free_tabletop_grips(placement->id)) {
        int b = 0;
        for (const OrientedBox& box : cfg.gripper.glyph_boxes(grip.jaw_width)) {
            TriangleMesh glyph = make_box(box.half);
            scene.add_mesh("grip_" + std::to_string(grip.id) + "_box" + std::to_string(b++),
                           glyph.transformed(grip.hand_pose * box.pose));
        }
    }
    scene.close();
}

void export_graph_file(const Store& store, const WorkspaceConfig& cfg,
                       const std::string& robot_name, const std::string& out) {
    int64_t object_id = require_object(store, cfg.object_name);
    int64_t robot_id = resolve_robot(store, robot_name);
    RegraspGraph graph = build_graph(store, object_id, robot_id);
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InvalidInputError("cannot write '" + out + "'");
    f << export_graph_dot(graph);
    std::cout << "nodes " << graph.nodes.size() << "\n";
    std::cout << "edges " << graph.edges.size() << "\n";
}

int cmd_export(const std::string& config_path, const std::string& store_flag,
               const std::string& kind, const std::string& out, const std::string& table,
               const std::string& robot_name, int64_t placement_row) {
    WorkspaceConfig cfg = WorkspaceConfig::load(config_path);
    Store store(resolve_store_path(store_flag, cfg.store_path));
    if (kind == "csv")
        export_csv_tables(store, table, out);
    else if (kind == "placements")
        export_placements_scene(store, cfg, out);
    else if (kind == "grasps")
        export_grasps_scene(store, cfg, placement_row, out);
    else if (kind == "graph")
        export_graph_file(store, cfg, robot_name, out);
    else
        throw InvalidInputError("unknown export kind '" + kind +
                                "' (expected csv|graph|placements|grasps)");
    return 0;
}

int cmd_inspect(const std::string& config_path, const std::string& store_flag, bool audit) {
    std::string from_config;
    if (!config_path.empty())
        from_config = WorkspaceConfig::load(config_path).store_path;
    std::string store_path = resolve_store_path(store_flag, from_config);
    if (store_path.empty())
        throw InvalidInputError("pass --store <path> or --config <file>");
    Store store(store_path);

    for (const std::string& name : Store::table_names())
        std::cout << name << " " << store.table_counts()[name] << "\n";
    for (const auto& [id, name] : store.objects())
        std::cout << "object[" << id << "] " << name << "\n";
    for (const auto& [id, name] : store.robots())
        std::cout << "robot[" << id << "] " << name << "\n";

    if (audit) {
        auto counts = store.table_counts();
        for (const auto& [id, name] : store.objects()) {
            auto placements = store.load_free_placements(id);
            auto instances = store.load_tabletop_placements(id);
            size_t n_angles = store.load_angles().size();
            if (placements.empty() || n_angles == 0) continue;
            if (instances.size() % (placements.size() * n_angles) != 0)
                throw StoreError("cardinality audit failed for object '" + name + "'");
        }
        // Every stored pose must decode to a proper rotation.
        for (const auto& [id, name] : store.objects()) {
            for (const FreePlacementRow& row : store.load_free_placements(id)) {
                Mat3 r = row.rotmat.linear();
                if ((r * r.transpose() - Mat3::Identity()).norm() > 1e-9)
                    throw StoreError("non-orthonormal rotation in freetabletopplacement " +
                                     std::to_string(row.id));
            }
        }
        std::cout << "audit ok\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regrasp planning toolchain: precompute grasp/placement stores and answer "
                 "tabletop reorientation queries"};
    app.require_subcommand(1);

    std::string config_path, store_flag, out_path, table, robot_name, kind;
    std::string init_arg, goal_arg;
    std::vector<std::string> sets;
    int threads = 0;
    bool quiet_timings = false;
    bool audit = false;
    int64_t placement_row = -1;

    CLI::App* pre = app.add_subcommand("precompute", "Run the full pipeline into the store");
    pre->add_option("--config", config_path, "workspace config file")->required();
    pre->add_option("--store", store_flag, "store path override");
    pre->add_option("--set", sets, "override a config key (key=value)");
    pre->add_option("--threads", threads, "worker threads");
    pre->add_flag("--quiet-timings", quiet_timings, "suppress timing lines");

    CLI::App* reo = app.add_subcommand("reorient", "Plan a reorientation sequence");
    reo->add_option("--config", config_path, "workspace config file")->required();
    reo->add_option("--store", store_flag, "store path override");
    reo->add_option("--robot", robot_name, "robot name (required with several robots)");
    reo->add_option("--init", init_arg, "initial pose (placement:id[:x:y:yaw] or 12 numbers)")
        ->required();
    reo->add_option("--goal", goal_arg, "goal pose (same formats)")->required();
    reo->add_option("--out", out_path, "sequence JSON output path (default: stdout)");
    reo->add_flag("--quiet-timings", quiet_timings, "suppress timing lines");

    CLI::App* exp = app.add_subcommand("export", "Export store contents");
    exp->add_option("--config", config_path, "workspace config file")->required();
    exp->add_option("--store", store_flag, "store path override");
    exp->add_option("--kind", kind, "csv|graph|placements|grasps")->required();
    exp->add_option("--out", out_path, "output file (csv: directory unless --table)")->required();
    exp->add_option("--table", table, "single table for kind=csv");
    exp->add_option("--robot", robot_name, "robot name for kind=graph");
    exp->add_option("--placement", placement_row, "freetabletopplacement row for kind=grasps");

    CLI::App* ins = app.add_subcommand("inspect", "Row counts and invariant audit");
    ins->add_option("--config", config_path, "workspace config file");
    ins->add_option("--store", store_flag, "store path");
    ins->add_flag("--audit", audit, "run the invariant audit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (pre->parsed())
            return cmd_precompute(config_path, store_flag, sets, threads, quiet_timings);
        if (reo->parsed())
            return cmd_reorient(config_path, store_flag, robot_name, init_arg, goal_arg, out_path,
                                quiet_timings);
        if (exp->parsed())
            return cmd_export(config_path, store_flag, kind, out_path, table, robot_name,
                              placement_row);
        if (ins->parsed()) return cmd_inspect(config_path, store_flag, audit);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible (" << e.stage() << "): " << e.what() << "\n";
        return 3;
    } catch (const StoreError& e) {
        std::cerr << "store error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
