#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regrasp/errors.hpp"
#include "regrasp/graph.hpp"
#include "regrasp/graspplan.hpp"
#include "regrasp/kinematics.hpp"
#include "regrasp/mesh_io.hpp"
#include "regrasp/placement.hpp"
#include "regrasp/segmentation.hpp"
#include "regrasp/store.hpp"
#include "regrasp/workspace.hpp"

namespace py = pybind11;
using namespace regrasp;

namespace {

Eigen::Matrix4d to_mat4(const Transform& t) { return t.matrix(); }

Transform from_mat4(const Eigen::Matrix4d& m) {
    Transform t;
    t.matrix() = m;
    return t;
}

py::dict sequence_to_dict(const ManipulationSequence& seq) {
    py::list steps;
    for (const SequenceStep& s : seq.steps) {
        py::dict d;
        d["freeairgrip"] = s.freeairgrip;
        d["grasp_pose"] = to_mat4(s.grasp_pose);
        d["jaw_width"] = s.jaw_width;
        d["pick_pose"] = to_mat4(s.pick_pose);
        d["place_pose"] = to_mat4(s.place_pose);
        steps.append(d);
    }
    py::dict out;
    out["steps"] = steps;
    out["regrasp_count"] = seq.regrasp_count;
    out["path_weight"] = seq.path_weight;
    out["node_path"] = seq.node_path;
    return out;
}

std::vector<std::pair<std::string, std::string>> to_overrides(const py::dict& d) {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto item : d)
        out.emplace_back(py::str(item.first).cast<std::string>(),
                         py::str(item.second).cast<std::string>());
    return out;
}

py::dict precompute(const std::string& config_path, const py::dict& overrides,
                    const std::string& store_path) {
    auto ov = to_overrides(overrides);
    if (!store_path.empty()) ov.emplace_back("store", store_path);
    WorkspaceConfig ws = WorkspaceConfig::load(config_path, ov);
    Store store(ws.store_path);
    PrecomputeResult r = run_precompute(ws, store);

    py::dict out;
    out["store"] = ws.store_path;
    out["n_triangles"] = r.n_triangles;
    out["n_free_grasps"] = r.n_free_grasps;
    out["n_free_placements"] = r.n_free_placements;
    out["grips_per_placement"] = r.grips_per_placement;
    out["n_tabletopplacements"] = r.n_tabletopplacements;
    out["n_tabletopgrips"] = r.n_tabletopgrips;
    out["feasible_per_robot"] = r.feasible_per_robot;
    out["t_free_grasps"] = r.t_free_grasps;
    out["t_placements"] = r.t_placements;
    out["t_tabletop_ik"] = r.t_tabletop_ik;
    out["t_save"] = r.t_save;
    return out;
}

py::dict reorient(const std::string& config_path, const Eigen::Matrix4d& init,
                  const Eigen::Matrix4d& goal, const std::string& store_path,
                  const std::string& robot_name) {
    std::vector<std::pair<std::string, std::string>> ov;
    if (!store_path.empty()) ov.emplace_back("store", store_path);
    WorkspaceConfig ws = WorkspaceConfig::load(config_path, ov);
    if (ws.robots.empty()) throw InvalidInputError("workspace has no robot");

    const RobotModel* robot = &ws.robots.front();
    if (!robot_name.empty()) {
        robot = nullptr;
        for (const RobotModel& r : ws.robots)
            if (r.name == robot_name) robot = &r;
        if (!robot) throw InvalidInputError("robot '" + robot_name + "' not in workspace");
    }

    Store store(ws.store_path);
    auto obj = store.find_object(ws.object_name);
    if (!obj) throw StoreError("object '" + ws.object_name + "' not in store");
    int64_t robot_id = -1;
    for (const auto& [id, name] : store.robots())
        if (name == robot->name) robot_id = id;
    if (robot_id < 0) throw StoreError("robot '" + robot->name + "' not in store");

    TriangleMesh mesh = ws.load_object();
    QueryContext ctx;
    ctx.mesh = &mesh;
    ctx.gripper = &ws.gripper;
    ctx.robot = robot;
    ctx.ik = ws.ik;
    ctx.retraction = ws.retraction;

    ManipulationSequence seq =
        plan_reorientation(store, *obj, robot_id, from_mat4(init), from_mat4(goal), ctx);
    return sequence_to_dict(seq);
}

}  // namespace

PYBIND11_MODULE(_regrasp, m) {
    m.doc() = "Regrasp planning: grasp/placement precomputation and reorientation queries";

    py::register_exception<InvalidInputError>(m, "InvalidInputError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<StoreError>(m, "StoreError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "MeshParseError", PyExc_ValueError);

    py::class_<TriangleMesh>(m, "Mesh")
        .def_static("load", [](const std::string& path) { return load_mesh(path); }, py::arg("path"))
        .def_property_readonly("triangle_count", &TriangleMesh::triangle_count)
        .def_property_readonly("vertex_count",
                               [](const TriangleMesh& m) { return m.vertices.size(); })
        .def_readonly("total_area", &TriangleMesh::total_area)
        .def_readonly("com", &TriangleMesh::com)
        .def_property_readonly("bounding_radius", &TriangleMesh::bounding_radius)
        .def("scale", &TriangleMesh::scale, py::arg("factor"))
        .def("__repr__", [](const TriangleMesh& m) {
            return "<Mesh " + std::to_string(m.vertices.size()) + " verts, " +
                   std::to_string(m.triangles.size()) + " tris>";
        });

    py::class_<GripperModel>(m, "Gripper")
        .def(py::init<>())
        .def_static("from_config",
                    [](const std::string& path) {
                        return GripperModel::from_config(ConfigFile::parse_file(path));
                    },
                    py::arg("path"))
        .def_readwrite("max_jaw_width", &GripperModel::max_jaw_width)
        .def_readwrite("min_jaw_width", &GripperModel::min_jaw_width)
        .def_readwrite("palm_offset", &GripperModel::palm_offset)
        .def_readwrite("pad_sweep_cylinder_radius", &GripperModel::pad_sweep_cylinder_radius)
        .def_readwrite("friction_half_angle", &GripperModel::friction_half_angle)
        .def("validate", &GripperModel::validate);

    py::class_<RobotModel>(m, "Robot")
        .def_static("from_config",
                    [](const std::string& path) {
                        return RobotModel::from_config(ConfigFile::parse_file(path));
                    },
                    py::arg("path"))
        .def_readonly("name", &RobotModel::name)
        .def_property_readonly("dof", &RobotModel::dof)
        .def_property_readonly("reach_radius", &RobotModel::reach_radius)
        .def("home", &RobotModel::home);

    py::class_<GraspPlanParams>(m, "GraspPlanParams")
        .def(py::init<>())
        .def_readwrite("tau", &GraspPlanParams::tau)
        .def_readwrite("density", &GraspPlanParams::density)
        .def_readwrite("max_samples", &GraspPlanParams::max_samples)
        .def_readwrite("antipodal_tolerance", &GraspPlanParams::antipodal_tolerance)
        .def_readwrite("rotation_samples", &GraspPlanParams::rotation_samples)
        .def_readwrite("d_min", &GraspPlanParams::d_min)
        .def_readwrite("d_max", &GraspPlanParams::d_max)
        .def_readwrite("merge_radius", &GraspPlanParams::merge_radius)
        .def_readwrite("max_lever", &GraspPlanParams::max_lever)
        .def_readwrite("rng_seed", &GraspPlanParams::rng_seed)
        .def_property(
            "conventional",
            [](const GraspPlanParams& p) {
                return p.segmentation == SegmentationMode::Conventional;
            },
            [](GraspPlanParams& p, bool conv) {
                p.segmentation =
                    conv ? SegmentationMode::Conventional : SegmentationMode::OverSegment;
            });

    py::class_<GraspConfig>(m, "Grasp")
        .def_property_readonly("hand_pose",
                               [](const GraspConfig& g) { return to_mat4(g.hand_pose); })
        .def_readonly("jaw_width", &GraspConfig::jaw_width)
        .def_readonly("rotation_index", &GraspConfig::rotation_index)
        .def_property_readonly("contact0", [](const GraspConfig& g) { return g.pair.p0; })
        .def_property_readonly("contact1", [](const GraspConfig& g) { return g.pair.p1; })
        .def_property_readonly("normal0", [](const GraspConfig& g) { return g.pair.n0; })
        .def_property_readonly("normal1", [](const GraspConfig& g) { return g.pair.n1; });

    py::class_<Placement>(m, "Placement")
        .def_property_readonly("pose", [](const Placement& p) { return to_mat4(p.rotmat); })
        .def_readonly("stability", &Placement::stability)
        .def_readonly("support_polygon", &Placement::support_polygon);

    m.def(
        "segment",
        [](const TriangleMesh& mesh, double tau, bool conventional) {
            std::vector<Facet> facets =
                conventional ? segment_conventional(mesh, tau) : oversegment(mesh, tau);
            std::vector<std::vector<int>> out;
            out.reserve(facets.size());
            for (const Facet& f : facets) out.push_back(f.triangle_ids);
            return out;
        },
        py::arg("mesh"), py::arg("tau"), py::arg("conventional") = false,
        "Facet triangle ids from over-segmentation (default) or conventional segmentation");

    m.def(
        "plan_free_grasps",
        [](const TriangleMesh& mesh, const GripperModel& gripper, const GraspPlanParams& params) {
            return plan_free_grasps(mesh, gripper, params).grasps;
        },
        py::arg("mesh"), py::arg("gripper"), py::arg("params") = GraspPlanParams());

    m.def(
        "stable_placements",
        [](const TriangleMesh& mesh, double threshold) {
            return stable_placements(mesh, threshold);
        },
        py::arg("mesh"), py::arg("stability_threshold") = 0.15);

    m.def(
        "fk",
        [](const RobotModel& robot, const Eigen::VectorXd& q) { return to_mat4(fk(robot, q)); },
        py::arg("robot"), py::arg("q"));

    m.def(
        "ik",
        [](const RobotModel& robot, const Eigen::Matrix4d& target,
           std::optional<uint64_t> seed) -> std::optional<Eigen::VectorXd> {
            IkParams params;
            if (seed) params.rng_seed = *seed;
            return ik_solve(robot, from_mat4(target), params);
        },
        py::arg("robot"), py::arg("target"), py::arg("seed") = std::nullopt,
        "Damped least-squares IK; returns a joint vector or None");

    py::class_<Store>(m, "Store")
        .def(py::init<const std::string&>(), py::arg("path"))
        .def("table_counts", &Store::table_counts)
        .def("export_csv", &Store::export_csv, py::arg("table"))
        .def("objects", &Store::objects)
        .def("robots", &Store::robots)
        .def_static("table_names", &Store::table_names);

    m.def("precompute", &precompute, py::arg("config"), py::arg("overrides") = py::dict(),
          py::arg("store") = std::string(),
          "Run the full pipeline for a workspace config; returns counts and timings");

    m.def("reorient", &reorient, py::arg("config"), py::arg("init"), py::arg("goal"),
          py::arg("store") = std::string(), py::arg("robot") = std::string(),
          "Plan a reorientation between two world poses (4x4 matrices)");
}
