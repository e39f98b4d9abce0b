#pragma once

#include "regrasp/graspplan.hpp"
#include "regrasp/gripper.hpp"
#include "regrasp/kinematics.hpp"
#include "regrasp/mesh.hpp"
#include "regrasp/placement.hpp"
#include "regrasp/store.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace regrasp {

// Declarative experiment description: object + gripper + robots + table +
// thresholds. Paths inside the file resolve relative to its directory.
struct WorkspaceConfig {
    std::string object_path;
    std::string object_name;
    double object_scale = 1.0;

    GripperModel gripper;
    std::vector<RobotModel> robots;

    std::string store_path = "regrasp.db";

    double table_width = 0.6;
    double table_depth = 0.9;
    int grid_nx = 7;
    int grid_ny = 13;
    int angle_count = 8;

    RetractionSpec retraction;
    GraspPlanParams plan;
    double stability_threshold = 0.15;
    IkParams ik;
    int threads = 1;

    static WorkspaceConfig load(const std::string& path,
                                const std::vector<std::pair<std::string, std::string>>& overrides = {});

    std::vector<Vec2> grid() const;      // row-major cell centers, 0.0-centered
    std::vector<double> angles() const;  // k * 2pi / angle_count

    TriangleMesh load_object() const;
};

struct PrecomputeResult {
    int n_triangles = 0;
    int n_free_grasps = 0;
    int n_free_placements = 0;
    std::vector<int> grips_per_placement;  // Table I's #-fpg shape
    int64_t n_tabletopplacements = 0;
    int64_t n_tabletopgrips = 0;
    std::map<std::string, int64_t> feasible_per_robot;  // all three flags true

    double t_free_grasps = 0.0;   // Table I t-fg
    double t_placements = 0.0;    // Table I t-fp
    double t_tabletop_ik = 0.0;   // Table I t-tpgik
    double t_save = 0.0;

    IdMap ids;
};

// Full precompute pipeline into the store (atomic replace per object).
PrecomputeResult run_precompute(const WorkspaceConfig& cfg, Store& store);

}  // namespace regrasp
