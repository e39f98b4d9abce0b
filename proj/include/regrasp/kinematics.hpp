#pragma once

#include "regrasp/config.hpp"
#include "regrasp/transform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace regrasp {

struct Joint {
    std::string name;
    Vec3 axis = Vec3::UnitZ();               // unit, in the joint's local frame
    Transform origin = Transform::Identity();  // parent link -> joint frame
    double lo = -M_PI, hi = M_PI;
};

struct RobotModel {
    std::string name;
    std::vector<Joint> joints;
    Transform base_pose = Transform::Identity();
    Transform tool_transform = Transform::Identity();

    static RobotModel from_config(const ConfigFile& cfg);
    void validate() const;

    int dof() const { return static_cast<int>(joints.size()); }
    Eigen::VectorXd home() const;  // mid-range configuration
    // Upper bound on hand distance from base (sum of link offsets).
    double reach_radius() const;
};

struct IkParams {
    int seeds = 8;
    double tol_pos = 1e-3;   // m
    double tol_rot = 1e-2;   // rad
    int max_iterations = 200;
    double damping = 1e-3;
    uint64_t rng_seed = 0x5eedc0deULL;  // fixed schedule => reproducible tables
};

struct RetractionSpec {
    double handx_distance = 0.05;
    double worldz_distance = 0.05;
};

struct IkFeasibility {
    int robot_id = -1;
    int tabletopgrip_id = -1;
    bool feasibility = false;
    bool feasibility_handx = false;
    bool feasibility_handxworldz = false;
};

Transform fk(const RobotModel& robot, const Eigen::VectorXd& q);

std::optional<Eigen::VectorXd> ik_solve(const RobotModel& robot, const Transform& target,
                                        const IkParams& params = {});

// Three independent IK queries: the grip pose, the pose retracted along the
// hand's local x (approach), and that retraction lifted along world z.
IkFeasibility grip_feasibility(const RobotModel& robot, const Transform& grip_pose,
                               const RetractionSpec& ret, const IkParams& params = {});

}  // namespace regrasp
